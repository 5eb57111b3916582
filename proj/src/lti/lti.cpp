#include "mimocep/lti.hpp"

#include "mimocep/error.hpp"
#include "mimocep/roots.hpp"
#include "mimocep/smith_mcmillan.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace mimocep {

namespace {

constexpr int kMaxStates = 64;

std::string dims(const Eigen::MatrixXd& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

Eigen::Index matrix_rank(const Eigen::MatrixXd& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) return 0;
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol * s(0)) ++r;
    return r;
}

}  // namespace

StateSpaceModel::StateSpaceModel(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    const auto n = a_.rows();
    if (a_.cols() != n) throw ValidationError("A must be square, got " + dims(a_));
    if (n > kMaxStates) throw ValidationError("state dimension above the cap of " + std::to_string(kMaxStates));
    if (b_.rows() != n) throw ValidationError("B must have " + std::to_string(n) + " rows, got " + dims(b_));
    if (c_.cols() != n) throw ValidationError("C must have " + std::to_string(n) + " columns, got " + dims(c_));
    if (d_.rows() != c_.rows() || d_.cols() != b_.cols())
        throw ValidationError("D must be " + std::to_string(c_.rows()) + "x" + std::to_string(b_.cols()) +
                              ", got " + dims(d_));
    if (d_.rows() == 0 || d_.cols() == 0) throw ValidationError("model needs at least one input and one output");
    if (!a_.allFinite() || !b_.allFinite() || !c_.allFinite() || !d_.allFinite())
        throw ValidationError("model matrices contain non-finite values");
}

bool StateSpaceModel::is_stable() const {
    for (const cplx p : poles(*this))
        if (std::abs(p) >= 1.0) return false;
    return true;
}

bool StateSpaceModel::is_minimal(double rank_tol) const {
    const auto n = a_.rows();
    if (n == 0) return true;
    Eigen::MatrixXd ctrb(n, n * b_.cols());
    Eigen::MatrixXd obsv(n * c_.rows(), n);
    Eigen::MatrixXd ab = b_;
    Eigen::MatrixXd ca = c_;
    for (Eigen::Index k = 0; k < n; ++k) {
        ctrb.middleCols(k * b_.cols(), b_.cols()) = ab;
        obsv.middleRows(k * c_.rows(), c_.rows()) = ca;
        ab = a_ * ab;
        ca = ca * a_;
    }
    return matrix_rank(ctrb, rank_tol) == n && matrix_rank(obsv, rank_tol) == n;
}

Eigen::MatrixXcd StateSpaceModel::frequency_response(cplx z) const {
    const auto n = a_.rows();
    Eigen::MatrixXcd out = d_.cast<cplx>();
    if (n == 0) return out;
    const Eigen::MatrixXcd resolvent = z * Eigen::MatrixXcd::Identity(n, n) - a_.cast<cplx>();
    out += c_.cast<cplx>() * resolvent.partialPivLu().solve(b_.cast<cplx>());
    return out;
}

SignalRecord::SignalRecord(Eigen::MatrixXd data, double ts, std::vector<std::string> names)
    : channels(std::move(data)), sample_time(ts), labels(std::move(names)) {
    if (channels.rows() < 1 || channels.cols() < 1) throw ValidationError("signal needs at least one channel and one sample");
    if (!(sample_time > 0.0)) throw ValidationError("sample time must be positive");
    if (labels.empty())
        for (Eigen::Index i = 0; i < channels.rows(); ++i) labels.push_back("ch" + std::to_string(i));
    if (labels.size() != static_cast<std::size_t>(channels.rows()))
        throw ValidationError("signal has " + std::to_string(channels.rows()) + " channels but " +
                              std::to_string(labels.size()) + " labels");
}

SignalRecord SignalRecord::slice(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > length())
        throw ValidationError("signal slice [" + std::to_string(begin) + "," + std::to_string(end) +
                              ") out of range for length " + std::to_string(length()));
    return SignalRecord(channels.middleCols(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)),
                        sample_time, labels);
}

SignalRecord simulate(const StateSpaceModel& model, const SignalRecord& u, const Eigen::VectorXd& x0) {
    if (u.channel_count() != model.inputs())
        throw ValidationError("simulate: input has " + std::to_string(u.channel_count()) + " channels, model expects " +
                              std::to_string(model.inputs()));
    if (static_cast<std::size_t>(x0.size()) != model.states())
        throw ValidationError("simulate: x0 has length " + std::to_string(x0.size()) + ", model has " +
                              std::to_string(model.states()) + " states");
    const Eigen::Index n = static_cast<Eigen::Index>(u.length());
    Eigen::MatrixXd y(static_cast<Eigen::Index>(model.outputs()), n);
    Eigen::VectorXd x = x0;
    for (Eigen::Index k = 0; k < n; ++k) {
        y.col(k).noalias() = model.C() * x + model.D() * u.channels.col(k);
        x = model.A() * x + model.B() * u.channels.col(k);
    }
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < model.outputs(); ++i) labels.push_back("y" + std::to_string(i));
    return SignalRecord(std::move(y), u.sample_time, std::move(labels));
}

SignalRecord simulate(const StateSpaceModel& model, const SignalRecord& u) {
    return simulate(model, u, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.states())));
}

Polynomial characteristic_polynomial(const Eigen::MatrixXd& m) {
    if (m.rows() == 0) return Polynomial{1.0};
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
    std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    return real_poly_from_roots(ev);
}

std::vector<cplx> poles(const StateSpaceModel& model) {
    if (model.states() == 0) return {};
    Eigen::EigenSolver<Eigen::MatrixXd> es(model.A(), false);
    if (es.info() != Eigen::Success) throw NumericalError("poles: eigenvalue iteration did not converge");
    return {es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size()};
}

TransferMatrixResult transfer_matrix(const StateSpaceModel& model) {
    const std::size_t m = model.outputs(), l = model.inputs();
    for (const cplx p : poles(model))
        if (std::abs(std::abs(p) - 1.0) < 1e-12)
            throw NumericalError("transfer_matrix: pole on the unit circle (|p| = " + std::to_string(std::abs(p)) +
                                 "), system is not stable");

    TransferMatrixResult out{RationalMatrix(m, l), true, {}};
    if (!model.is_minimal()) {
        out.minimal = false;
        out.warnings.push_back("realization is not minimal; pole/zero cancellations are resolved numerically");
    }

    const Polynomial char_a = characteristic_polynomial(model.A());
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < l; ++j) {
            const Eigen::MatrixXd bc = model.B().col(static_cast<Eigen::Index>(j)) *
                                       model.C().row(static_cast<Eigen::Index>(i));
            const Polynomial char_shift = characteristic_polynomial(model.A() - bc);
            const double dij = model.D()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            const double scale = std::max({char_a.norm_inf(), char_shift.norm_inf(), std::abs(dij) * char_a.norm_inf()});
            Polynomial num = (char_shift - char_a + char_a * dij).trimmed(1e-12 * scale);
            if (num.norm_inf() <= 1e-12 * scale) num = Polynomial{};
            out.matrix(i, j) = RationalFunction(num, char_a);
        }

    double worst = 0.0;
    for (int k = 0; k < 64; ++k) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 64.0);
        const Eigen::MatrixXcd ref = model.frequency_response(z);
        worst = std::max(worst, (out.matrix.evaluate(z) - ref).norm() / std::max(ref.norm(), 1e-300));
    }
    if (worst > 1e-5)
        throw NumericalError("transfer_matrix: entries disagree with the frequency response (relative error " +
                             std::to_string(worst) + ")");
    if (worst > 1e-8)
        out.warnings.push_back("transfer matrix agrees with the frequency response only to " + std::to_string(worst));
    return out;
}

TransmissionZeros transmission_zeros(const StateSpaceModel& model) {
    TransmissionZeros out;
    const auto n = static_cast<Eigen::Index>(model.states());
    if (model.inputs() != model.outputs()) {
        const auto smf = smith_mcmillan(transfer_matrix(model).matrix);
        out.zeros = pole_zero_roots(smf).zeros;
    } else if (n > 0) {
        const auto m = static_cast<Eigen::Index>(model.inputs());
        Eigen::MatrixXd pencil_a(n + m, n + m), pencil_e = Eigen::MatrixXd::Zero(n + m, n + m);
        pencil_a << model.A(), model.B(), model.C(), model.D();
        pencil_e.topLeftCorner(n, n).setIdentity();
        Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(pencil_a, pencil_e, false);
        if (ges.info() != Eigen::Success) throw NumericalError("transmission_zeros: QZ iteration did not converge");
        const double scale = std::max(1.0, pencil_a.norm());
        for (Eigen::Index k = 0; k < n + m; ++k) {
            const cplx alpha = ges.alphas()(k);
            const double beta = ges.betas()(k);
            if (std::abs(beta) <= 1e-10 * std::max(std::abs(alpha), 1e-300) * scale) continue;
            const cplx z = alpha / beta;
            if (std::abs(z) > 1e8) continue;
            out.zeros.push_back(z);
        }
        out.zeros = conjugate_symmetrize(std::move(out.zeros));
    }
    for (const cplx z : out.zeros)
        for (const cplx p : poles(model))
            if (std::abs(z - p) < 1e-6) out.near_pole = true;
    return out;
}

}  // namespace mimocep
