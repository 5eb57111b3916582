#include "mimocep/cepstrum.hpp"

#include "mimocep/error.hpp"
#include "mimocep/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mimocep {

const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::exact: return "exact";
        case Provenance::model: return "model";
        case Provenance::data: return "data";
    }
    return "unknown";
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "exact") return Provenance::exact;
    if (s == "model") return Provenance::model;
    if (s == "data") return Provenance::data;
    throw ValidationError("unknown cepstrum provenance '" + s + "'");
}

namespace {

bool conjugate_closed(std::span<const cplx> roots) {
    std::vector<cplx> conj(roots.size());
    std::transform(roots.begin(), roots.end(), conj.begin(), [](cplx z) { return std::conj(z); });
    return max_pairing_distance(roots, conj) <= 1e-9;
}

void check_inside(std::span<const cplx> roots, const char* what) {
    for (const cplx r : roots)
        if (!(std::abs(r) < 1.0))
            throw ValidationError(std::string("exact_cepstrum: ") + what + " " + std::to_string(r.real()) +
                                  (r.imag() < 0 ? "" : "+") + std::to_string(r.imag()) + "i has modulus " +
                                  std::to_string(std::abs(r)) + " (must be < 1)");
}

// sum_j r_j^k / k for k = 1..K.
std::vector<cplx> power_sums(std::span<const cplx> roots, std::size_t order) {
    std::vector<cplx> s(order + 1, 0.0);
    for (const cplx r : roots) {
        cplx pw = 1.0;
        for (std::size_t k = 1; k <= order; ++k) {
            pw *= r;
            s[k] += pw / static_cast<double>(k);
        }
    }
    return s;
}

}  // namespace

CepstrumSequence exact_cepstrum(std::span<const cplx> poles, std::span<const cplx> zeros, double gain,
                                std::size_t order) {
    if (!(gain != 0.0) || !std::isfinite(gain)) throw ValidationError("exact_cepstrum: gain must be finite and nonzero");
    check_inside(poles, "pole");
    check_inside(zeros, "zero");
    CepstrumSequence out;
    out.provenance = Provenance::exact;
    out.zeroth_reliable = true;
    if (!conjugate_closed(poles) || !conjugate_closed(zeros))
        out.warnings.push_back("complex roots are not in conjugate pairs; imaginary parts were dropped");
    const auto sp = power_sums(poles, order), sz = power_sums(zeros, order);
    out.coeffs.resize(order + 1);
    out.coeffs[0] = std::log(gain * gain);
    for (std::size_t k = 1; k <= order; ++k) out.coeffs[k] = (sp[k] - sz[k]).real();
    return out;
}

CepstrumSequence model_cepstrum(const RationalMatrix& h, std::size_t order, const SmithMcMillanOptions& opts) {
    const auto smf = smith_mcmillan(h, opts);
    const std::size_t full = std::min(h.rows(), h.cols());
    if (smf.normal_rank < full)
        throw ValidationError("model_cepstrum: normal rank " + std::to_string(smf.normal_rank) + " is below min(m, l) = " +
                              std::to_string(full));
    const auto pz = pole_zero_roots(smf);
    auto out = exact_cepstrum(pz.poles, pz.zeros, pz.gain, order);
    out.provenance = Provenance::model;
    out.zeroth_reliable = true;
    out.warnings.insert(out.warnings.end(), smf.warnings.begin(), smf.warnings.end());
    return out;
}

CepstrumSequence model_cepstrum(const StateSpaceModel& model, std::size_t order) {
    if (!model.is_stable()) {
        for (const cplx p : poles(model))
            if (std::abs(p) >= 1.0)
                throw ValidationError("model is not stable: pole modulus " + std::to_string(std::abs(p)));
    }
    auto tf = transfer_matrix(model);
    auto out = model_cepstrum(tf.matrix, order);
    out.warnings.insert(out.warnings.begin(), tf.warnings.begin(), tf.warnings.end());
    return out;
}

CepstrumSequence spectrum_cepstrum(const StateSpaceModel& model, std::size_t order, std::size_t grid_size) {
    if (model.inputs() != model.outputs())
        throw ValidationError("spectrum_cepstrum: needs a square model (m = l)");
    CepstrumSequence out;
    out.provenance = Provenance::model;
    out.zeroth_reliable = false;
    out.coeffs = inverse_fourier_coeffs(logdet_spectrum(transfer_spectrum(model, grid_size)), order);
    return out;
}

CepstrumSequence data_cepstrum(const SignalRecord& x, const WelchParams& params, std::size_t order, unsigned threads) {
    CepstrumSequence out;
    out.provenance = Provenance::data;
    out.zeroth_reliable = false;
    out.coeffs = inverse_fourier_coeffs(logdet_spectrum(welch_psd(x, params), 1e-12, threads), order);
    return out;
}

CepstrumSequence system_cepstrum_from_io(const SignalRecord& u, const SignalRecord& y, const WelchParams& params,
                                         std::size_t order, unsigned threads) {
    if (u.channel_count() != y.channel_count())
        throw ValidationError("system cepstrum needs as many outputs as inputs (got l = " +
                              std::to_string(u.channel_count()) + ", m = " + std::to_string(y.channel_count()) +
                              "); no data-driven scheme is known for non-square systems (m != l)");
    if (u.length() != y.length())
        throw ValidationError("input and output lengths differ (" + std::to_string(u.length()) + " vs " +
                              std::to_string(y.length()) + ")");
    const auto cu = data_cepstrum(u, params, order, threads);
    const auto cy = data_cepstrum(y, params, order, threads);
    CepstrumSequence out;
    out.provenance = Provenance::data;
    out.zeroth_reliable = false;
    out.coeffs.resize(order + 1);
    for (std::size_t k = 0; k <= order; ++k) out.coeffs[k] = cy.coeffs[k] - cu.coeffs[k];
    return out;
}

double fingerprint_distance(const CepstrumSequence& a, const CepstrumSequence& b, std::span<const double> weights) {
    if (a.coeffs.size() != b.coeffs.size())
        throw ValidationError("fingerprint_distance: orders differ (" + std::to_string(a.order()) + " vs " +
                              std::to_string(b.order()) + ")");
    const std::size_t order = a.order();
    if (!weights.empty() && weights.size() != order)
        throw ValidationError("fingerprint_distance: expected " + std::to_string(order) + " weights, got " +
                              std::to_string(weights.size()));
    double sum = 0.0;
    for (std::size_t k = 1; k <= order; ++k) {
        const double d = a.coeffs[k] - b.coeffs[k];
        sum += (weights.empty() ? 1.0 : weights[k - 1]) * d * d;
    }
    return std::sqrt(sum);
}

std::size_t truncation_order(std::span<const cplx> roots, double target) {
    if (!(target > 0.0)) throw ValidationError("truncation_order: target must be positive");
    double rmax = 0.0;
    for (const cplx r : roots) {
        if (!(std::abs(r) < 1.0)) throw ValidationError("truncation_order: roots must lie inside the unit circle");
        rmax = std::max(rmax, std::abs(r));
    }
    if (rmax == 0.0) return 0;
    for (std::size_t k = 0; k < 1'000'000; ++k) {
        double bound = 0.0;
        for (const cplx r : roots) {
            const double m = std::abs(r);
            bound += std::pow(m, static_cast<double>(k + 1)) / (static_cast<double>(k + 1) * (1.0 - m));
        }
        if (2.0 * bound <= target) return k;
    }
    throw NumericalError("truncation_order: no order below 10^6 meets the target");
}

double exact_log_spectrum(std::span<const cplx> poles, std::span<const cplx> zeros, double gain, double omega) {
    const cplx e = std::polar(1.0, -omega);
    double v = std::log(gain * gain);
    for (const cplx a : poles) v -= 2.0 * std::log(std::abs(1.0 - a * e));
    for (const cplx b : zeros) v += 2.0 * std::log(std::abs(1.0 - b * e));
    return v;
}

}  // namespace mimocep
