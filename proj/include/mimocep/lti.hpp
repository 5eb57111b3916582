#pragma once

#include "mimocep/polynomial.hpp"
#include "mimocep/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace mimocep {

/// Discrete-time realization x(k+1) = A x(k) + B u(k), y(k) = C x(k) + D u(k).
class StateSpaceModel {
public:
    /// Throws ValidationError on inconsistent dimensions or non-finite entries.
    StateSpaceModel(Eigen::MatrixXd a, Eigen::MatrixXd b, Eigen::MatrixXd c, Eigen::MatrixXd d);

    const Eigen::MatrixXd& A() const { return a_; }
    const Eigen::MatrixXd& B() const { return b_; }
    const Eigen::MatrixXd& C() const { return c_; }
    const Eigen::MatrixXd& D() const { return d_; }

    std::size_t states() const { return static_cast<std::size_t>(a_.rows()); }
    std::size_t inputs() const { return static_cast<std::size_t>(b_.cols()); }
    std::size_t outputs() const { return static_cast<std::size_t>(c_.rows()); }

    /// All |eig(A)| < 1.
    bool is_stable() const;
    /// Controllability and observability matrices both have rank n.
    bool is_minimal(double rank_tol = 1e-9) const;

    /// D + C (zI - A)^{-1} B
    Eigen::MatrixXcd frequency_response(cplx z) const;

private:
    Eigen::MatrixXd a_, b_, c_, d_;
};

/// c x N multichannel signal.
struct SignalRecord {
    Eigen::MatrixXd channels;
    double sample_time = 1.0;
    std::vector<std::string> labels;

    SignalRecord() = default;
    /// Labels default to ch0, ch1, ... Throws ValidationError on empty data,
    /// non-positive sample time or a label count mismatch.
    SignalRecord(Eigen::MatrixXd data, double sample_time = 1.0, std::vector<std::string> labels = {});

    std::size_t channel_count() const { return static_cast<std::size_t>(channels.rows()); }
    std::size_t length() const { return static_cast<std::size_t>(channels.cols()); }

    /// Samples [begin, end).
    SignalRecord slice(std::size_t begin, std::size_t end) const;
};

/// Runs the recursion from x0. Throws ValidationError on dimension mismatch.
SignalRecord simulate(const StateSpaceModel& model, const SignalRecord& u, const Eigen::VectorXd& x0);
SignalRecord simulate(const StateSpaceModel& model, const SignalRecord& u);

struct TransferMatrixResult {
    RationalMatrix matrix;
    bool minimal = true;
    std::vector<std::string> warnings;
};

/// Entry-wise D + C (zI-A)^{-1} B with common factors cancelled.
///
/// Numerators are formed as det(zI - A + B_j C_i) - det(zI - A) + D_ij det(zI - A).
/// The result is checked against the direct frequency response on a
/// 64-point unit-circle grid. Throws NumericalError when A has an
/// eigenvalue on the unit circle or the check fails.
TransferMatrixResult transfer_matrix(const StateSpaceModel& model);

/// eig(A) with multiplicity.
std::vector<cplx> poles(const StateSpaceModel& model);

struct TransmissionZeros {
    std::vector<cplx> zeros;
    /// Some zero lies within 1e-6 of a pole (the realization is probably
    /// not minimal and the two may cancel).
    bool near_pole = false;
};

/// Square systems: finite generalized eigenvalues of the pencil
/// [[A - zI, B], [C, D]]. Non-square systems: roots of the Smith-McMillan
/// zero polynomial.
TransmissionZeros transmission_zeros(const StateSpaceModel& model);

/// Monic characteristic polynomial det(zI - M) from the eigenvalues of M.
Polynomial characteristic_polynomial(const Eigen::MatrixXd& m);

}  // namespace mimocep
