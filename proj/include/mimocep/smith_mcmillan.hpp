#pragma once

#include "mimocep/polynomial.hpp"
#include "mimocep/rational.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mimocep {

struct SmithMcMillanOptions {
    /// Coefficients below zero_tol times the operand scale are treated as
    /// zero during the elementary-operation reduction.
    double zero_tol = 1e-9;
    /// Relative root distance for cancelling numerator/denominator factors.
    double root_tol = kDefaultRootTol;
    /// Guard against non-terminating pivot cycles.
    int max_pivot_steps = 1000;
};

/// V1(z) H(z) V2(z) = M(z), with M pseudo-diagonal:
/// diag{ g_i b_i(z) / a_i(z) } in the leading r x r block, zeros elsewhere,
/// a_{i+1} | a_i and b_i | b_{i+1}.
///
/// The reduction only swaps rows/columns and adds polynomial multiples, so
/// the gains stay on the diagonal and det V1, det V2 are +-1 up to
/// round-off. The determinant constants are measured from the computed
/// matrices rather than assumed.
struct SmithMcMillanForm {
    std::vector<RationalFunction> diag;
    PolyMatrix left;   ///< V1, rows x rows
    PolyMatrix right;  ///< V2, cols x cols
    cplx left_det_const{1.0};   ///< c_V1 = det(V1^{-1})
    cplx right_det_const{1.0};  ///< c_V2 = det(V2^{-1})
    std::size_t normal_rank = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::string> warnings;

    /// M(z) as a dense rows x cols matrix.
    Eigen::MatrixXcd pseudo_diagonal(cplx z) const;
};

/// Throws ValidationError for degree-cap violations and NumericalError with
/// the pivot position when the reduction breaks down.
SmithMcMillanForm smith_mcmillan(const RationalMatrix& h, const SmithMcMillanOptions& opts = {});

struct PoleZeroPolynomials {
    Polynomial zeros;  ///< b(z) = prod b_i
    Polynomial poles;  ///< a(z) = prod a_i
    double gain = 1.0; ///< g = prod g_i
};

PoleZeroPolynomials pole_zero_polynomials(const SmithMcMillanForm& smf);

struct PoleZeroRoots {
    std::vector<cplx> zeros;
    std::vector<cplx> poles;
    double gain = 1.0;
};

/// Roots of b(z) and a(z), gathered per diagonal entry (same multiset as
/// the roots of the products, better conditioned).
PoleZeroRoots pole_zero_roots(const SmithMcMillanForm& smf);

/// max over points of ||V1 H V2 - M||_F / ||M||_F.
double reconstruction_error(const RationalMatrix& h, const SmithMcMillanForm& smf, std::span<const cplx> points);

/// Largest relative spread of det V(z) over the points (0 for unimodular).
double determinant_spread(const PolyMatrix& v, std::span<const cplx> points);

}  // namespace mimocep
