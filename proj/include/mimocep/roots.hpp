#pragma once

#include "mimocep/polynomial.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace mimocep {

struct RootFinderOptions {
    int max_iterations = 500;
    /// Residual acceptance: |p(r)| <= residual_tol * sum |a_i| |r|^i.
    double residual_tol = 1e-8;
};

/// All deg(p) roots with multiplicity.
///
/// Aberth-Ehrlich simultaneous iteration; falls back to the eigenvalues of
/// the companion matrix when the iteration cap is hit. For real
/// coefficients the result is made exactly conjugate-symmetric.
/// Throws ValidationError for degree < 1 or > kMaxDegree and NumericalError
/// when neither method meets the residual tolerance.
std::vector<cplx> poly_roots(const Polynomial& p, const RootFinderOptions& opts = {});
std::vector<cplx> poly_roots(const ComplexPolynomial& p, const RootFinderOptions& opts = {});

/// Pairs near-conjugate roots exactly and snaps near-real roots onto the
/// real axis, as expected for the roots of a real polynomial.
std::vector<cplx> conjugate_symmetrize(std::vector<cplx> roots);

/// True when two roots lie closer than `tol` (the simple-roots assumption
/// is violated and downstream results lose accuracy).
bool has_root_cluster(std::span<const cplx> roots, double tol = 1e-6);

/// Minimum-cost one-to-one assignment between two root sets of equal size
/// (Hungarian algorithm on |a_i - b_j|). Returns perm with a[i] <-> b[perm[i]].
std::vector<std::size_t> optimal_pairing(std::span<const cplx> a, std::span<const cplx> b);

/// Largest pairwise distance under the optimal pairing; +inf on size mismatch.
double max_pairing_distance(std::span<const cplx> a, std::span<const cplx> b);

struct RootSetSplit {
    std::vector<cplx> common;       ///< averaged matched pairs
    std::vector<cplx> only_first;
    std::vector<cplx> only_second;
};

/// Splits two root multisets into matched and unmatched parts. Pairs closer
/// than tol * max(1, |r|) are matched, closest pairs first.
RootSetSplit match_root_sets(std::span<const cplx> a, std::span<const cplx> b, double tol);

}  // namespace mimocep
