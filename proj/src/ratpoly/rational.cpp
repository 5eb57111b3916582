#include "mimocep/rational.hpp"

#include "mimocep/error.hpp"
#include "mimocep/roots.hpp"

#include <algorithm>
#include <cmath>

namespace mimocep {

namespace {

constexpr double kGcdRemainderTol = 1e-6;

double relative_remainder(const Polynomial& p, const Polynomial& g) {
    const Polynomial pm = p.monic();
    const auto dm = divmod(pm, g);
    return dm.remainder.norm_inf() / std::max(1.0, pm.norm_inf());
}

}  // namespace

Polynomial poly_gcd(const Polynomial& p, const Polynomial& q, double tol) {
    if (p.is_zero() && q.is_zero()) throw ValidationError("poly_gcd: both inputs are zero");
    if (p.is_zero()) return q.monic();
    if (q.is_zero()) return p.monic();
    if (p.degree() == 0 || q.degree() == 0) return Polynomial{1.0};
    const auto rp = poly_roots(p);
    const auto rq = poly_roots(q);
    const auto split = match_root_sets(rp, rq, tol);
    if (split.common.empty()) return Polynomial{1.0};
    const Polynomial g = real_poly_from_roots(split.common);
    const double rem = std::max(relative_remainder(p, g), relative_remainder(q, g));
    if (rem > kGcdRemainderTol)
        throw NumericalError("poly_gcd: degenerate conditioning, remainder " + std::to_string(rem) +
                             " stagnates above tolerance");
    return g;
}

RationalFunction::RationalFunction() = default;

RationalFunction::RationalFunction(const Polynomial& num, const Polynomial& den, double root_tol)
    : gain_(1.0), num_(num), den_(den) {
    normalize(root_tol);
}

RationalFunction::RationalFunction(double gain, const Polynomial& num, const Polynomial& den, double root_tol)
    : gain_(gain), num_(num), den_(den) {
    normalize(root_tol);
}

RationalFunction RationalFunction::constant(double c) {
    return RationalFunction(Polynomial{c}, Polynomial{1.0});
}

void RationalFunction::normalize(double root_tol) {
    if (den_.is_zero()) throw ValidationError("rational function with zero denominator");
    if (!std::isfinite(gain_)) throw ValidationError("rational function with non-finite gain");
    if (num_.is_zero() || gain_ == 0.0) {
        gain_ = 0.0;
        num_ = Polynomial{1.0};
        den_ = Polynomial{1.0};
        return;
    }
    gain_ *= num_.leading() / den_.leading();
    num_ = num_.monic();
    den_ = den_.monic();
    if (num_.degree() < 1 || den_.degree() < 1) return;
    const auto rn = poly_roots(num_);
    const auto rd = poly_roots(den_);
    const auto split = match_root_sets(rn, rd, root_tol);
    if (split.common.empty()) return;
    num_ = real_poly_from_roots(split.only_first);
    den_ = real_poly_from_roots(split.only_second);
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols) {
    if (rows == 0 || cols == 0) throw ValidationError("rational matrix dimensions must be positive");
}

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols, std::vector<RationalFunction> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw ValidationError("rational matrix dimensions must be positive");
    if (entries_.size() != rows * cols) throw ValidationError("rational matrix entry count mismatch");
}

Eigen::MatrixXcd RationalMatrix::evaluate(cplx z) const {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j)(z);
    return out;
}

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

PolyMatrix PolyMatrix::identity(std::size_t n) {
    PolyMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Polynomial{1.0};
    return m;
}

int PolyMatrix::max_degree() const {
    int d = kZeroDegree;
    for (const auto& p : entries_) d = std::max(d, p.degree());
    return d;
}

Eigen::MatrixXcd PolyMatrix::evaluate(cplx z) const {
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j)(z);
    return out;
}

}  // namespace mimocep
