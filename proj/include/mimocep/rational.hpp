#pragma once

#include "mimocep/polynomial.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mimocep {

/// Relative root distance under which two roots count as the same root
/// when cancelling common factors.
inline constexpr double kDefaultRootTol = 1e-6;

/// Monic approximate greatest common divisor.
///
/// Roots of both inputs are paired when closer than tol * max(1, |r|); the
/// result is the monic polynomial over the paired roots. Throws
/// ValidationError when both inputs are zero and NumericalError when the
/// candidate fails to divide either input (relative remainder above 1e-6).
Polynomial poly_gcd(const Polynomial& p, const Polynomial& q, double tol = kDefaultRootTol);

/// gain * numerator(z) / denominator(z) with monic, coprime numerator and
/// denominator. The zero function has gain 0 and unit polynomials.
class RationalFunction {
public:
    RationalFunction();

    /// Arbitrary (non-monic) polynomials; leading coefficients are folded into
    /// the gain and common roots closer than root_tol are cancelled.
    RationalFunction(const Polynomial& num, const Polynomial& den, double root_tol = kDefaultRootTol);

    /// Already-factored form; num and den are normalized the same way.
    RationalFunction(double gain, const Polynomial& num, const Polynomial& den,
                     double root_tol = kDefaultRootTol);

    static RationalFunction constant(double c);

    double gain() const { return gain_; }
    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }
    bool is_zero() const { return gain_ == 0.0; }

    /// deg(num) - deg(den); meaningless for the zero function.
    int relative_degree() const { return num_.degree() - den_.degree(); }

    cplx operator()(cplx z) const { return gain_ * num_(z) / den_(z); }

private:
    void normalize(double root_tol);

    double gain_ = 0.0;
    Polynomial num_{1.0};
    Polynomial den_{1.0};
};

/// m x l grid of rational functions (row-major).
class RationalMatrix {
public:
    RationalMatrix(std::size_t rows, std::size_t cols);
    RationalMatrix(std::size_t rows, std::size_t cols, std::vector<RationalFunction> entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const RationalFunction& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    RationalFunction& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    Eigen::MatrixXcd evaluate(cplx z) const;

private:
    std::size_t rows_, cols_;
    std::vector<RationalFunction> entries_;
};

/// Matrix with real polynomial entries (row-major).
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(std::size_t rows, std::size_t cols);
    static PolyMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    Polynomial& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }

    int max_degree() const;
    Eigen::MatrixXcd evaluate(cplx z) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Polynomial> entries_;
};

}  // namespace mimocep
