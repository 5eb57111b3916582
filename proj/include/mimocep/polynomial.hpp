#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace mimocep {

using cplx = std::complex<double>;

/// Operations refuse polynomials above this degree.
inline constexpr int kMaxDegree = 64;

/// Degree reported for the zero polynomial.
inline constexpr int kZeroDegree = -1;

/// Polynomial in z with coefficients stored in ascending powers.
///
/// The representation is kept trimmed: the leading coefficient is nonzero
/// unless the polynomial is identically zero, in which case the coefficient
/// vector is empty.
template <typename T>
class BasicPolynomial {
public:
    using value_type = T;

    BasicPolynomial() = default;
    explicit BasicPolynomial(std::vector<T> ascending);
    BasicPolynomial(std::initializer_list<T> ascending);

    static BasicPolynomial constant(T c);
    /// c·z^degree
    static BasicPolynomial monomial(int degree, T c = T(1));

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<T>& coeffs() const { return coeffs_; }

    /// Coefficient of z^k; zero beyond the stored range.
    T operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : T(0); }
    T leading() const { return coeffs_.empty() ? T(0) : coeffs_.back(); }

    cplx operator()(cplx z) const;
    double norm_inf() const;

    /// Scaled to unit leading coefficient. Zero stays zero.
    BasicPolynomial monic() const;
    BasicPolynomial derivative() const;

    /// Drops leading coefficients with magnitude <= tol; the result is zero
    /// when every coefficient is below tol.
    BasicPolynomial trimmed(double tol) const;

    BasicPolynomial& operator+=(const BasicPolynomial& o);
    BasicPolynomial& operator-=(const BasicPolynomial& o);
    BasicPolynomial& operator*=(T s);

    friend BasicPolynomial operator+(BasicPolynomial a, const BasicPolynomial& b) { return a += b; }
    friend BasicPolynomial operator-(BasicPolynomial a, const BasicPolynomial& b) { return a -= b; }
    friend BasicPolynomial operator*(BasicPolynomial a, T s) { return a *= s; }
    friend BasicPolynomial operator*(T s, BasicPolynomial a) { return a *= s; }
    friend BasicPolynomial operator-(BasicPolynomial a) { return a *= T(-1); }
    friend BasicPolynomial operator*(const BasicPolynomial& a, const BasicPolynomial& b) {
        return a.times(b);
    }

    bool operator==(const BasicPolynomial&) const = default;

private:
    BasicPolynomial times(const BasicPolynomial& o) const;
    void trim();

    std::vector<T> coeffs_;
};

using Polynomial = BasicPolynomial<double>;
using ComplexPolynomial = BasicPolynomial<cplx>;

extern template class BasicPolynomial<double>;
extern template class BasicPolynomial<cplx>;

template <typename T>
struct DivMod {
    BasicPolynomial<T> quotient;
    BasicPolynomial<T> remainder;
};

/// Euclidean division. Throws ValidationError for a zero divisor.
template <typename T>
DivMod<T> divmod(const BasicPolynomial<T>& p, const BasicPolynomial<T>& q);

/// Product with degree deg(p)+deg(q). Throws ValidationError above kMaxDegree.
template <typename T>
BasicPolynomial<T> poly_mul(const BasicPolynomial<T>& p, const BasicPolynomial<T>& q);

/// Monic polynomial prod (z - r). Complex roots of a real polynomial must
/// come in conjugate pairs; a residual imaginary part above 1e-8 relative
/// raises ValidationError.
Polynomial real_poly_from_roots(std::span<const cplx> roots);
ComplexPolynomial poly_from_roots(std::span<const cplx> roots);

ComplexPolynomial to_complex(const Polynomial& p);

}  // namespace mimocep
