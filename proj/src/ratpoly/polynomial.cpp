#include "mimocep/polynomial.hpp"

#include "mimocep/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mimocep {

namespace {

double magnitude(double v) { return std::abs(v); }
double magnitude(cplx v) { return std::abs(v); }

}  // namespace

template <typename T>
BasicPolynomial<T>::BasicPolynomial(std::vector<T> ascending) : coeffs_(std::move(ascending)) {
    trim();
}

template <typename T>
BasicPolynomial<T>::BasicPolynomial(std::initializer_list<T> ascending) : coeffs_(ascending) {
    trim();
}

template <typename T>
BasicPolynomial<T> BasicPolynomial<T>::constant(T c) {
    return BasicPolynomial(std::vector<T>{c});
}

template <typename T>
BasicPolynomial<T> BasicPolynomial<T>::monomial(int degree, T c) {
    if (degree < 0) throw ValidationError("monomial degree must be non-negative");
    std::vector<T> v(static_cast<std::size_t>(degree) + 1, T(0));
    v.back() = c;
    return BasicPolynomial(std::move(v));
}

template <typename T>
void BasicPolynomial<T>::trim() {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
}

template <typename T>
cplx BasicPolynomial<T>::operator()(cplx z) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + cplx(*it);
    return acc;
}

template <typename T>
double BasicPolynomial<T>::norm_inf() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, magnitude(c));
    return m;
}

template <typename T>
BasicPolynomial<T> BasicPolynomial<T>::monic() const {
    if (is_zero()) return *this;
    BasicPolynomial r = *this;
    const T lead = leading();
    for (auto& c : r.coeffs_) c /= lead;
    r.coeffs_.back() = T(1);
    return r;
}

template <typename T>
BasicPolynomial<T> BasicPolynomial<T>::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<T> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * T(static_cast<double>(k));
    return BasicPolynomial(std::move(d));
}

template <typename T>
BasicPolynomial<T> BasicPolynomial<T>::trimmed(double tol) const {
    BasicPolynomial r = *this;
    while (!r.coeffs_.empty() && magnitude(r.coeffs_.back()) <= tol) r.coeffs_.pop_back();
    return r;
}

template <typename T>
BasicPolynomial<T>& BasicPolynomial<T>::operator+=(const BasicPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
}

template <typename T>
BasicPolynomial<T>& BasicPolynomial<T>::operator-=(const BasicPolynomial& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), T(0));
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
}

template <typename T>
BasicPolynomial<T>& BasicPolynomial<T>::operator*=(T s) {
    for (auto& c : coeffs_) c *= s;
    trim();
    return *this;
}

template <typename T>
BasicPolynomial<T> BasicPolynomial<T>::times(const BasicPolynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<T> r(coeffs_.size() + o.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
    return BasicPolynomial(std::move(r));
}

template class BasicPolynomial<double>;
template class BasicPolynomial<cplx>;

template <typename T>
DivMod<T> divmod(const BasicPolynomial<T>& p, const BasicPolynomial<T>& q) {
    if (q.is_zero()) throw ValidationError("polynomial division by zero");
    if (p.degree() < q.degree()) return {BasicPolynomial<T>{}, p};
    std::vector<T> rem = p.coeffs();
    const std::size_t dq = static_cast<std::size_t>(q.degree());
    const std::size_t dp = static_cast<std::size_t>(p.degree());
    std::vector<T> quot(dp - dq + 1, T(0));
    const T lead = q.leading();
    for (std::size_t k = dp - dq + 1; k-- > 0;) {
        const T c = rem[k + dq] / lead;
        quot[k] = c;
        for (std::size_t j = 0; j <= dq; ++j) rem[k + j] -= c * q.coeffs()[j];
        rem[k + dq] = T(0);
    }
    rem.resize(dq);
    return {BasicPolynomial<T>(std::move(quot)), BasicPolynomial<T>(std::move(rem))};
}

template DivMod<double> divmod(const Polynomial&, const Polynomial&);
template DivMod<cplx> divmod(const ComplexPolynomial&, const ComplexPolynomial&);

template <typename T>
BasicPolynomial<T> poly_mul(const BasicPolynomial<T>& p, const BasicPolynomial<T>& q) {
    if (!p.is_zero() && !q.is_zero() && p.degree() + q.degree() > kMaxDegree)
        throw ValidationError("poly_mul: product degree " + std::to_string(p.degree() + q.degree()) +
                              " exceeds the cap of " + std::to_string(kMaxDegree));
    return p * q;
}

template Polynomial poly_mul(const Polynomial&, const Polynomial&);
template ComplexPolynomial poly_mul(const ComplexPolynomial&, const ComplexPolynomial&);

ComplexPolynomial poly_from_roots(std::span<const cplx> roots) {
    std::vector<cplx> c{1.0};
    for (const cplx r : roots) {
        c.push_back(0.0);
        for (std::size_t k = c.size() - 1; k > 0; --k) c[k] = c[k - 1] - r * c[k];
        c[0] = -r * c[0];
    }
    return ComplexPolynomial(std::move(c));
}

Polynomial real_poly_from_roots(std::span<const cplx> roots) {
    const ComplexPolynomial cp = poly_from_roots(roots);
    std::vector<double> re(cp.coeffs().size());
    double scale = 0.0, imag = 0.0;
    for (std::size_t k = 0; k < re.size(); ++k) {
        re[k] = cp.coeffs()[k].real();
        scale = std::max(scale, std::abs(cp.coeffs()[k]));
        imag = std::max(imag, std::abs(cp.coeffs()[k].imag()));
    }
    if (imag > 1e-8 * std::max(1.0, scale))
        throw ValidationError("real_poly_from_roots: roots are not closed under conjugation");
    return Polynomial(std::move(re));
}

ComplexPolynomial to_complex(const Polynomial& p) {
    std::vector<cplx> c(p.coeffs().begin(), p.coeffs().end());
    return ComplexPolynomial(std::move(c));
}

}  // namespace mimocep
