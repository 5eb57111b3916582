#include "mimocep/error.hpp"
#include "mimocep/polynomial.hpp"
#include "mimocep/rational.hpp"
#include "mimocep/roots.hpp"

#include <doctest.h>

#include <algorithm>
#include <vector>

using namespace mimocep;

TEST_CASE("polynomial arithmetic and trimming") {
    Polynomial p{1.0, 2.0, 0.0};
    CHECK(p.degree() == 1);
    CHECK(Polynomial{}.degree() == kZeroDegree);
    const Polynomial q{-1.0, 1.0};
    const auto prod = p * q;  // (1 + 2z)(z - 1) = -1 - z + 2z^2
    CHECK(prod == Polynomial{-1.0, -1.0, 2.0});
    CHECK((prod - prod).is_zero());
    CHECK(std::abs(prod(cplx(2.0)) - cplx(5.0)) < 1e-15);
    CHECK(prod.derivative() == Polynomial{-1.0, 4.0});
    CHECK(Polynomial{1e-14, 1.0, 1e-13}.trimmed(1e-12).degree() == 1);
}

TEST_CASE("division identity") {
    const Polynomial p{3.0, -2.0, 0.5, 1.0, 2.0};
    const Polynomial q{1.0, 0.0, 1.0};
    const auto dm = divmod(p, q);
    const auto back = dm.quotient * q + dm.remainder;
    for (std::size_t k = 0; k < 5; ++k) CHECK(back[k] == doctest::Approx(p[k]).epsilon(1e-14));
    CHECK(dm.remainder.degree() < q.degree());
    CHECK_THROWS_AS(divmod(p, Polynomial{}), ValidationError);
}

TEST_CASE("degree cap") {
    const auto big = Polynomial::monomial(40);
    CHECK_THROWS_AS(poly_mul(big, big), ValidationError);
}

TEST_CASE("roots of real polynomials") {
    const std::vector<cplx> want{cplx(0.5), cplx(-0.3), cplx(0.2, 0.4), cplx(0.2, -0.4)};
    const auto p = real_poly_from_roots(want);
    const auto got = poly_roots(p);
    CHECK(max_pairing_distance(want, got) < 1e-12);
    // exact conjugate symmetry
    for (const cplx r : got)
        CHECK(std::any_of(got.begin(), got.end(), [&](cplx s) { return s == std::conj(r); }));
    CHECK_THROWS_AS(poly_roots(Polynomial{2.0}), ValidationError);
}

TEST_CASE("roots: zero roots and higher degree") {
    std::vector<cplx> want{cplx(0.0), cplx(0.0)};
    for (int k = 0; k < 10; ++k) want.push_back(std::polar(0.8, 0.3 + 0.55 * k));
    const auto got = poly_roots(poly_from_roots(want));
    CHECK(max_pairing_distance(want, got) < 1e-9);
}

TEST_CASE("optimal pairing beats greedy") {
    const std::vector<cplx> a{cplx(0.0), cplx(1.0)};
    const std::vector<cplx> b{cplx(1.1), cplx(0.45)};
    const auto perm = optimal_pairing(a, b);
    CHECK(perm[0] == 1);
    CHECK(perm[1] == 0);
    CHECK(max_pairing_distance(a, b) == doctest::Approx(0.45));
}

TEST_CASE("gcd and rational normalization") {
    const auto p = real_poly_from_roots(std::vector<cplx>{cplx(0.5), cplx(0.2)});
    const auto q = real_poly_from_roots(std::vector<cplx>{cplx(0.5), cplx(-0.7)});
    const auto g = poly_gcd(p, q);
    CHECK(g.degree() == 1);
    CHECK(g[0] == doctest::Approx(-0.5));

    const RationalFunction r(p * 3.0, q * 2.0);
    CHECK(r.gain() == doctest::Approx(1.5));
    CHECK(r.numerator().degree() == 1);
    CHECK(r.denominator().degree() == 1);
    const cplx z(0.3, 0.9);
    CHECK(std::abs(r(z) - 1.5 * p(z) / q(z)) < 1e-12);

    const RationalFunction zero(Polynomial{}, q);
    CHECK(zero.is_zero());
}
