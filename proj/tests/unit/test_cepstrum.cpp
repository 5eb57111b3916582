#include "mimocep/cepstrum.hpp"
#include "mimocep/error.hpp"
#include "mimocep/synthesis.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mimocep;

namespace {

StateSpaceModel first_order(double a, double d = 0.0) {
    return StateSpaceModel(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1),
                           Eigen::MatrixXd::Constant(1, 1, d));
}

}  // namespace

TEST_CASE("exact cepstrum closed forms") {
    const auto none = exact_cepstrum({}, {}, 1.0, 10);
    for (const double c : none.coeffs) CHECK(c == 0.0);
    const std::vector<cplx> p{cplx(0.5)};
    const auto c = exact_cepstrum(p, {}, 1.0, 3);
    CHECK(c.coeffs[1] == doctest::Approx(0.5));
    CHECK(c.coeffs[2] == doctest::Approx(0.125));
    CHECK(c.coeffs[3] == doctest::Approx(0.125 / 3.0));
    CHECK(exact_cepstrum(p, {}, 2.0, 3).coeffs[0] == doctest::Approx(std::log(4.0)));
    const std::vector<cplx> out{cplx(1.2)};
    CHECK_THROWS_AS(exact_cepstrum({}, out, 1.0), ValidationError);
    const std::vector<cplx> lone{cplx(0.1, 0.3)};
    CHECK_FALSE(exact_cepstrum(lone, {}, 1.0).warnings.empty());
}

TEST_CASE("SISO model path matches exact") {
    const auto m = first_order(0.5, 1.0);  // (z + 0.5) / (z - 0.5)
    const std::vector<cplx> p{cplx(0.5)}, z{cplx(-0.5)};
    const auto ref = exact_cepstrum(p, z, 1.0, 20);
    const auto sm = model_cepstrum(m, 20);
    const auto sp = spectrum_cepstrum(m, 20);
    for (std::size_t k = 0; k <= 20; ++k) {
        CHECK(std::abs(sm.coeffs[k] - ref.coeffs[k]) < 1e-10);
        CHECK(std::abs(sp.coeffs[k] - ref.coeffs[k]) < 1e-10);
    }
    CHECK(sm.zeroth_reliable);
    CHECK_FALSE(sp.zeroth_reliable);
}

TEST_CASE("pseudo-diagonal model cepstrum is the sum of entry cepstra") {
    const auto lin = [](double r) { return Polynomial{-r, 1.0}; };
    RationalMatrix h(2, 2);
    h(0, 0) = RationalFunction(2.0, lin(0.3), lin(0.6));
    h(1, 1) = RationalFunction(0.5, Polynomial{1.0}, lin(-0.4));
    const auto c = model_cepstrum(h, 15);
    const std::vector<cplx> p1{cplx(0.6)}, z1{cplx(0.3)}, p2{cplx(-0.4)};
    const auto c1 = exact_cepstrum(p1, z1, 2.0, 15), c2 = exact_cepstrum(p2, {}, 0.5, 15);
    for (std::size_t k = 0; k <= 15; ++k) CHECK(std::abs(c.coeffs[k] - c1.coeffs[k] - c2.coeffs[k]) < 1e-12);
}

TEST_CASE("rank-deficient and unstable models are rejected") {
    RationalMatrix h(2, 2);
    const RationalFunction f(Polynomial{1.0}, Polynomial{-0.5, 1.0});
    h(0, 0) = h(0, 1) = h(1, 0) = h(1, 1) = f;
    CHECK_THROWS_AS(model_cepstrum(h), ValidationError);
    CHECK_THROWS_AS(model_cepstrum(first_order(1.5)), ValidationError);
}

TEST_CASE("data cepstrum of white noise vanishes for k >= 1") {
    const auto u = white_noise(1 << 16, {1.0}, 21);
    const auto c = data_cepstrum(u, {}, 50);
    CHECK(std::abs(c.coeffs[0]) < 0.05);
    CHECK_FALSE(c.zeroth_reliable);
    CHECK(c.provenance == Provenance::data);
    double worst = 0.0;
    for (std::size_t k = 1; k <= 50; ++k) worst = std::max(worst, std::abs(c.coeffs[k]));
    CHECK(worst < 0.02);
}

TEST_CASE("per-channel gains only move c(0)") {
    const auto u = white_noise(1 << 16, {2.0, 0.5, 3.0}, 22);
    const auto c = data_cepstrum(u, {}, 10);
    CHECK(c.coeffs[0] == doctest::Approx(std::log(9.0)).epsilon(0.02));
}

TEST_CASE("filtered noise follows the pole cepstrum") {
    const auto u = white_noise(1 << 16, {1.0}, 23);
    const auto y = simulate(first_order(0.5), u);
    const auto c = data_cepstrum(y, {}, 10);
    const std::vector<cplx> p{cplx(0.5)};
    const auto ref = exact_cepstrum(p, {}, 1.0, 10);
    for (std::size_t k = 1; k <= 10; ++k) CHECK(std::abs(c.coeffs[k] - ref.coeffs[k]) < 0.02);
}

TEST_CASE("input-output system cepstrum") {
    const auto u = white_noise(1 << 14, {1.0, 1.0}, 24);
    const auto same = system_cepstrum_from_io(u, u, {}, 20);
    for (std::size_t k = 0; k <= 20; ++k) CHECK(same.coeffs[k] == 0.0);

    SignalRecord y = u;
    y.channels *= 2.0;
    const auto scaled = system_cepstrum_from_io(u, y, {}, 20);
    CHECK(scaled.coeffs[0] == doctest::Approx(std::log(16.0)));
    for (std::size_t k = 1; k <= 20; ++k) CHECK(std::abs(scaled.coeffs[k]) < 1e-10);

    const auto three = white_noise(1 << 14, {1.0, 1.0, 1.0}, 25);
    CHECK_THROWS_WITH_AS(system_cepstrum_from_io(u, three), doctest::Contains("m != l"), ValidationError);
}

TEST_CASE("fingerprint distance") {
    const std::vector<cplx> p{cplx(0.5)}, q{cplx(0.4)};
    const auto a = exact_cepstrum(p, {}, 1.0, 10), b = exact_cepstrum(q, {}, 3.0, 10);
    CHECK(fingerprint_distance(a, a) == 0.0);
    CHECK(fingerprint_distance(a, b) == fingerprint_distance(b, a));
    CHECK(fingerprint_distance(a, b) > 0.0);
    const std::vector<double> w(10, 4.0);
    CHECK(fingerprint_distance(a, b, w) == doctest::Approx(2.0 * fingerprint_distance(a, b)));
    CHECK_THROWS_AS(fingerprint_distance(a, exact_cepstrum(p, {}, 1.0, 9)), ValidationError);
    CHECK_THROWS_AS(fingerprint_distance(a, b, std::vector<double>(3, 1.0)), ValidationError);
}

TEST_CASE("truncation bound and reconstruction") {
    const std::vector<cplx> p{cplx(0.7), cplx(0.2, 0.5), cplx(0.2, -0.5)}, z{cplx(-0.3)};
    std::vector<cplx> all = p;
    all.insert(all.end(), z.begin(), z.end());
    const auto order = truncation_order(all, 1e-10);
    const auto c = exact_cepstrum(p, z, 1.5, order + 1);
    for (double w = 0.0; w < 6.3; w += 0.1)
        CHECK(std::abs(log_spectrum_at(c.coeffs, w) - exact_log_spectrum(p, z, 1.5, w)) < 1e-9);
}
