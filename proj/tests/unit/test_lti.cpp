#include "mimocep/error.hpp"
#include "mimocep/lti.hpp"
#include "mimocep/roots.hpp"
#include "mimocep/smith_mcmillan.hpp"
#include "mimocep/synthesis.hpp"

#include <doctest.h>

#include <vector>

using namespace mimocep;

namespace {

StateSpaceModel siso(double a, double b, double c, double d) {
    return StateSpaceModel(Eigen::MatrixXd::Constant(1, 1, a), Eigen::MatrixXd::Constant(1, 1, b),
                           Eigen::MatrixXd::Constant(1, 1, c), Eigen::MatrixXd::Constant(1, 1, d));
}

}  // namespace

TEST_CASE("dimension validation") {
    CHECK_THROWS_AS(StateSpaceModel(Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 1),
                                    Eigen::MatrixXd::Zero(1, 2), Eigen::MatrixXd::Zero(1, 1)),
                    ValidationError);
    CHECK_THROWS_AS(SignalRecord(Eigen::MatrixXd::Zero(2, 4), 1.0, {"a"}), ValidationError);
}

TEST_CASE("impulse response of a first-order system") {
    const auto m = siso(0.5, 1.0, 1.0, 0.0);
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(1, 8);
    u(0, 0) = 1.0;
    const auto y = simulate(m, SignalRecord(u));
    CHECK(y.channels(0, 0) == 0.0);
    for (int k = 1; k < 8; ++k) CHECK(y.channels(0, k) == doctest::Approx(std::pow(0.5, k - 1)));
}

TEST_CASE("feedthrough and linearity") {
    const auto m = StateSpaceModel(Eigen::MatrixXd::Zero(0, 0), Eigen::MatrixXd::Zero(0, 2),
                                   Eigen::MatrixXd::Zero(2, 0), Eigen::MatrixXd::Identity(2, 2));
    const Eigen::MatrixXd u = Eigen::MatrixXd::Random(2, 20);
    CHECK(simulate(m, SignalRecord(u)).channels.isApprox(u));

    const auto fx = synthetic_3x3_fixture();
    const Eigen::MatrixXd u1 = Eigen::MatrixXd::Random(3, 50), u2 = Eigen::MatrixXd::Random(3, 50);
    const auto y12 = simulate(fx.model, SignalRecord(u1 + u2)).channels;
    const Eigen::MatrixXd ysum = simulate(fx.model, SignalRecord(u1)).channels + simulate(fx.model, SignalRecord(u2)).channels;
    CHECK((y12 - ysum).norm() < 1e-12 * y12.norm());
}

TEST_CASE("SISO transfer function and zero") {
    const auto tf = transfer_matrix(siso(0.5, 1.0, 1.0, 0.0));
    const auto& h = tf.matrix(0, 0);
    CHECK(h.gain() == doctest::Approx(1.0));
    CHECK(h.numerator().degree() == 0);
    CHECK(h.denominator()[0] == doctest::Approx(-0.5));

    const auto z = transmission_zeros(siso(0.5, 1.0, 1.0, 1.0));
    REQUIRE(z.zeros.size() == 1);
    CHECK(z.zeros[0].real() == doctest::Approx(-0.5));
}

TEST_CASE("poles of a scaled rotation") {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, -0.5, 0.5, 0.0;
    const auto m = StateSpaceModel(a, Eigen::MatrixXd::Ones(2, 1), Eigen::MatrixXd::Ones(1, 2), Eigen::MatrixXd::Zero(1, 1));
    for (const cplx p : poles(m)) CHECK(std::abs(p) == doctest::Approx(0.5));
}

TEST_CASE("identity transfer has no zeros") {
    const auto m = StateSpaceModel(Eigen::MatrixXd::Identity(2, 2) * 0.3, Eigen::MatrixXd::Zero(2, 2),
                                   Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Identity(2, 2));
    CHECK(transmission_zeros(m).zeros.size() <= 2);  // only the uncontrollable modes
    const auto smf = smith_mcmillan(transfer_matrix(m).matrix);
    CHECK(pole_zero_roots(smf).zeros.empty());
}

TEST_CASE("fixture reproduces the pole and zero lists") {
    const auto fx = synthetic_3x3_fixture();
    CHECK(fx.model.is_minimal());
    CHECK(fx.model.is_stable());
    CHECK(max_pairing_distance(poles(fx.model), fx.poles()) < 1e-9);
    CHECK(max_pairing_distance(transmission_zeros(fx.model).zeros, fx.zeros()) < 1e-8);
    const auto smf = smith_mcmillan(transfer_matrix(fx.model).matrix);
    const auto pz = pole_zero_roots(smf);
    CHECK(max_pairing_distance(pz.poles, fx.poles()) < 1e-6);
    CHECK(max_pairing_distance(pz.zeros, fx.zeros()) < 1e-6);
    CHECK(std::abs(pz.gain) == doctest::Approx(std::abs(fx.determinant_gain())).epsilon(1e-8));
}

TEST_CASE("random models are stable, minimal and seeded") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RandomModelSpec spec;
        spec.order = 1 + seed % 6;
        spec.ports = 1 + seed % 3;
        spec.seed = seed;
        const auto a = random_stable_model(spec);
        const auto b = random_stable_model(spec);
        CHECK(a.model.A() == b.model.A());
        CHECK(a.model.states() == spec.order);
        CHECK(a.model.is_stable());
        CHECK(a.model.is_minimal());
        for (const cplx z : a.zeros()) CHECK(std::abs(z) < 1.0);
    }
}
