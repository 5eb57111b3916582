#include "mimocep/mimocep.h"
#include "scratch.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

namespace {

std::vector<double> coeffs(const mc_cepstrum* c) {
    std::size_t n = 0;
    REQUIRE(mc_cepstrum_coeffs(c, nullptr, 0, &n) == MC_OK);
    std::vector<double> out(n);
    REQUIRE(mc_cepstrum_coeffs(c, out.data(), n, &n) == MC_OK);
    return out;
}

}  // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::strlen(mc_version()) > 0);
    mc_model* m = nullptr;
    CHECK(mc_model_load_json("/nonexistent/model.json", &m) == MC_ERR_IO);
    CHECK(m == nullptr);
    CHECK(std::strlen(mc_last_error()) > 0);
}

TEST_CASE("model creation validates dimensions and stability") {
    const double a[] = {0.5}, b[] = {1.0}, c[] = {1.0}, d[] = {0.0};
    mc_model* m = nullptr;
    REQUIRE(mc_model_create(1, 1, 1, a, b, c, d, &m) == MC_OK);
    std::size_t n = 0, outs = 0, ins = 0;
    CHECK(mc_model_dims(m, &n, &outs, &ins) == MC_OK);
    CHECK(n == 1);
    CHECK(outs == 1);
    CHECK(ins == 1);
    mc_cepstrum* cep = nullptr;
    REQUIRE(mc_cepstrum_model(m, 5, &cep) == MC_OK);
    const auto k = coeffs(cep);
    REQUIRE(k.size() == 6);
    CHECK(k[1] == doctest::Approx(0.5));
    CHECK(k[2] == doctest::Approx(0.125));
    CHECK(std::string(mc_cepstrum_provenance(cep)) == "model");
    CHECK(mc_cepstrum_zeroth_reliable(cep) == 1);
    mc_cepstrum_free(cep);
    mc_model_free(m);

    const double unstable[] = {1.5};
    REQUIRE(mc_model_create(1, 1, 1, unstable, b, c, d, &m) == MC_OK);
    CHECK(mc_cepstrum_model(m, 5, &cep) == MC_ERR_VALIDATION);
    CHECK(std::string(mc_last_error()).find("stable") != std::string::npos);
    mc_model_free(m);

    CHECK(mc_model_create(1, 0, 1, a, b, c, d, &m) == MC_ERR_VALIDATION);
    CHECK(mc_model_create(1, 1, 1, nullptr, b, c, d, &m) != MC_OK);
}

TEST_CASE("fixture poles and zeros") {
    mc_model* m = nullptr;
    REQUIRE(mc_model_fixture(2019, &m) == MC_OK);
    std::size_t count = 0;
    CHECK(mc_model_poles(m, nullptr, nullptr, 0, &count) == MC_OK);
    CHECK(count == 5);
    std::vector<double> re(count), im(count);
    CHECK(mc_model_poles(m, re.data(), im.data(), count, &count) == MC_OK);
    bool found = false;
    for (std::size_t i = 0; i < count; ++i)
        found = found || (std::abs(re[i] - 0.0634) < 1e-9 && std::abs(im[i]) < 1e-9);
    CHECK(found);
    CHECK(mc_model_zeros(m, nullptr, nullptr, 0, &count) == MC_OK);
    CHECK(count == 4);
    mc_model_free(m);
}

TEST_CASE("signals, simulation and system cepstrum") {
    const double gains[] = {1.0, 1.0};
    mc_signal* u = nullptr;
    REQUIRE(mc_signal_white_noise(8192, gains, 2, 3, &u) == MC_OK);
    std::size_t ch = 0, n = 0;
    CHECK(mc_signal_dims(u, &ch, &n) == MC_OK);
    CHECK(ch == 2);
    CHECK(n == 8192);

    mc_welch_params p;
    mc_welch_defaults(&p);
    CHECK(p.segment_length == 1024);
    CHECK(p.grid_size == 4096);
    mc_cepstrum* same = nullptr;
    REQUIRE(mc_cepstrum_system(u, u, &p, 20, &same) == MC_OK);
    for (const double c : coeffs(same)) CHECK(std::abs(c) < 1e-12);
    mc_cepstrum_free(same);

    const double three[] = {1.0, 1.0, 1.0};
    mc_signal* y3 = nullptr;
    REQUIRE(mc_signal_white_noise(8192, three, 3, 4, &y3) == MC_OK);
    mc_cepstrum* bad = nullptr;
    CHECK(mc_cepstrum_system(u, y3, &p, 20, &bad) == MC_ERR_VALIDATION);
    CHECK(std::string(mc_last_error()).find("m != l") != std::string::npos);
    CHECK(bad == nullptr);

    mc_signal* part = nullptr;
    CHECK(mc_signal_slice(u, 10, 5, &part) == MC_ERR_VALIDATION);
    REQUIRE(mc_signal_slice(u, 100, 4196, &part) == MC_OK);
    CHECK(mc_signal_dims(part, &ch, &n) == MC_OK);
    CHECK(n == 4096);
    mc_signal_free(part);
    mc_signal_free(y3);
    mc_signal_free(u);
}

TEST_CASE("signal CSV round trip is exact") {
    Scratch dir;
    const double data[] = {0.1, -2.5, 1e-300, 3.0, 1.0 / 3.0, -7.25};
    mc_signal* x = nullptr;
    REQUIRE(mc_signal_create(2, 3, data, 1.0, &x) == MC_OK);
    const std::string path = dir / "x.csv";
    REQUIRE(mc_signal_write_csv(x, path.c_str()) == MC_OK);
    mc_signal* back = nullptr;
    REQUIRE(mc_signal_read_csv(path.c_str(), nullptr, 0, 0, &back) == MC_OK);
    std::vector<double> out(6);
    REQUIRE(mc_signal_data(back, out.data(), out.size()) == MC_OK);
    for (std::size_t i = 0; i < 6; ++i) CHECK(out[i] == data[i]);
    mc_signal_free(back);
    mc_signal_free(x);
}

TEST_CASE("cepstrum CSV round trip and distance") {
    Scratch dir;
    const double pr[] = {0.5}, pi[] = {0.0};
    mc_cepstrum* a = nullptr;
    REQUIRE(mc_cepstrum_exact(pr, pi, 1, nullptr, nullptr, 0, 2.0, 10, &a) == MC_OK);
    const std::string path = dir / "a.csv";
    REQUIRE(mc_cepstrum_write_csv(a, path.c_str()) == MC_OK);
    mc_cepstrum* b = nullptr;
    REQUIRE(mc_cepstrum_read_csv(path.c_str(), &b) == MC_OK);
    CHECK(coeffs(a) == coeffs(b));
    CHECK(std::string(mc_cepstrum_provenance(b)) == "exact");
    double dist = -1.0;
    CHECK(mc_fingerprint_distance(a, b, nullptr, 0, &dist) == MC_OK);
    CHECK(dist == 0.0);
    const double w[] = {1.0, 2.0};
    CHECK(mc_fingerprint_distance(a, b, w, 2, &dist) == MC_ERR_VALIDATION);
    mc_cepstrum_free(a);
    mc_cepstrum_free(b);

    const double outside[] = {1.2};
    CHECK(mc_cepstrum_exact(outside, pi, 1, nullptr, nullptr, 0, 1.0, 10, &a) == MC_ERR_VALIDATION);
}

TEST_CASE("CSTR config and generation") {
    mc_cstr_config* cfg = nullptr;
    REQUIRE(mc_cstr_config_default(&cfg) == MC_OK);
    CHECK(mc_cstr_config_set_samples(cfg, 0) == MC_ERR_VALIDATION);
    REQUIRE(mc_cstr_config_set_samples(cfg, 200) == MC_OK);
    REQUIRE(mc_cstr_config_set_seed(cfg, 9) == MC_OK);
    std::uint64_t seed = 0;
    CHECK(mc_cstr_config_seed(cfg, &seed) == MC_OK);
    CHECK(seed == 9);
    mc_signal* u = nullptr;
    mc_signal* y = nullptr;
    REQUIRE(mc_cstr_generate(cfg, &u, &y) == MC_OK);
    std::size_t ch = 0, n = 0;
    CHECK(mc_signal_dims(y, &ch, &n) == MC_OK);
    CHECK(ch == 2);
    CHECK(n == 200);

    Scratch dir;
    const std::string cp = dir / "cfg.json";
    REQUIRE(mc_cstr_config_save_json(cfg, cp.c_str()) == MC_OK);
    mc_cstr_config* again = nullptr;
    REQUIRE(mc_cstr_config_load_json(cp.c_str(), &again) == MC_OK);
    mc_signal* u2 = nullptr;
    mc_signal* y2 = nullptr;
    REQUIRE(mc_cstr_generate(again, &u2, &y2) == MC_OK);
    std::vector<double> a(400), b(400);
    REQUIRE(mc_signal_data(y, a.data(), a.size()) == MC_OK);
    REQUIRE(mc_signal_data(y2, b.data(), b.size()) == MC_OK);
    CHECK(a == b);
    CHECK(mc_file_is_model_json(cp.c_str()) == 0);

    spit(dir / "bad.json", "{\"V\": -1}");
    mc_cstr_config* bad = nullptr;
    CHECK(mc_cstr_config_load_json((dir / "bad.json").c_str(), &bad) == MC_ERR_VALIDATION);
    CHECK(std::string(mc_last_error()).find("V") != std::string::npos);

    for (auto* s : {u, y, u2, y2}) mc_signal_free(s);
    mc_cstr_config_free(again);
    mc_cstr_config_free(cfg);
}
