// One PASS/FAIL line per acceptance criterion. With an argument only that
// criterion runs; the exit status is non-zero when any selected one fails.
#include "mimocep/cepstrum.hpp"
#include "mimocep/cstr.hpp"
#include "mimocep/error.hpp"
#include "mimocep/roots.hpp"
#include "mimocep/smith_mcmillan.hpp"
#include "mimocep/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

using namespace mimocep;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v.empty() ? 0.0 : v[v.size() / 2];
}

// 50 models, m = l in {1, 2, 3}, n in {1..6}, fixed seeds.
std::vector<SyntheticModel> model_bank() {
    std::vector<SyntheticModel> out;
    for (std::uint64_t i = 0; i < 50; ++i) {
        RandomModelSpec spec;
        spec.ports = 1 + i % 3;
        spec.order = 1 + (i / 3) % 6;
        spec.seed = 1000 + i;
        out.push_back(random_stable_model(spec));
    }
    return out;
}

Outcome criterion1() {
    RandomModelSpec spec;
    spec.order = 6;
    spec.ports = 3;
    spec.seed = 1;
    const auto sm = random_stable_model(spec);
    const auto u = white_noise(1 << 16, {1.0, 1.0, 1.0}, 2);
    const auto y = simulate(sm.model, u);
    const auto data = system_cepstrum_from_io(u, y, {}, 20);
    const auto poles = sm.poles(), zeros = sm.zeros();
    const auto exact = exact_cepstrum(poles, zeros, sm.determinant_gain(), 20);
    std::vector<double> dev;
    for (std::size_t k = 1; k <= 20; ++k) dev.push_back(std::abs(data.coeffs[k] - exact.coeffs[k]));
    const double worst = *std::max_element(dev.begin(), dev.end());
    return {worst <= 5e-3, "max|dc(1..20)| = " + fmt("%.2e", worst) + " (limit 5e-3), median " + fmt("%.2e", median(dev))};
}

Outcome criterion2() {
    const auto u = white_noise(1 << 16, {1.7, 0.6, 1.1}, 3);
    const auto c = data_cepstrum(u, {}, 50);
    double worst = 0.0;
    for (std::size_t k = 1; k <= 50; ++k) worst = std::max(worst, std::abs(c.coeffs[k]));
    return {worst < 0.01, "3 channels, max|c(1..50)| = " + fmt("%.4f", worst) + " (limit 0.01), c(0) = " +
                              fmt("%.4f", c.coeffs[0]) + " vs log(g^2 product) " +
                              fmt("%.4f", std::log(std::pow(1.7 * 0.6 * 1.1, 2)))};
}

Outcome criterion3() {
    double worst_k = 0.0, worst_0 = 0.0;
    for (const auto& sm : model_bank()) {
        const auto tf = transfer_matrix(sm.model);
        const auto smf = smith_mcmillan(tf.matrix);
        const auto pz = pole_zero_roots(smf);
        const auto via_sm = exact_cepstrum(pz.poles, pz.zeros, pz.gain, 20);
        const auto via_spec = spectrum_cepstrum(sm.model, 20, 4096);
        for (std::size_t k = 1; k <= 20; ++k) worst_k = std::max(worst_k, std::abs(via_sm.coeffs[k] - via_spec.coeffs[k]));
        const double offset = std::log(std::norm(smf.left_det_const) * std::norm(smf.right_det_const));
        worst_0 = std::max(worst_0, std::abs(via_spec.coeffs[0] - via_sm.coeffs[0] - offset));
    }
    return {worst_k <= 1e-6 && worst_0 <= 1e-6,
            "50 models: max|dc(1..20)| = " + fmt("%.2e", worst_k) + ", max|dc(0) - log|cV1 cV2|^2| = " + fmt("%.2e", worst_0)};
}

Outcome criterion4() {
    double worst_p = 0.0, worst_z = 0.0;
    for (const auto& sm : model_bank()) {
        const auto smf = smith_mcmillan(transfer_matrix(sm.model).matrix);
        const auto pz = pole_zero_roots(smf);
        worst_p = std::max(worst_p, max_pairing_distance(pz.poles, poles(sm.model)));
        worst_z = std::max(worst_z, max_pairing_distance(pz.zeros, transmission_zeros(sm.model).zeros));
    }
    const auto fx = synthetic_3x3_fixture();
    const auto fpz = pole_zero_roots(smith_mcmillan(transfer_matrix(fx.model).matrix));
    const cplx p1(0.1786, 0.3300), p2(-0.2769, 0.1793), z1(0.0916, 0.1453);
    const std::vector<cplx> want_p{p1, std::conj(p1), p2, std::conj(p2), cplx(0.0634)};
    const std::vector<cplx> want_z{cplx(-0.9681), cplx(0.4419), z1, std::conj(z1)};
    const double fp = max_pairing_distance(fpz.poles, want_p), fz = max_pairing_distance(fpz.zeros, want_z);
    const bool ok = worst_p <= 1e-6 && worst_z <= 1e-6 && fp <= 1e-6 && fz <= 1e-6;
    return {ok, "50 models: poles " + fmt("%.2e", worst_p) + ", zeros " + fmt("%.2e", worst_z) + "; fixture lists: poles " +
                    fmt("%.2e", fp) + ", zeros " + fmt("%.2e", fz)};
}

Outcome criterion5() {
    RandomModelSpec spec;
    spec.order = 3;
    spec.ports = 1;
    spec.seed = 5;
    const auto sm = random_stable_model(spec);
    const auto poles = sm.poles(), zeros = sm.zeros();
    const auto eq9 = exact_cepstrum(poles, zeros, sm.determinant_gain(), 20);
    const auto via_sm = model_cepstrum(sm.model, 20);
    const auto via_spec = spectrum_cepstrum(sm.model, 20);
    const auto u = white_noise(1 << 16, {1.0}, 6);
    const auto via_data = system_cepstrum_from_io(u, simulate(sm.model, u), {}, 20);
    double e_sm = 0.0, e_spec = 0.0, e_data = 0.0;
    for (std::size_t k = 1; k <= 20; ++k) {
        e_sm = std::max(e_sm, std::abs(via_sm.coeffs[k] - eq9.coeffs[k]));
        e_spec = std::max(e_spec, std::abs(via_spec.coeffs[k] - eq9.coeffs[k]));
        e_data = std::max(e_data, std::abs(via_data.coeffs[k] - eq9.coeffs[k]));
    }
    e_sm = std::max(e_sm, std::abs(via_sm.coeffs[0] - eq9.coeffs[0]));
    return {e_sm <= 1e-6 && e_spec <= 1e-6 && e_data <= 0.02,
            "SM " + fmt("%.2e", e_sm) + ", exact spectrum " + fmt("%.2e", e_spec) + " (limit 1e-6), Welch " +
                fmt("%.2e", e_data) + " (limit 0.02)"};
}

struct Fingerprints {
    CepstrumSequence normal, faulty, half1, half2;
};

Fingerprints fingerprints(const CstrDataset& d, const std::function<CepstrumSequence(const CstrDataset&)>& f) {
    const auto s = split_dataset(d);
    const auto h1 = CstrDataset{s.normal.u.slice(0, 2450), s.normal.y.slice(0, 2450)};
    const auto h2 = CstrDataset{s.normal.u.slice(2450, 4900), s.normal.y.slice(2450, 4900)};
    return {f(s.normal), f(s.faulty), f(h1), f(h2)};
}

double ratio(const Fingerprints& fp) {
    return fingerprint_distance(fp.normal, fp.faulty) / fingerprint_distance(fp.half1, fp.half2);
}

Outcome criterion6() {
    CstrConfig cl;
    cl.seed = 11;
    CstrConfig ol = cl;
    ol.controller_on = false;
    ol.seed = 12;
    const auto dcl = generate_dataset(cl), dol = generate_dataset(ol);
    const auto sys = [](const CstrDataset& d) { return system_cepstrum_from_io(d.u, d.y); };
    const auto in = [](const CstrDataset& d) { return data_cepstrum(d.u); };
    const auto out = [](const CstrDataset& d) { return data_cepstrum(d.y); };
    const double a_cl = ratio(fingerprints(dcl, sys)), a_ol = ratio(fingerprints(dol, sys));
    const double b = ratio(fingerprints(dcl, in)), c = ratio(fingerprints(dol, out));
    const bool ok = a_cl > 3.0 && a_ol > 3.0 && b > 1.0 && c > 1.0;
    return {ok, "distance / split-half baseline: (a) system CL " + fmt("%.2f", a_cl) + ", OL " + fmt("%.2f", a_ol) +
                    " (need > 3); (b) input CL " + fmt("%.2f", b) + "; (c) output OL " + fmt("%.2f", c) + " (need > 1)"};
}

StateSpaceModel cascade(const StateSpaceModel& h1, const StateSpaceModel& h2) {
    const auto n1 = h1.A().rows(), n2 = h2.A().rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n1 + n2, n1 + n2);
    a.topLeftCorner(n1, n1) = h1.A();
    a.bottomLeftCorner(n2, n1) = h2.B() * h1.C();
    a.bottomRightCorner(n2, n2) = h2.A();
    Eigen::MatrixXd b(n1 + n2, h1.B().cols());
    b << h1.B(), h2.B() * h1.D();
    Eigen::MatrixXd c(h2.C().rows(), n1 + n2);
    c << h2.D() * h1.C(), h2.C();
    return StateSpaceModel(a, b, c, h2.D() * h1.D());
}

Outcome criterion7() {
    RandomModelSpec spec;
    spec.ports = 1;
    spec.order = 3;
    spec.seed = 71;
    const auto f1 = random_stable_model(spec);
    spec.order = 2;
    spec.seed = 72;
    const auto f2 = random_stable_model(spec);
    const auto c1 = spectrum_cepstrum(f1.model, 50), c2 = spectrum_cepstrum(f2.model, 50);
    const auto c12 = spectrum_cepstrum(cascade(f1.model, f2.model), 50);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 50; ++k) worst = std::max(worst, std::abs(c12.coeffs[k] - c1.coeffs[k] - c2.coeffs[k]));
    return {worst <= 1e-8, "max|c_cascade - c_1 - c_2| (k = 0..50) = " + fmt("%.2e", worst) + " (limit 1e-8)"};
}

Outcome criterion8() {
    const std::vector<cplx> p{cplx(0.9)};
    const double target = 1e-9;
    const std::size_t order = truncation_order(p, target);
    const auto c = exact_cepstrum(p, {}, 1.0, order);
    double worst = 0.0;
    for (int f = 0; f < 4096; ++f) {
        const double w = 2.0 * std::numbers::pi * f / 4096.0;
        worst = std::max(worst, std::abs(log_spectrum_at(c.coeffs, w) - exact_log_spectrum(p, {}, 1.0, w)));
    }
    return {worst <= target, "alpha = 0.9, K = " + std::to_string(order) + ", max reconstruction error " + fmt("%.2e", worst) +
                                 " (target 1e-9)"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, Outcome (*)()>> all{
        {"synthetic 3x3 reproduction", criterion1},  {"white-noise nullity", criterion2},
        {"equivalence theorem", criterion3},         {"pole/zero oracle agreement", criterion4},
        {"SISO reduction", criterion5},              {"CSTR case study", criterion6},
        {"homomorphic additivity", criterion7},      {"appendix series truncation", criterion8},
    };
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);
    if (only < 0 || only > static_cast<int>(all.size())) {
        std::fprintf(stderr, "usage: %s [criterion 1-%zu]\n", argv[0], all.size());
        return 2;
    }
    int failed = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = all[i].second();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %zu %s: %s (%.2f s)\n", r.pass ? "PASS" : "FAIL", i + 1, all[i].first, r.detail.c_str(), secs);
        std::fflush(stdout);
        failed += r.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
