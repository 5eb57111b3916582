#include "mimocep/roots.hpp"

#include "mimocep/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace mimocep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Eval {
    cplx value;
    cplx slope;
    double bound;  // sum |a_i| |z|^i
};

Eval horner(const std::vector<cplx>& a, cplx z) {
    cplx p = 0.0, dp = 0.0;
    double b = 0.0;
    const double az = std::abs(z);
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
        b = b * az + std::abs(*it);
    }
    return {p, dp, b};
}

bool residuals_ok(const std::vector<cplx>& a, const std::vector<cplx>& roots, double tol) {
    for (const cplx r : roots) {
        const Eval e = horner(a, r);
        if (!std::isfinite(e.value.real()) || std::abs(e.value) > tol * e.bound) return false;
    }
    return true;
}

// a is monic, degree n >= 1, a[0] != 0.
bool aberth(const std::vector<cplx>& a, int max_iter, std::vector<cplx>& z) {
    const std::size_t n = a.size() - 1;
    const cplx centroid = -a[n - 1] / static_cast<double>(n);
    double radius = std::pow(std::abs(horner(a, centroid).value), 1.0 / static_cast<double>(n));
    if (!(radius > 0.0) || !std::isfinite(radius)) radius = 1.0;
    z.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n) + 0.4;
        z[k] = centroid + radius * cplx(std::cos(theta), std::sin(theta));
    }
    std::vector<bool> done(n, false);
    for (int it = 0; it < max_iter; ++it) {
        std::size_t active = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (done[k]) continue;
            const Eval e = horner(a, z[k]);
            if (std::abs(e.value) <= 4.0 * static_cast<double>(n) * kEps * e.bound) {
                done[k] = true;
                continue;
            }
            ++active;
            const cplx ratio = e.value / e.slope;
            cplx sum = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) sum += 1.0 / (z[k] - z[j]);
            const cplx step = ratio / (1.0 - ratio * sum);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
            z[k] -= step;
            if (std::abs(step) <= kEps * std::abs(z[k])) done[k] = true;
        }
        if (active == 0) return true;
    }
    return false;
}

std::vector<cplx> companion_roots(const std::vector<cplx>& a) {
    const Eigen::Index n = static_cast<Eigen::Index>(a.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) comp(i, n - 1) = -a[static_cast<std::size_t>(i)];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericalError("poly_roots: companion eigenvalue iteration failed");
    return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

std::vector<cplx> roots_impl(std::vector<cplx> a, const RootFinderOptions& opts) {
    const int deg = static_cast<int>(a.size()) - 1;
    if (deg < 1) throw ValidationError("poly_roots: degree must be at least 1");
    if (deg > kMaxDegree)
        throw ValidationError("poly_roots: degree " + std::to_string(deg) + " exceeds the cap of " +
                              std::to_string(kMaxDegree));
    std::vector<cplx> out;
    std::size_t zeros = 0;
    while (zeros < a.size() && a[zeros] == cplx(0.0)) ++zeros;
    out.assign(zeros, cplx(0.0));
    a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(zeros));
    const cplx lead = a.back();
    for (auto& c : a) c /= lead;
    a.back() = 1.0;
    if (a.size() == 1) return out;
    if (a.size() == 2) {
        out.push_back(-a[0]);
        return out;
    }
    std::vector<cplx> z;
    bool ok = aberth(a, opts.max_iterations, z) && residuals_ok(a, z, opts.residual_tol);
    if (!ok) {
        z = companion_roots(a);
        if (!residuals_ok(a, z, opts.residual_tol))
            throw NumericalError("poly_roots: no convergence within " + std::to_string(opts.max_iterations) +
                                 " iterations and companion fallback failed the residual check");
    }
    out.insert(out.end(), z.begin(), z.end());
    return out;
}

}  // namespace

std::vector<cplx> conjugate_symmetrize(std::vector<cplx> r) {
    // Greedy matching of r against conj(r) by distance: a root matched with
    // itself is real, a matched couple becomes an exact conjugate pair.
    // Split multiple real roots may land on the same side of the axis, so
    // counting upper and lower half-plane roots is not enough.
    struct Cand {
        double cost;
        std::size_t i, j;
    };
    const std::size_t n = r.size();
    std::vector<Cand> cands;
    cands.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) cands.push_back({std::abs(r[i] - std::conj(r[j])), i, j});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.cost < y.cost; });
    std::vector<bool> used(n, false);
    std::vector<cplx> out;
    out.reserve(n);
    for (const auto& c : cands) {
        if (used[c.i] || used[c.j]) continue;
        used[c.i] = used[c.j] = true;
        if (c.i == c.j) {
            out.emplace_back(r[c.i].real(), 0.0);
            continue;
        }
        cplx avg = 0.5 * (r[c.i] + std::conj(r[c.j]));
        if (avg.imag() < 0.0) avg = std::conj(avg);
        out.push_back(avg);
        out.push_back(std::conj(avg));
    }
    return out;
}

std::vector<cplx> poly_roots(const ComplexPolynomial& p, const RootFinderOptions& opts) {
    return roots_impl(p.coeffs(), opts);
}

std::vector<cplx> poly_roots(const Polynomial& p, const RootFinderOptions& opts) {
    std::vector<cplx> a(p.coeffs().begin(), p.coeffs().end());
    return conjugate_symmetrize(roots_impl(std::move(a), opts));
}

bool has_root_cluster(std::span<const cplx> roots, double tol) {
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < tol) return true;
    return false;
}

std::vector<std::size_t> optimal_pairing(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw ValidationError("optimal_pairing: root sets differ in size");
    const std::size_t n = a.size();
    if (n == 0) return {};
    // Hungarian algorithm (potentials), 1-based internally.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    std::vector<bool> used(n + 1);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = std::abs(a[i0 - 1] - b[j - 1]) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> perm(n);
    for (std::size_t j = 1; j <= n; ++j) perm[p[j] - 1] = j - 1;
    return perm;
}

double max_pairing_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const auto perm = optimal_pairing(a, b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[perm[i]]));
    return m;
}

RootSetSplit match_root_sets(std::span<const cplx> a, std::span<const cplx> b, double tol) {
    struct Candidate {
        double dist;
        std::size_t i, j;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = std::abs(a[i] - b[j]);
            if (d <= tol * std::max(1.0, std::abs(a[i]))) cands.push_back({d, i, j});
        }
    std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
        return x.dist < y.dist || (x.dist == y.dist && (x.i < y.i || (x.i == y.i && x.j < y.j)));
    });
    std::vector<bool> ua(a.size(), false), ub(b.size(), false);
    RootSetSplit out;
    for (const auto& c : cands) {
        if (ua[c.i] || ub[c.j]) continue;
        ua[c.i] = ub[c.j] = true;
        out.common.push_back(0.5 * (a[c.i] + b[c.j]));
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!ua[i]) out.only_first.push_back(a[i]);
    for (std::size_t j = 0; j < b.size(); ++j)
        if (!ub[j]) out.only_second.push_back(b[j]);
    return out;
}

}  // namespace mimocep
