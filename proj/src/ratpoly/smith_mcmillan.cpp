#include "mimocep/smith_mcmillan.hpp"

#include "mimocep/error.hpp"
#include "mimocep/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <optional>

namespace mimocep {

namespace {

std::string position(std::size_t k, std::size_t i, std::size_t j) {
    return "step " + std::to_string(k) + ", entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::vector<cplx> roots_or_empty(const Polynomial& p) {
    if (p.degree() < 1) return {};
    return poly_roots(p);
}

// Polynomial elimination on a working matrix with the transforms tracked.
class Reducer {
public:
    Reducer(PolyMatrix w, const SmithMcMillanOptions& opts)
        : w_(std::move(w)),
          v1_(PolyMatrix::identity(w_.rows())),
          v2_(PolyMatrix::identity(w_.cols())),
          opts_(opts) {}

    std::size_t run() {
        const std::size_t limit = std::min(w_.rows(), w_.cols());
        for (std::size_t k = 0; k < limit; ++k) {
            if (!reduce_step(k)) return k;
        }
        return limit;
    }

    const PolyMatrix& work() const { return w_; }
    const PolyMatrix& left() const { return v1_; }
    const PolyMatrix& right() const { return v2_; }

private:
    Polynomial clean(const Polynomial& p, double scale) const { return p.trimmed(opts_.zero_tol * scale); }

    bool pick_pivot(std::size_t k, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        int best_deg = 0;
        double best_lead = 0.0;
        bool best_diag = false;
        for (std::size_t i = k; i < w_.rows(); ++i)
            for (std::size_t j = k; j < w_.cols(); ++j) {
                const Polynomial& p = w_(i, j);
                if (p.is_zero()) continue;
                const bool diag = (i == k && j == k);
                const double lead = std::abs(p.leading());
                const bool better = !found || p.degree() < best_deg ||
                                    (p.degree() == best_deg && !best_diag && (diag || lead > best_lead));
                if (better) {
                    found = true;
                    best_deg = p.degree();
                    best_lead = lead;
                    best_diag = diag;
                    pi = i;
                    pj = j;
                }
            }
        return found;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < w_.cols(); ++j) std::swap(w_(a, j), w_(b, j));
        for (std::size_t j = 0; j < v1_.cols(); ++j) std::swap(v1_(a, j), v1_(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < w_.rows(); ++i) std::swap(w_(i, a), w_(i, b));
        for (std::size_t i = 0; i < v2_.rows(); ++i) std::swap(v2_(i, a), v2_(i, b));
    }

    // row_dst -= q * row_src
    void row_axpy(std::size_t dst, std::size_t src, const Polynomial& q) {
        const double qn = q.norm_inf();
        for (std::size_t j = 0; j < w_.cols(); ++j) {
            if (w_(src, j).is_zero()) continue;
            const double scale = std::max(w_(dst, j).norm_inf(), qn * w_(src, j).norm_inf());
            w_(dst, j) = clean(w_(dst, j) - poly_mul(q, w_(src, j)), scale);
        }
        for (std::size_t j = 0; j < v1_.cols(); ++j)
            if (!v1_(src, j).is_zero()) v1_(dst, j) -= poly_mul(q, v1_(src, j));
    }

    // col_dst -= col_src * q
    void col_axpy(std::size_t dst, std::size_t src, const Polynomial& q) {
        const double qn = q.norm_inf();
        for (std::size_t i = 0; i < w_.rows(); ++i) {
            if (w_(i, src).is_zero()) continue;
            const double scale = std::max(w_(i, dst).norm_inf(), qn * w_(i, src).norm_inf());
            w_(i, dst) = clean(w_(i, dst) - poly_mul(q, w_(i, src)), scale);
        }
        for (std::size_t i = 0; i < v2_.rows(); ++i)
            if (!v2_(i, src).is_zero()) v2_(i, dst) -= poly_mul(q, v2_(i, src));
    }

    void row_add(std::size_t dst, std::size_t src) { row_axpy(dst, src, Polynomial{-1.0}); }

    // Remainder of p / pivot after cleaning; zero when pivot divides p.
    Polynomial remainder(const Polynomial& p, const Polynomial& pivot, Polynomial* quotient) const {
        auto dm = divmod(p, pivot);
        const double scale = std::max(p.norm_inf(), dm.quotient.norm_inf() * pivot.norm_inf());
        if (quotient) *quotient = dm.quotient;
        return clean(dm.remainder, scale);
    }

    // Returns false when the remaining block is identically zero.
    bool reduce_step(std::size_t k) {
        for (int step = 0; step < opts_.max_pivot_steps; ++step) {
            std::size_t pi = k, pj = k;
            if (!pick_pivot(k, pi, pj)) return false;
            swap_rows(k, pi);
            swap_cols(k, pj);
            if (w_(k, k).degree() > kMaxDegree)
                throw ValidationError("smith_mcmillan: pivot degree exceeds the cap at " + position(k, k, k));
            bool leftover = false;
            for (std::size_t i = k + 1; i < w_.rows(); ++i) {
                if (w_(i, k).is_zero()) continue;
                Polynomial q;
                Polynomial r = remainder(w_(i, k), w_(k, k), &q);
                if (!q.is_zero()) row_axpy(i, k, q);
                w_(i, k) = r;
                leftover = leftover || !r.is_zero();
            }
            for (std::size_t j = k + 1; j < w_.cols(); ++j) {
                if (w_(k, j).is_zero()) continue;
                Polynomial q;
                Polynomial r = remainder(w_(k, j), w_(k, k), &q);
                if (!q.is_zero()) col_axpy(j, k, q);
                w_(k, j) = r;
                leftover = leftover || !r.is_zero();
            }
            if (leftover) continue;
            bool divides = true;
            for (std::size_t i = k + 1; i < w_.rows() && divides; ++i)
                for (std::size_t j = k + 1; j < w_.cols(); ++j) {
                    if (w_(i, j).is_zero()) continue;
                    if (!remainder(w_(i, j), w_(k, k), nullptr).is_zero()) {
                        row_add(k, i);
                        divides = false;
                        break;
                    }
                }
            if (divides) return true;
        }
        throw NumericalError("smith_mcmillan: pivoting did not terminate at " + position(k, k, k) +
                             " (near-zero pivot polynomial)");
    }

    PolyMatrix w_;
    PolyMatrix v1_;
    PolyMatrix v2_;
    const SmithMcMillanOptions& opts_;
};

std::vector<cplx> unit_circle_points(std::size_t count, double phase) {
    std::vector<cplx> pts(count);
    for (std::size_t i = 0; i < count; ++i)
        pts[i] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count) + phase);
    return pts;
}

cplx mean_determinant(const PolyMatrix& v, std::span<const cplx> pts) {
    cplx acc = 0.0;
    for (const cplx z : pts) acc += v.evaluate(z).determinant();
    return acc / static_cast<double>(pts.size());
}

bool root_subset(const std::vector<cplx>& small, const std::vector<cplx>& big, double tol) {
    return match_root_sets(small, big, tol).only_first.empty();
}


// Coefficients of det of the k x k submatrix (rows, cols) of n, by evaluation
// on the unit circle and an inverse DFT. deg bounds the result degree.
Polynomial minor_poly(const PolyMatrix& n, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols,
                      int deg) {
    const auto k = static_cast<Eigen::Index>(rows.size());
    const std::size_t pts = static_cast<std::size_t>(deg) + 1;
    std::vector<cplx> vals(pts);
    Eigen::MatrixXcd sub(k, k);
    for (std::size_t t = 0; t < pts; ++t) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(pts));
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j)
                sub(i, j) = n(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)])(z);
        vals[t] = sub.determinant();
    }
    std::vector<double> c(pts);
    for (std::size_t p = 0; p < pts; ++p) {
        cplx acc = 0.0;
        for (std::size_t t = 0; t < pts; ++t)
            acc += vals[t] * std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(p * t % pts) /
                                                 static_cast<double>(pts));
        c[p] = acc.real() / static_cast<double>(pts);
    }
    return Polynomial(std::move(c));
}

void combinations(std::size_t n, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        std::size_t i = k;
        while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++cur[i - 1];
        for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
}

// Multiple roots come back split by roughly eps^(1/m); replace every cluster
// (single linkage, radius tol) by its centroid repeated once per member.
std::vector<cplx> merge_clusters(const std::vector<cplx>& r, double tol) {
    const std::size_t n = r.size();
    std::vector<std::size_t> group(n);
    for (std::size_t i = 0; i < n; ++i) group[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (group[i] != group[j] && std::abs(r[i] - r[j]) <= tol) {
                    const std::size_t g = std::min(group[i], group[j]), old = std::max(group[i], group[j]);
                    for (auto& x : group)
                        if (x == old) x = g;
                    changed = true;
                }
    }
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cplx sum = 0.0;
        std::size_t count = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (group[j] == group[i]) {
                sum += r[j];
                ++count;
            }
        out[i] = sum / static_cast<double>(count);
    }
    return conjugate_symmetrize(out);
}

constexpr double kClusterTol = 1e-3;

constexpr std::size_t kMaxMinors = 4096;

// Roots of the determinantal divisor D_k (gcd of all k x k minors), or
// nullopt when there are too many minors to enumerate.
std::optional<std::vector<cplx>> divisor_roots(const PolyMatrix& n, std::size_t k, double minor_tol, double root_tol) {
    std::vector<std::vector<std::size_t>> rs, cs;
    combinations(n.rows(), k, rs);
    combinations(n.cols(), k, cs);
    if (rs.size() * cs.size() > kMaxMinors) return std::nullopt;
    const int deg = static_cast<int>(k) * std::max(n.max_degree(), 0);
    std::vector<Polynomial> minors;
    double big = 0.0;
    for (const auto& r : rs)
        for (const auto& c : cs) {
            minors.push_back(minor_poly(n, r, c, deg));
            big = std::max(big, minors.back().norm_inf());
        }
    std::optional<std::vector<cplx>> common;
    for (auto& mnr : minors) {
        const Polynomial p = mnr.trimmed(minor_tol * big);
        if (p.is_zero()) continue;
        const auto r = merge_clusters(roots_or_empty(p), kClusterTol);
        common = common ? match_root_sets(*common, r, root_tol).common : r;
        if (common->empty()) break;
    }
    if (!common) return std::nullopt;
    return common;
}

// Gain c with reduced ~= c * monic over a few unit-circle points.
double fitted_gain(const Polynomial& reduced, const Polynomial& monic) {
    cplx num = 0.0;
    double den = 0.0;
    for (int t = 0; t < 8; ++t) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * t / 8.0 + 0.37);
        const cplx m = monic(z);
        num += reduced(z) * std::conj(m);
        den += std::norm(m);
    }
    return num.real() / den;
}

}  // namespace

Eigen::MatrixXcd SmithMcMillanForm::pseudo_diagonal(cplx z) const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < diag.size(); ++i)
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diag[i](z);
    return m;
}

SmithMcMillanForm smith_mcmillan(const RationalMatrix& h, const SmithMcMillanOptions& opts) {
    const std::size_t m = h.rows(), l = h.cols();

    // Least common denominator, accumulated as a root multiset.
    std::vector<cplx> lcd_roots;
    std::vector<std::vector<cplx>> den_roots(m * l);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < l; ++j) {
            const RationalFunction& e = h(i, j);
            if (e.is_zero()) continue;
            auto r = roots_or_empty(e.denominator());
            auto split = match_root_sets(lcd_roots, r, opts.root_tol);
            lcd_roots = split.common;
            lcd_roots.insert(lcd_roots.end(), split.only_first.begin(), split.only_first.end());
            lcd_roots.insert(lcd_roots.end(), split.only_second.begin(), split.only_second.end());
            den_roots[i * l + j] = std::move(r);
        }
    if (static_cast<int>(lcd_roots.size()) > kMaxDegree)
        throw ValidationError("smith_mcmillan: common denominator degree " + std::to_string(lcd_roots.size()) +
                              " exceeds the cap of " + std::to_string(kMaxDegree));
    const Polynomial lcd = real_poly_from_roots(lcd_roots);

    // Numerator matrix N = lcd * H, normalized to unit max coefficient.
    PolyMatrix numer(m, l);
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < l; ++j) {
            const RationalFunction& e = h(i, j);
            if (e.is_zero()) continue;
            const auto split = match_root_sets(lcd_roots, den_roots[i * l + j], opts.root_tol);
            if (!split.only_second.empty())
                throw NumericalError("smith_mcmillan: denominator of " + position(0, i, j) +
                                     " does not divide the common denominator");
            numer(i, j) = poly_mul(e.numerator(), real_poly_from_roots(split.only_first)) * e.gain();
            scale = std::max(scale, numer(i, j).norm_inf());
        }
    if (scale == 0.0) throw ValidationError("smith_mcmillan: matrix is identically zero (normal rank 0)");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < l; ++j) numer(i, j) *= 1.0 / scale;

    Reducer red(numer, opts);
    const std::size_t rank = red.run();

    SmithMcMillanForm out;
    out.rows = m;
    out.cols = l;
    out.normal_rank = rank;
    out.left = red.left();
    out.right = red.right();
    // Invariant polynomials from determinantal divisors n_k = D_k / D_{k-1};
    // the elimination's own diagonal carries Euclidean remainder growth.
    std::vector<cplx> prev;
    bool use_divisors = true;
    std::vector<std::vector<cplx>> inv_roots;
    for (std::size_t k = 1; k <= rank && use_divisors; ++k) {
        const auto dk = divisor_roots(numer, k, opts.zero_tol, opts.root_tol);
        if (!dk) {
            use_divisors = false;
            break;
        }
        const auto split = match_root_sets(*dk, prev, opts.root_tol);
        if (!split.only_second.empty() || dk->size() != prev.size() + split.only_first.size()) {
            use_divisors = false;
            break;
        }
        inv_roots.push_back(conjugate_symmetrize(split.only_first));
        prev = *dk;
    }
    for (std::size_t k = 0; k < rank; ++k) {
        const Polynomial& w = red.work()(k, k);
        if (!use_divisors) {
            out.diag.emplace_back(scale, w, lcd, opts.root_tol);
            continue;
        }
        const Polynomial nk = real_poly_from_roots(inv_roots[k]);
        out.diag.emplace_back(scale * fitted_gain(w, nk), nk, lcd, opts.root_tol);
    }
    if (!use_divisors) out.warnings.push_back("determinantal divisors unavailable; diagonal taken from elimination");

    // Divisibility chain a_{i+1} | a_i, b_i | b_{i+1}.
    for (std::size_t k = 0; k + 1 < rank; ++k) {
        const auto a0 = roots_or_empty(out.diag[k].denominator());
        const auto a1 = roots_or_empty(out.diag[k + 1].denominator());
        const auto b0 = roots_or_empty(out.diag[k].numerator());
        const auto b1 = roots_or_empty(out.diag[k + 1].numerator());
        if (!root_subset(a1, a0, opts.root_tol) || !root_subset(b0, b1, opts.root_tol))
            out.warnings.push_back("divisibility chain violated between diagonal entries " + std::to_string(k) +
                                   " and " + std::to_string(k + 1));
    }

    const auto pts = unit_circle_points(8, 0.37);
    out.left_det_const = 1.0 / mean_determinant(out.left, pts);
    out.right_det_const = 1.0 / mean_determinant(out.right, pts);
    if (determinant_spread(out.left, pts) > 1e-6 || determinant_spread(out.right, pts) > 1e-6)
        out.warnings.push_back("transform determinant is not constant to 1e-6; result is unreliable");

    const auto pz = pole_zero_roots(out);
    if (has_root_cluster(pz.poles) || has_root_cluster(pz.zeros))
        out.warnings.push_back("repeated or clustered roots closer than 1e-6");
    return out;
}

PoleZeroPolynomials pole_zero_polynomials(const SmithMcMillanForm& smf) {
    PoleZeroPolynomials out{Polynomial{1.0}, Polynomial{1.0}, 1.0};
    for (const auto& e : smf.diag) {
        out.zeros = poly_mul(out.zeros, e.numerator());
        out.poles = poly_mul(out.poles, e.denominator());
        out.gain *= e.gain();
    }
    return out;
}

PoleZeroRoots pole_zero_roots(const SmithMcMillanForm& smf) {
    PoleZeroRoots out;
    for (const auto& e : smf.diag) {
        const auto z = roots_or_empty(e.numerator());
        const auto p = roots_or_empty(e.denominator());
        out.zeros.insert(out.zeros.end(), z.begin(), z.end());
        out.poles.insert(out.poles.end(), p.begin(), p.end());
        out.gain *= e.gain();
    }
    return out;
}

double reconstruction_error(const RationalMatrix& h, const SmithMcMillanForm& smf, std::span<const cplx> points) {
    double worst = 0.0;
    for (const cplx z : points) {
        const Eigen::MatrixXcd lhs = smf.left.evaluate(z) * h.evaluate(z) * smf.right.evaluate(z);
        const Eigen::MatrixXcd mz = smf.pseudo_diagonal(z);
        worst = std::max(worst, (lhs - mz).norm() / std::max(mz.norm(), 1e-300));
    }
    return worst;
}

double determinant_spread(const PolyMatrix& v, std::span<const cplx> points) {
    std::vector<cplx> dets;
    cplx mean = 0.0;
    for (const cplx z : points) {
        dets.push_back(v.evaluate(z).determinant());
        mean += dets.back();
    }
    mean /= static_cast<double>(dets.size());
    double spread = 0.0;
    for (const cplx d : dets) spread = std::max(spread, std::abs(d - mean));
    return spread / std::max(std::abs(mean), 1e-300);
}

}  // namespace mimocep
