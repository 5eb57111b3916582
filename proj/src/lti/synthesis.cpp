#include "mimocep/synthesis.hpp"

#include "mimocep/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace mimocep {

namespace {

struct Block {
    Eigen::MatrixXd a;
    Eigen::VectorXd b;
    Eigen::RowVectorXd c;
    double d = 0.0;
};

// Controllable canonical form of g * prod(z - zeros) / prod(z - poles).
Block realize_channel(const ChannelSpec& ch) {
    if (ch.zeros.size() > ch.poles.size())
        throw ValidationError("channel has more zeros than poles (improper)");
    const Polynomial den = real_poly_from_roots(ch.poles);
    const Polynomial num = real_poly_from_roots(ch.zeros) * ch.gain;
    const auto p = static_cast<Eigen::Index>(ch.poles.size());
    Block blk;
    blk.d = ch.zeros.size() == ch.poles.size() ? ch.gain : 0.0;
    blk.a = Eigen::MatrixXd::Zero(p, p);
    blk.b = Eigen::VectorXd::Zero(p);
    blk.c = Eigen::RowVectorXd::Zero(p);
    if (p == 0) return blk;
    const Polynomial rem = num - den * blk.d;
    for (Eigen::Index i = 0; i + 1 < p; ++i) blk.a(i, i + 1) = 1.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        blk.a(p - 1, j) = -den[static_cast<std::size_t>(j)];
        blk.c(j) = rem[static_cast<std::size_t>(j)];
    }
    blk.b(p - 1) = 1.0;
    return blk;
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) g(i, j) = nd(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_well_conditioned(Eigen::Index n, std::mt19937_64& rng, double max_cond) {
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        Eigen::MatrixXd m(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) m(i, j) = nd(rng);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) > 0.0 && s(0) / s(s.size() - 1) <= max_cond) return m;
    }
    throw NumericalError("could not sample a well-conditioned mixing matrix");
}

class RootSampler {
public:
    RootSampler(std::mt19937_64& rng, double separation) : rng_(rng), sep_(separation) {}

    // Appends a conjugate-closed group: one real root or a complex pair.
    std::vector<cplx> sample(bool pair, double rmin, double rmax) {
        std::uniform_real_distribution<double> mod(rmin, rmax);
        std::uniform_real_distribution<double> ang(0.0, std::numbers::pi);
        std::bernoulli_distribution sign(0.5);
        for (int attempt = 0; attempt < 100000; ++attempt) {
            const double r = mod(rng_);
            std::vector<cplx> group;
            if (pair) {
                const cplx z = std::polar(r, ang(rng_));
                if (2.0 * z.imag() < sep_) continue;
                group = {z, std::conj(z)};
            } else {
                group = {cplx(sign(rng_) ? r : -r, 0.0)};
            }
            const bool clear = std::all_of(group.begin(), group.end(), [&](cplx z) {
                return std::all_of(taken_.begin(), taken_.end(), [&](cplx t) { return std::abs(z - t) >= sep_; });
            });
            if (!clear) continue;
            taken_.insert(taken_.end(), group.begin(), group.end());
            return group;
        }
        throw NumericalError("could not place a root with the requested separation");
    }

    // count roots as a random mix of real roots and complex pairs.
    std::vector<std::vector<cplx>> groups(std::size_t count, double rmin, double rmax) {
        std::vector<std::vector<cplx>> out;
        std::bernoulli_distribution coin(0.5);
        std::size_t placed = 0;
        while (placed < count) {
            const bool pair = count - placed >= 2 && coin(rng_);
            out.push_back(sample(pair, rmin, rmax));
            placed += out.back().size();
        }
        return out;
    }

private:
    std::mt19937_64& rng_;
    double sep_;
    std::vector<cplx> taken_;
};

}  // namespace

std::vector<cplx> SyntheticModel::poles() const {
    std::vector<cplx> out;
    for (const auto& ch : channels) out.insert(out.end(), ch.poles.begin(), ch.poles.end());
    return out;
}

std::vector<cplx> SyntheticModel::zeros() const {
    std::vector<cplx> out;
    for (const auto& ch : channels) out.insert(out.end(), ch.zeros.begin(), ch.zeros.end());
    return out;
}

double SyntheticModel::determinant_gain() const {
    double g = left_mix.determinant() * right_mix.determinant();
    for (const auto& ch : channels) g *= ch.gain;
    return g;
}

SyntheticModel model_from_channels(const std::vector<ChannelSpec>& channels, const Eigen::MatrixXd& left_mix,
                                   const Eigen::MatrixXd& right_mix, std::uint64_t state_seed) {
    const auto m = static_cast<Eigen::Index>(channels.size());
    if (m == 0) throw ValidationError("model_from_channels: no channels");
    if (left_mix.rows() != m || left_mix.cols() != m || right_mix.rows() != m || right_mix.cols() != m)
        throw ValidationError("model_from_channels: mixing matrices must be square of the channel count");
    std::vector<Block> blocks;
    Eigen::Index n = 0;
    for (const auto& ch : channels) {
        blocks.push_back(realize_channel(ch));
        n += blocks.back().a.rows();
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, m);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, n);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
    Eigen::Index off = 0;
    for (Eigen::Index i = 0; i < m; ++i) {
        const Block& blk = blocks[static_cast<std::size_t>(i)];
        const auto p = blk.a.rows();
        a.block(off, off, p, p) = blk.a;
        b.block(off, i, p, 1) = blk.b;
        c.block(i, off, 1, p) = blk.c;
        d(i, i) = blk.d;
        off += p;
    }
    std::mt19937_64 rng(state_seed);
    const Eigen::MatrixXd t = random_orthogonal(n, rng);
    return SyntheticModel{StateSpaceModel(t * a * t.transpose(), t * b * right_mix, left_mix * c * t.transpose(),
                                          left_mix * d * right_mix),
                          channels, left_mix, right_mix};
}

SyntheticModel random_stable_model(const RandomModelSpec& spec) {
    if (spec.ports == 0) throw ValidationError("random_stable_model: ports must be positive");
    if (!(spec.pole_min > 0.0 && spec.pole_max < 1.0 && spec.pole_min <= spec.pole_max))
        throw ValidationError("random_stable_model: pole moduli must lie in (0, 1)");
    if (!(spec.zero_min > 0.0 && spec.zero_max < 1.0 && spec.zero_min <= spec.zero_max))
        throw ValidationError("random_stable_model: zero moduli must lie in (0, 1)");
    std::mt19937_64 rng(spec.seed);
    RootSampler sampler(rng, spec.min_separation);

    const auto pole_groups = sampler.groups(spec.order, spec.pole_min, spec.pole_max);
    std::vector<ChannelSpec> channels(spec.ports);
    std::uniform_int_distribution<std::size_t> pick(0, spec.ports - 1);
    for (std::size_t g = 0; g < pole_groups.size(); ++g) {
        // The first groups go round-robin so channels are populated evenly.
        const std::size_t target = g < spec.ports ? g : pick(rng);
        auto& poles = channels[target].poles;
        poles.insert(poles.end(), pole_groups[g].begin(), pole_groups[g].end());
    }
    std::bernoulli_distribution biproper(0.5);
    std::uniform_real_distribution<double> gain(0.5, 2.0);
    for (auto& ch : channels) {
        const std::size_t p = ch.poles.size();
        std::size_t q = p;
        if (p > 0 && !biproper(rng)) q = std::uniform_int_distribution<std::size_t>(0, p - 1)(rng);
        for (const auto& grp : sampler.groups(q, spec.zero_min, spec.zero_max))
            ch.zeros.insert(ch.zeros.end(), grp.begin(), grp.end());
        ch.gain = gain(rng);
    }
    const auto m = static_cast<Eigen::Index>(spec.ports);
    const Eigen::MatrixXd left = random_well_conditioned(m, rng, 5.0);
    const Eigen::MatrixXd right = random_well_conditioned(m, rng, 5.0);
    return model_from_channels(channels, left, right, rng());
}

SyntheticModel synthetic_3x3_fixture(std::uint64_t seed) {
    const cplx p1(0.1786, 0.3300), p2(-0.2769, 0.1793), z1(0.0916, 0.1453);
    std::vector<ChannelSpec> channels{
        {{p1, std::conj(p1)}, {z1, std::conj(z1)}, 1.3},
        {{p2, std::conj(p2)}, {cplx(-0.9681), cplx(0.4419)}, 0.8},
        {{cplx(0.0634)}, {}, 0.6},
    };
    std::mt19937_64 rng(seed);
    const Eigen::MatrixXd left = random_well_conditioned(3, rng, 5.0);
    const Eigen::MatrixXd right = random_well_conditioned(3, rng, 5.0);
    return model_from_channels(channels, left, right, rng());
}

SignalRecord white_noise(std::size_t samples, const std::vector<double>& gains, std::uint64_t seed) {
    if (samples == 0) throw ValidationError("white_noise: sample count must be positive");
    if (gains.empty()) throw ValidationError("white_noise: need at least one channel gain");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const auto c = static_cast<Eigen::Index>(gains.size());
    Eigen::MatrixXd x(c, static_cast<Eigen::Index>(samples));
    for (Eigen::Index k = 0; k < x.cols(); ++k)
        for (Eigen::Index i = 0; i < c; ++i) x(i, k) = gains[static_cast<std::size_t>(i)] * nd(rng);
    std::vector<std::string> labels;
    for (Eigen::Index i = 0; i < c; ++i) labels.push_back("u" + std::to_string(i));
    return SignalRecord(std::move(x), 1.0, std::move(labels));
}

}  // namespace mimocep
