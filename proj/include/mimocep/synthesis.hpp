#pragma once

#include "mimocep/lti.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mimocep {

/// One scalar channel g * prod(z - zeros) / prod(z - poles); needs
/// zeros.size() <= poles.size() and conjugate-closed root lists.
struct ChannelSpec {
    std::vector<cplx> poles;
    std::vector<cplx> zeros;
    double gain = 1.0;
};

/// Square model H(z) = L diag(h_i(z)) R realized in state space, with a
/// random orthogonal state transform applied so A is dense.
struct SyntheticModel {
    StateSpaceModel model;
    std::vector<ChannelSpec> channels;
    Eigen::MatrixXd left_mix;
    Eigen::MatrixXd right_mix;

    /// Union of the channel poles (the MIMO poles for coprime channels).
    std::vector<cplx> poles() const;
    /// Union of the channel zeros (the finite transmission zeros).
    std::vector<cplx> zeros() const;
    /// det L * det R * prod g_i: the gain of det H(z) in monic form.
    double determinant_gain() const;
};

SyntheticModel model_from_channels(const std::vector<ChannelSpec>& channels, const Eigen::MatrixXd& left_mix,
                                   const Eigen::MatrixXd& right_mix, std::uint64_t state_seed = 1);

struct RandomModelSpec {
    std::size_t order = 6;
    std::size_t ports = 3;  ///< m = l
    double pole_min = 0.1, pole_max = 0.9;
    double zero_min = 0.1, zero_max = 0.95;
    /// Minimum distance between any two sampled roots (poles and zeros).
    double min_separation = 0.05;
    std::uint64_t seed = 1;
};

/// Stable, minimum-phase, minimal square model with randomly sampled poles,
/// zeros, gains and well-conditioned constant mixing matrices.
SyntheticModel random_stable_model(const RandomModelSpec& spec);

inline constexpr std::uint64_t kFixtureSeed = 2019;

/// 3x3 model of order 5 with poles {0.1786 +- 0.3300i, -0.2769 +- 0.1793i,
/// 0.0634} and transmission zeros {-0.9681, 0.4419, 0.0916 +- 0.1453i}.
SyntheticModel synthetic_3x3_fixture(std::uint64_t seed = kFixtureSeed);

/// Independent zero-mean Gaussian channels, channel i scaled by gains[i].
SignalRecord white_noise(std::size_t samples, const std::vector<double>& gains, std::uint64_t seed);

}  // namespace mimocep
