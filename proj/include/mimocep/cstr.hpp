#pragma once

#include "mimocep/lti.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace mimocep {

struct CstrOperatingPoint {
    double ca = 0.2;    ///< mol/L
    double t = 446.0;   ///< K
    double q = 100.0;   ///< L/min
    double tj = 419.0;  ///< K
    double tf = 400.0;  ///< K
    double caf = 1.0;   ///< mol/L
};

/// Variances of the system noise (v1, v2) and the measurement noise.
struct CstrNoise {
    double v1 = 0.01, v2 = 0.01;
    double ca = 1e-5, t = 0.005, q = 1e-6, tj = 1e-6;
};

struct CstrConfig {
    double volume = 100.0;               ///< L
    double k0 = std::exp(13.4);          ///< 1/min
    double e_over_r = 5360.0;            ///< K
    double delta_h = -17835.821;         ///< J/mol, exothermic
    double rho = 1000.0;                 ///< g/L
    double cp = 0.239;                   ///< J/g/K
    double ua0 = 11950.0;                ///< J/min/K
    CstrOperatingPoint op;
    CstrNoise noise;
    double fouling_start = 5000.0;       ///< min
    double fouling_slope = 0.8365;       ///< J/min/K per min
    bool controller_on = true;
    double kp = 1.0, kd = 0.1, ki = 10.0;
    Eigen::Matrix2d decoupler = (Eigen::Matrix2d() << 5.0, 1.0, 1.0, 2.0).finished();
    double sample_time = 1.0;            ///< min
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    double integrator_step = 0.05;       ///< min, RK4
    double control_step = 0.05;          ///< min, PID update interval
    /// The integral term is clamped to +- windup_factor times the nominal
    /// actuator value of its loop (q* for the CA loop, Tj* for the T loop).
    double windup_factor = 10.0;

    /// Throws ValidationError naming the offending field.
    void validate() const;
};

/// UA0 up to fouling_start, then linear decrease. Throws NumericalError once
/// the value is no longer positive.
double ua_schedule(double t, const CstrConfig& cfg);

struct CstrState {
    double ca = 0.0;
    double t = 0.0;
};

struct CstrInputs {
    double q = 0.0, tj = 0.0, tf = 0.0, caf = 0.0;
};

/// dCA/dt and dT/dt. Throws NumericalError for T <= 0 or a non-finite result.
std::array<double, 2> cstr_rhs(const CstrState& x, const CstrInputs& in, double ua, std::array<double, 2> v,
                               const CstrConfig& cfg);

/// Two PID loops (trapezoidal integral, backward-difference derivative)
/// followed by the constant decoupler. Errors are setpoint minus measurement.
class PidDecoupler {
public:
    explicit PidDecoupler(const CstrConfig& cfg);

    /// Returns absolute (q, Tj); q is kept non-negative.
    std::array<double, 2> step(double err_c, double err_t, double dt);
    void reset();

    const std::array<double, 2>& integral() const { return integral_; }

private:
    double kp_, kd_, ki_;
    Eigen::Matrix2d decoupler_;
    std::array<double, 2> nominal_;
    std::array<double, 2> limit_;
    std::array<double, 2> integral_{};
    std::array<double, 2> prev_{};
};

struct CstrDataset {
    SignalRecord u;  ///< q, Tj
    SignalRecord y;  ///< CA, T
};

/// Integrates from the operating point, samples every sample_time and adds
/// measurement noise. Seeded; identical configs give identical data.
/// Throws NumericalError with the sample index when the state diverges.
CstrDataset generate_dataset(const CstrConfig& cfg);

/// [0, normal_end) and [faulty_begin, N): the samples around the fault
/// onset are dropped.
struct FaultSplit {
    std::size_t normal_end = 4900;
    std::size_t faulty_begin = 5100;
};

struct SplitDataset {
    CstrDataset normal;
    CstrDataset faulty;
};

SplitDataset split_dataset(const CstrDataset& d, const FaultSplit& split = {});

}  // namespace mimocep
