#include "mimocep/cstr.hpp"

#include "mimocep/error.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace mimocep {

namespace {

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string("cstr config: ") + field + " must be positive");
}

void require_nonnegative(double v, const char* field) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError(std::string("cstr config: ") + field + " must be non-negative");
}

bool is_multiple(double a, double b) {
    const double r = a / b;
    return std::abs(r - std::round(r)) < 1e-9 * std::max(1.0, r) && std::round(r) >= 1.0;
}

}  // namespace

void CstrConfig::validate() const {
    require_positive(volume, "V");
    require_positive(k0, "k0");
    require_positive(e_over_r, "EoverR");
    if (!std::isfinite(delta_h)) throw ValidationError("cstr config: dH must be finite");
    require_positive(rho, "rho");
    require_positive(cp, "Cp");
    require_positive(ua0, "UA0");
    require_nonnegative(op.ca, "operating_point.CA");
    require_positive(op.t, "operating_point.T");
    require_nonnegative(op.q, "operating_point.q");
    require_positive(op.tj, "operating_point.Tj");
    require_positive(op.tf, "operating_point.Tf");
    require_nonnegative(op.caf, "operating_point.CAf");
    require_nonnegative(noise.v1, "noise_variances.v1");
    require_nonnegative(noise.v2, "noise_variances.v2");
    require_nonnegative(noise.ca, "noise_variances.CA");
    require_nonnegative(noise.t, "noise_variances.T");
    require_nonnegative(noise.q, "noise_variances.q");
    require_nonnegative(noise.tj, "noise_variances.Tj");
    require_nonnegative(fouling_start, "fouling_start");
    require_nonnegative(fouling_slope, "fouling_slope");
    require_nonnegative(kp, "Kp");
    require_nonnegative(kd, "Kd");
    require_nonnegative(ki, "Ki");
    if (!decoupler.allFinite()) throw ValidationError("cstr config: decoupler must be finite");
    require_positive(sample_time, "sample_time");
    if (samples == 0) throw ValidationError("cstr config: samples must be positive");
    require_positive(integrator_step, "integrator_step");
    require_positive(control_step, "control_step");
    require_positive(windup_factor, "windup_factor");
    if (!is_multiple(sample_time, integrator_step))
        throw ValidationError("cstr config: sample_time must be a whole multiple of integrator_step");
    if (!is_multiple(control_step, integrator_step))
        throw ValidationError("cstr config: control_step must be a whole multiple of integrator_step");
}

double ua_schedule(double t, const CstrConfig& cfg) {
    if (t < 0.0) throw ValidationError("ua_schedule: time must be non-negative");
    if (t <= cfg.fouling_start) return cfg.ua0;
    const double ua = cfg.ua0 - cfg.fouling_slope * (t - cfg.fouling_start);
    if (!(ua > 0.0))
        throw NumericalError("ua_schedule: UA is no longer positive at t = " + std::to_string(t) +
                             " min (fouling horizon exceeded)");
    return ua;
}

std::array<double, 2> cstr_rhs(const CstrState& x, const CstrInputs& in, double ua, std::array<double, 2> v,
                               const CstrConfig& cfg) {
    if (!(x.t > 0.0)) throw NumericalError("cstr_rhs: temperature " + std::to_string(x.t) + " K is not positive");
    const double rate = x.ca * cfg.k0 * std::exp(-cfg.e_over_r / x.t);
    const double dilution = in.q / cfg.volume;
    const double heat = cfg.rho * cfg.cp;
    const std::array<double, 2> out{
        dilution * (in.caf - x.ca) - rate + v[0],
        dilution * (in.tf - x.t) - cfg.delta_h / heat * rate + ua / (cfg.volume * heat) * (in.tj - x.t) + v[1],
    };
    if (!std::isfinite(out[0]) || !std::isfinite(out[1])) throw NumericalError("cstr_rhs: non-finite derivative");
    return out;
}

PidDecoupler::PidDecoupler(const CstrConfig& cfg)
    : kp_(cfg.kp), kd_(cfg.kd), ki_(cfg.ki), decoupler_(cfg.decoupler), nominal_{cfg.op.q, cfg.op.tj},
      limit_{cfg.windup_factor * cfg.op.q, cfg.windup_factor * cfg.op.tj} {}

void PidDecoupler::reset() {
    integral_ = {};
    prev_ = {};
}

std::array<double, 2> PidDecoupler::step(double err_c, double err_t, double dt) {
    if (!(dt > 0.0)) throw ValidationError("PidDecoupler::step: dt must be positive");
    const std::array<double, 2> err{err_c, err_t};
    Eigen::Vector2d pid;
    for (std::size_t i = 0; i < 2; ++i) {
        integral_[i] += 0.5 * (err[i] + prev_[i]) * dt;
        if (ki_ > 0.0) integral_[i] = std::clamp(integral_[i], -limit_[i] / ki_, limit_[i] / ki_);
        pid(static_cast<Eigen::Index>(i)) = kp_ * err[i] + kd_ * (err[i] - prev_[i]) / dt + ki_ * integral_[i];
        prev_[i] = err[i];
    }
    const Eigen::Vector2d delta = decoupler_ * pid;
    return {std::max(0.0, nominal_[0] + delta(0)), nominal_[1] + delta(1)};
}

CstrDataset generate_dataset(const CstrConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const auto substeps = static_cast<std::size_t>(std::llround(cfg.sample_time / cfg.integrator_step));
    const auto control_every = static_cast<std::size_t>(std::llround(cfg.control_step / cfg.integrator_step));
    const double h = cfg.integrator_step;

    PidDecoupler pid(cfg);
    CstrState x{cfg.op.ca, cfg.op.t};
    CstrInputs in{cfg.op.q, cfg.op.tj, cfg.op.tf, cfg.op.caf};
    const auto n = static_cast<Eigen::Index>(cfg.samples);
    Eigen::MatrixXd u(2, n), y(2, n);
    const double sd_v1 = std::sqrt(cfg.noise.v1), sd_v2 = std::sqrt(cfg.noise.v2);
    std::size_t tick = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double t0 = static_cast<double>(k) * cfg.sample_time;
        u(0, k) = in.q + std::sqrt(cfg.noise.q) * nd(rng);
        u(1, k) = in.tj + std::sqrt(cfg.noise.tj) * nd(rng);
        y(0, k) = x.ca + std::sqrt(cfg.noise.ca) * nd(rng);
        y(1, k) = x.t + std::sqrt(cfg.noise.t) * nd(rng);
        const std::array<double, 2> v{sd_v1 * nd(rng), sd_v2 * nd(rng)};
        try {
            for (std::size_t s = 0; s < substeps; ++s, ++tick) {
                const double t = t0 + static_cast<double>(s) * h;
                if (cfg.controller_on && tick % control_every == 0) {
                    const auto act = pid.step(cfg.op.ca - x.ca, cfg.op.t - x.t, cfg.control_step);
                    in.q = act[0];
                    in.tj = act[1];
                }
                // UA is evaluated at each stage time.
                auto f = [&](const CstrState& s2, double ts) { return cstr_rhs(s2, in, ua_schedule(ts, cfg), v, cfg); };
                const auto k1 = f(x, t);
                const auto k2 = f({x.ca + 0.5 * h * k1[0], x.t + 0.5 * h * k1[1]}, t + 0.5 * h);
                const auto k3 = f({x.ca + 0.5 * h * k2[0], x.t + 0.5 * h * k2[1]}, t + 0.5 * h);
                const auto k4 = f({x.ca + h * k3[0], x.t + h * k3[1]}, t + h);
                x.ca += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
                x.t += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
            }
        } catch (const NumericalError& e) {
            throw NumericalError("cstr integration diverged in sample " + std::to_string(k) + ": " + e.what());
        }
        if (!std::isfinite(x.ca) || !std::isfinite(x.t))
            throw NumericalError("cstr integration diverged in sample " + std::to_string(k));
    }
    return {SignalRecord(std::move(u), cfg.sample_time, {"q", "Tj"}),
            SignalRecord(std::move(y), cfg.sample_time, {"CA", "T"})};
}

SplitDataset split_dataset(const CstrDataset& d, const FaultSplit& split) {
    const std::size_t n = d.u.length();
    if (d.y.length() != n) throw ValidationError("split_dataset: input and output lengths differ");
    if (!(split.normal_end <= split.faulty_begin && split.faulty_begin < n && split.normal_end > 0))
        throw ValidationError("split_dataset: split points out of range for length " + std::to_string(n));
    return {{d.u.slice(0, split.normal_end), d.y.slice(0, split.normal_end)},
            {d.u.slice(split.faulty_begin, n), d.y.slice(split.faulty_begin, n)}};
}

}  // namespace mimocep
