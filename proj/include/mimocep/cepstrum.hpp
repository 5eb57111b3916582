#pragma once

#include "mimocep/lti.hpp"
#include "mimocep/rational.hpp"
#include "mimocep/smith_mcmillan.hpp"
#include "mimocep/spectral.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace mimocep {

enum class Provenance { exact, model, data };

const char* to_string(Provenance p);
/// Throws ValidationError for an unknown name.
Provenance provenance_from_string(const std::string& s);

/// Power cepstrum c(0..K). Only k >= 0 is stored; c(-k) = c(k).
struct CepstrumSequence {
    std::vector<double> coeffs;
    Provenance provenance = Provenance::exact;
    /// False when c(0) carries an unknown offset (data and spectrum paths).
    bool zeroth_reliable = true;
    std::vector<std::string> warnings;

    std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

inline constexpr std::size_t kDefaultOrder = 50;

/// c(0) = log g^2, c(k) = sum alpha^k / k - sum beta^k / k.
/// Throws ValidationError when a root has modulus >= 1 or the gain is zero.
CepstrumSequence exact_cepstrum(std::span<const cplx> poles, std::span<const cplx> zeros, double gain,
                                std::size_t order = kDefaultOrder);

/// Through the Smith-McMillan form: roots of a(z), b(z) and g = prod g_i.
/// Throws ValidationError when the normal rank is below min(m, l).
CepstrumSequence model_cepstrum(const RationalMatrix& h, std::size_t order = kDefaultOrder,
                                const SmithMcMillanOptions& opts = {});
CepstrumSequence model_cepstrum(const StateSpaceModel& model, std::size_t order = kDefaultOrder);

/// Inverse transform of log det H H^H sampled on an F-point grid (no
/// estimation). For square models; c(0) may differ from the Smith-McMillan
/// value by log |c_V1 c_V2|^2.
CepstrumSequence spectrum_cepstrum(const StateSpaceModel& model, std::size_t order = kDefaultOrder,
                                   std::size_t grid_size = 4096);

/// Welch estimate -> log det -> inverse transform.
CepstrumSequence data_cepstrum(const SignalRecord& x, const WelchParams& params = {},
                               std::size_t order = kDefaultOrder, unsigned threads = 1);

/// c_Y - c_U for a square system. Throws ValidationError when the channel
/// counts differ (no data-driven scheme exists for m != l) or the lengths do.
CepstrumSequence system_cepstrum_from_io(const SignalRecord& u, const SignalRecord& y, const WelchParams& params = {},
                                         std::size_t order = kDefaultOrder, unsigned threads = 1);

/// sqrt(sum_{k=1..K} w_k (a_k - b_k)^2); empty weights mean all ones.
/// Throws ValidationError on order or weight-length mismatch.
double fingerprint_distance(const CepstrumSequence& a, const CepstrumSequence& b,
                            std::span<const double> weights = {});

/// Smallest K with 2 sum_j |r_j|^{K+1} / ((K+1)(1 - |r_j|)) <= target, the
/// bound on the log-spectrum truncation error.
std::size_t truncation_order(std::span<const cplx> roots, double target);

/// log g^2 - sum log|1 - alpha e^{-i omega}|^2 + sum log|1 - beta e^{-i omega}|^2.
double exact_log_spectrum(std::span<const cplx> poles, std::span<const cplx> zeros, double gain, double omega);

}  // namespace mimocep
