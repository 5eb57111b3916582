#pragma once

#include "mimocep/lti.hpp"
#include "mimocep/polynomial.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace mimocep {

bool is_power_of_two(std::size_t n);

/// In-place radix-2 transform, X_f = sum_k x_k e^{-2 pi i f k / n}. The
/// inverse applies the conjugate kernel and divides by n. Throws
/// ValidationError unless the length is a power of two.
void fft_inplace(std::vector<cplx>& x, bool inverse = false);

enum class WindowKind { hann, hamming, rectangular };

/// Periodic windows of length n.
std::vector<double> make_window(WindowKind kind, std::size_t n);

struct WelchParams {
    std::size_t segment_length = 1024;
    double overlap = 0.5;
    WindowKind window = WindowKind::hann;
    std::size_t grid_size = 4096;
    /// Subtract each segment's mean before windowing.
    bool demean = true;
};

enum class SpectrumKind { auto_spectrum, transfer };

/// One c x c matrix per frequency bin, omega_f = 2 pi f / F.
struct SpectrumMatrix {
    std::vector<Eigen::MatrixXcd> slices;
    SpectrumKind kind = SpectrumKind::auto_spectrum;

    std::size_t grid_size() const { return slices.size(); }
    std::size_t channels() const { return slices.empty() ? 0 : static_cast<std::size_t>(slices.front().rows()); }
};

/// Averaged modified periodogram: mean over segments of X_f X_f^H divided by
/// the window energy. Throws ValidationError on bad parameters or when the
/// record holds fewer than two segments.
SpectrumMatrix welch_psd(const SignalRecord& x, const WelchParams& params = {});

/// H(e^{i omega}) H(e^{i omega})^H of a stable model on an F-point grid.
SpectrumMatrix transfer_spectrum(const StateSpaceModel& model, std::size_t grid_size);

/// Per-bin log det, from Hermitian eigenvalues floored at floor * trace / c.
/// Bins are split across `threads` workers; the result does not depend on
/// the split. Throws ValidationError for a slice that is not Hermitian
/// within 1e-10 relative.
std::vector<double> logdet_spectrum(const SpectrumMatrix& phi, double floor = 1e-12, unsigned threads = 1);

/// c(0..K) of an even real log-spectrum on F bins (K < F/2). Throws
/// NumericalError when the imaginary residue exceeds 1e-8 relative.
std::vector<double> inverse_fourier_coeffs(const std::vector<double>& log_spectrum, std::size_t order);

/// c(0) + 2 sum_{k>=1} c(k) cos(k omega).
double log_spectrum_at(const std::vector<double>& coeffs, double omega);

}  // namespace mimocep
