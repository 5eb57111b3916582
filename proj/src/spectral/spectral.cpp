#include "mimocep/spectral.hpp"

#include "mimocep/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

namespace mimocep {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_inplace(std::vector<cplx>& x, bool inverse) {
    const std::size_t n = x.size();
    if (!is_power_of_two(n)) throw ValidationError("fft: length " + std::to_string(n) + " is not a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    // Twiddles straight from sin/cos, no recurrence.
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cplx> tw(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        tw[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2, stride = n / len;
        for (std::size_t start = 0; start < n; start += len)
            for (std::size_t k = 0; k < half; ++k) {
                const cplx t = tw[k * stride] * x[start + k + half];
                x[start + k + half] = x[start + k] - t;
                x[start + k] += t;
            }
    }
    if (inverse)
        for (auto& v : x) v /= static_cast<double>(n);
}

std::vector<double> make_window(WindowKind kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double c = std::cos(step * static_cast<double>(k));
        if (kind == WindowKind::hann) w[k] = 0.5 - 0.5 * c;
        if (kind == WindowKind::hamming) w[k] = 0.54 - 0.46 * c;
    }
    return w;
}

SpectrumMatrix welch_psd(const SignalRecord& x, const WelchParams& p) {
    const std::size_t n = x.length(), len = p.segment_length, grid = p.grid_size;
    if (len < 2) throw ValidationError("welch_psd: segment length must be at least 2");
    if (len > n)
        throw ValidationError("welch_psd: segment length " + std::to_string(len) + " exceeds record length " +
                              std::to_string(n));
    if (grid < len) throw ValidationError("welch_psd: grid size must be at least the segment length");
    if (!is_power_of_two(grid)) throw ValidationError("welch_psd: grid size must be a power of two");
    if (!(p.overlap >= 0.0 && p.overlap < 1.0)) throw ValidationError("welch_psd: overlap must lie in [0, 1)");
    const auto hop = std::max<std::size_t>(1, len - static_cast<std::size_t>(std::lround(p.overlap * len)));
    const std::size_t segments = (n - len) / hop + 1;
    if (segments < 2)
        throw ValidationError("welch_psd: only " + std::to_string(segments) +
                              " segment fits the record; the estimate needs at least 2");
    const auto w = make_window(p.window, len);
    double energy = 0.0;
    for (const double v : w) energy += v * v;
    if (!(energy > 0.0)) throw ValidationError("welch_psd: window has zero energy");

    const auto c = static_cast<Eigen::Index>(x.channel_count());
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(c, static_cast<Eigen::Index>(grid) * c);
    Eigen::MatrixXcd spec(c, static_cast<Eigen::Index>(grid));
    std::vector<cplx> buf(grid);
    for (std::size_t s = 0; s < segments; ++s) {
        const auto begin = static_cast<Eigen::Index>(s * hop);
        for (Eigen::Index ch = 0; ch < c; ++ch) {
            const auto seg = x.channels.row(ch).segment(begin, static_cast<Eigen::Index>(len));
            const double mean = p.demean ? seg.mean() : 0.0;
            std::fill(buf.begin(), buf.end(), cplx(0.0));
            for (std::size_t k = 0; k < len; ++k) buf[k] = (seg(static_cast<Eigen::Index>(k)) - mean) * w[k];
            fft_inplace(buf);
            for (std::size_t f = 0; f < grid; ++f) spec(ch, static_cast<Eigen::Index>(f)) = buf[f];
        }
        for (Eigen::Index f = 0; f < static_cast<Eigen::Index>(grid); ++f)
            acc.middleCols(f * c, c) += spec.col(f) * spec.col(f).adjoint();
    }
    SpectrumMatrix out;
    out.slices.reserve(grid);
    const double norm = 1.0 / (energy * static_cast<double>(segments));
    for (Eigen::Index f = 0; f < static_cast<Eigen::Index>(grid); ++f) out.slices.push_back(acc.middleCols(f * c, c) * norm);
    return out;
}

SpectrumMatrix transfer_spectrum(const StateSpaceModel& model, std::size_t grid_size) {
    if (grid_size == 0) throw ValidationError("transfer_spectrum: grid size must be positive");
    if (!model.is_stable()) throw ValidationError("transfer_spectrum: model is not stable");
    SpectrumMatrix out;
    out.kind = SpectrumKind::transfer;
    out.slices.reserve(grid_size);
    for (std::size_t f = 0; f < grid_size; ++f) {
        const cplx z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(f) / static_cast<double>(grid_size));
        const Eigen::MatrixXcd h = model.frequency_response(z);
        out.slices.push_back(h * h.adjoint());
    }
    return out;
}

namespace {

double slice_logdet(const Eigen::MatrixXcd& s, double floor, std::size_t bin) {
    const double scale = std::max(s.norm(), 1e-300);
    if ((s - s.adjoint()).norm() > 1e-10 * scale)
        throw ValidationError("logdet_spectrum: slice " + std::to_string(bin) + " is not Hermitian");
    const auto c = static_cast<double>(s.rows());
    const double level = floor * std::max(s.trace().real() / c, 1e-300);
    if (s.rows() == 1) return std::log(std::max(s(0, 0).real(), level));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("logdet_spectrum: eigenvalue iteration failed at bin " + std::to_string(bin));
    double sum = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) sum += std::log(std::max(es.eigenvalues()(i), level));
    return sum;
}

}  // namespace

std::vector<double> logdet_spectrum(const SpectrumMatrix& phi, double floor, unsigned threads) {
    if (!(floor > 0.0)) throw ValidationError("logdet_spectrum: floor must be positive");
    const std::size_t grid = phi.grid_size();
    for (const auto& s : phi.slices)
        if (s.rows() != s.cols() || s.rows() == 0) throw ValidationError("logdet_spectrum: slices must be square");
    std::vector<double> out(grid);
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(grid, 1))));
    auto run = [&](std::size_t begin, std::size_t end) {
        for (std::size_t f = begin; f < end; ++f) out[f] = slice_logdet(phi.slices[f], floor, f);
    };
    if (workers == 1) {
        run(0, grid);
        return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (grid + workers - 1) / workers;
    for (unsigned t = 0; t < workers; ++t)
        pool.emplace_back([&, t] {
            try {
                run(std::min(grid, t * chunk), std::min(grid, (t + 1) * chunk));
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<double> inverse_fourier_coeffs(const std::vector<double>& log_spectrum, std::size_t order) {
    const std::size_t grid = log_spectrum.size();
    if (2 * order >= grid)
        throw ValidationError("inverse_fourier_coeffs: order " + std::to_string(order) + " needs K < F/2 (F = " +
                              std::to_string(grid) + ")");
    std::vector<cplx> buf(log_spectrum.begin(), log_spectrum.end());
    for (const auto& v : buf)
        if (!std::isfinite(v.real())) throw ValidationError("inverse_fourier_coeffs: non-finite log-spectrum value");
    fft_inplace(buf, true);
    double scale = 1.0, residue = 0.0;
    for (const auto& v : buf) scale = std::max(scale, std::abs(v.real()));
    std::vector<double> out(order + 1);
    for (std::size_t k = 0; k <= order; ++k) {
        out[k] = buf[k].real();
        residue = std::max(residue, std::abs(buf[k].imag()));
    }
    if (residue > 1e-8 * scale)
        throw NumericalError("inverse_fourier_coeffs: imaginary residue " + std::to_string(residue) +
                             " indicates an asymmetric log-spectrum");
    return out;
}

double log_spectrum_at(const std::vector<double>& coeffs, double omega) {
    if (coeffs.empty()) return 0.0;
    double sum = 0.0;
    // Smallest terms first.
    for (std::size_t k = coeffs.size() - 1; k >= 1; --k) sum += 2.0 * coeffs[k] * std::cos(static_cast<double>(k) * omega);
    return sum + coeffs[0];
}

}  // namespace mimocep
