// analysis.hpp - structural checks on chirp waveforms and effective channels
//
// * start-frequency displacement of a chirp under delay and Doppler,
//   measured from short-time spectra;
// * sparsity of the affine-domain effective channel;
// * direct 2-D matched filter over delay/Doppler hypotheses.

#pragma once

#include <span>
#include <utility>

#include "afl/effective_channel.hpp"

namespace afl {

struct SpectrogramSpec {
    std::size_t window_len = 16;
    std::size_t hop = 16;
    std::size_t fft_len = 64;

    void validate() const;
};

/// |STFT|^2 with a Hann window; rows are frames (starting at 0, hop, ...),
/// columns are fft_len frequency bins.
Eigen::MatrixXd spectrogram(std::span<const Complex> x, const SpectrogramSpec& spec);

/// exp(i*2*pi*rate*k^2), k = 0..n-1.
ComplexVector linear_chirp(std::size_t n, double rate);

/// Frequency displacement, in units of 1/n cycles per sample and wrapped to
/// (-n/2, n/2], between a length-n chirp and its cyclically delayed,
/// Doppler-shifted copy. Measured at the first window that starts at or
/// after the delay, using the per-window spectral peak with parabolic
/// interpolation. Expected value: doppler - 2*n*rate*delay (mod n).
///
/// Throws ResolutionError when the expected shift is non-zero but smaller
/// than one spectrogram bin (n / fft_len), and std::invalid_argument when
/// window_len > n/4.
double measure_start_frequency_shift(double chirp_rate, std::size_t delay, double doppler,
                                     std::size_t n, const SpectrogramSpec& spec);

/// doppler - 2*n*rate*delay wrapped to (-n/2, n/2].
double predicted_start_frequency_shift(double chirp_rate, std::size_t delay, double doppler,
                                       std::size_t n);

struct SparsityMetrics {
    double significant_fraction = 0.0;
    bool per_path_separation = false;
    double max_offdiag_leakage = 0.0;
};

/// Significant entries are those above rel_threshold * max|entry|.
/// Separation holds when every source path is on the integer grid, the paths
/// predict pairwise distinct diagonals, and the significant entries lie on
/// exactly those diagonals. Leakage is the largest magnitude anywhere off the
/// predicted diagonals, relative to the largest entry.
SparsityMetrics sparsity_metrics(const EffectiveChannel& h, double rel_threshold);

struct RangeDopplerMap {
    std::size_t l_max = 0;
    std::size_t alpha_max = 0;
    /// (l_max + 1) x (2*alpha_max + 1); column c is Doppler c - alpha_max.
    Eigen::MatrixXd metric;

    double at(std::size_t delay, long long doppler) const;
    /// (delay, doppler) of the largest cell; first in row-major order on ties.
    std::pair<std::size_t, long long> argmax() const;
};

/// metric(l, a) = |sum_m rx[m] conj(tx[(m - l) mod n]) exp(-i*2*pi*a*m/n)|^2.
RangeDopplerMap range_doppler_map(std::span<const Complex> tx, std::span<const Complex> rx,
                                  const WaveformParams& p, std::size_t l_max,
                                  std::size_t alpha_max);

}  // namespace afl
