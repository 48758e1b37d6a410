// channel.hpp - discrete doubly dispersive multipath channel
//
// Each path delays the signal by an integer number of samples and applies a
// Doppler rotation of `doppler` cycles per n-sample payload, referenced to
// the first payload sample:
//
//     r[m] = sum_p gain_p * exp(i*2*pi*f_p*(m - L)/n) * s[m - l_p] + w[m]

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "afl/types.hpp"
#include "afl/waveform.hpp"

namespace afl {

struct PathSpec {
    Complex gain{1.0, 0.0};
    std::size_t delay = 0;
    double doppler = 0.0;

    /// True when the Doppler is an integer number of cycles per frame.
    bool on_integer_grid() const;
    /// Nearest integer Doppler.
    long long integer_doppler() const;
};

struct ChannelModel {
    std::vector<PathSpec> paths;
    double noise_variance = 0.0;

    /// Non-empty, non-zero gains, finite Dopplers, distinct (delay, doppler)
    /// pairs, sigma^2 >= 0. Throws std::invalid_argument.
    void validate() const;

    std::size_t max_delay() const;
    double max_abs_doppler() const;

    /// Single unit-gain path with no delay or Doppler.
    static ChannelModel identity();
};

/// Rescales gains so that sum |gain|^2 = 1.
ChannelModel normalized(ChannelModel ch);

/// Circularly symmetric complex Gaussian samples with the given variance.
/// Deterministic in `seed`.
ComplexVector complex_awgn(std::size_t count, double variance, std::uint64_t seed);

/// Passes a prefixed frame (length n + cpp_len) through the channel and
/// adds noise drawn from `noise_seed`. Samples before the frame start are
/// taken as zero.
ComplexVector apply_channel(std::span<const Complex> s, const ChannelModel& ch,
                            const WaveformParams& p, std::uint64_t noise_seed);

/// n x n matrix H_t with strip_cpp(apply_channel(add_cpp(s))) = H_t * s in
/// the noiseless case.
ComplexMatrix time_channel_matrix(const ChannelModel& ch, const WaveformParams& p);

/// Doppler shift (speed * carrier / c) as a fraction of the subcarrier spacing.
double normalized_doppler(double speed_mps, double carrier_hz, double subcarrier_spacing_hz);

}  // namespace afl
