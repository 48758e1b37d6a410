#pragma once

#include <span>

#include "afl/channel.hpp"
#include "afl/waveform.hpp"

namespace afl {

struct PilotEstimatorSpec {
    std::size_t l_max = 0;
    std::size_t alpha_max = 0;
    /// Detection threshold relative to the strongest sample in the pilot
    /// window.
    double threshold = 0.2;
    Complex pilot_amplitude{1.0, 0.0};
};

/// Guard width per side needed so data cannot leak into the pilot window:
/// (l_max + 1) * (2*alpha_max + 1) - 1 under the minimum full-diversity c1.
std::size_t required_pilot_guard(std::size_t l_max, std::size_t alpha_max);

/// Single-pilot, integer-grid estimator. The pilot sits at index 0; each
/// (delay, Doppler) hypothesis maps to one received index via
/// path_displacement, and the path gain is the received value divided by the
/// unit-gain effective-channel entry for that hypothesis.
///
/// Throws ConfigurationError when two hypotheses share a received index or a
/// data index can leak into the pilot window, EmptyChannel when nothing
/// crosses the threshold, UnsupportedRegime when 2*n*c1 is not an integer.
ChannelModel estimate_channel_single_pilot(std::span<const Complex> y, const FrameLayout& layout,
                                           const WaveformParams& p,
                                           const PilotEstimatorSpec& spec);

}  // namespace afl
