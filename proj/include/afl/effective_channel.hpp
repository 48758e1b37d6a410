// effective_channel.hpp - affine-frequency-domain channel matrix and the
// displacement bookkeeping that makes it sparse.
//
// A path with integer delay l and integer Doppler alpha maps symbol q onto
// symbol (q + alpha - 2*n*c1*l) mod n, so it occupies a single circular
// off-diagonal (row - col mod n) of the effective matrix.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "afl/channel.hpp"
#include "afl/waveform.hpp"

namespace afl {

struct EffectiveChannel {
    ComplexMatrix matrix;
    WaveformParams params;
    /// Empty when the matrix was supplied directly rather than built from a
    /// path model.
    std::optional<ChannelModel> source;

    /// Predicted circular diagonals (row - col mod n) of the source paths,
    /// rounding fractional Dopplers and shears to the nearest bin. {0} when
    /// there is no source.
    std::vector<std::size_t> predicted_diagonals() const;
};

/// matrix = A * H_t * A^H.
EffectiveChannel build_effective_channel(const ChannelModel& ch, const WaveformParams& p);

/// Same, reusing a precomputed daft_matrix(p).
EffectiveChannel build_effective_channel(const ChannelModel& ch, const WaveformParams& p,
                                         const ComplexMatrix& daft_mat);

/// Wraps a raw n x n matrix (no path model).
EffectiveChannel effective_channel_from_matrix(ComplexMatrix matrix, const WaveformParams& p);

/// Circular diagonal index (alpha - 2*n*c1*l) mod n. Throws UnsupportedRegime
/// unless 2*n*c1 is an integer.
std::size_t path_displacement(long long delay, long long alpha, const WaveformParams& p);

/// Smallest c1 separating all paths on the (delay, Doppler) grid:
/// (2*alpha_max + 1) / (2n). Requires alpha_max < n/4.
double min_c1_full_diversity(std::size_t alpha_max, std::size_t n);

/// True when every integer path with delay 0..l_max and Doppler in
/// [-alpha_max, alpha_max] gets its own diagonal under the minimum c1:
/// (l_max + 1) * (2*alpha_max + 1) <= n.
bool diversity_region_fits(std::size_t l_max, std::size_t alpha_max, std::size_t n);

}  // namespace afl
