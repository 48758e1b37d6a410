#pragma once

#include <span>

#include "afl/effective_channel.hpp"

namespace afl {

enum class EqualizerKind { ZF, MMSE, BANDED_MMSE, MATCHED_FILTER };

const char* to_string(EqualizerKind kind);
EqualizerKind equalizer_kind_from_string(std::string_view name);

struct EqualizerSpec {
    EqualizerKind kind = EqualizerKind::MMSE;
    /// Circular half-width around each predicted displacement diagonal
    /// (BANDED_MMSE only).
    std::size_t band_halfwidth = 0;
};

struct EqualizationResult {
    ComplexVector symbols;
    /// BANDED_MMSE only: the band dropped at least one entry larger than 1%
    /// of the largest matrix entry.
    bool band_warning = false;
};

/// Keeps entries whose diagonal (row - col mod n) lies within
/// `band_halfwidth` (circularly) of one of the predicted diagonals.
ComplexMatrix band_mask(const EffectiveChannel& h, std::size_t band_halfwidth,
                        bool* dropped_significant = nullptr);

/// ZF: H^-1 y. MMSE: H^H (H H^H + sigma2 I)^-1 y. MATCHED_FILTER: H^H y.
/// BANDED_MMSE: MMSE on the banded matrix. Throws IllConditioned when ZF
/// (or MMSE at sigma2 = 0) meets a numerically singular matrix.
EqualizationResult equalize(std::span<const Complex> y, const EffectiveChannel& h, double sigma2,
                            const EqualizerSpec& eq);

}  // namespace afl
