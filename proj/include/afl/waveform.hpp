// waveform.hpp - chirp multicarrier transform pair and chirp-periodic prefix
//
// The discrete affine Fourier transform (DAFT) used here is
//
//     A = Lambda(c2) * F * Lambda(c1),   Lambda(c) = diag(exp(-i*2*pi*c*k^2))
//
// with F the unitary DFT. The transmitter applies A^H (IDAFT), i.e. a c2
// chirp multiply, an inverse FFT, then a c1 chirp multiply, so c1 shapes the
// time-domain chirp subcarriers and c2 only rotates symbol phases.
//
// (c1, c2) = (0, 0) is plain OFDM, (1/2n, 1/2n) is OCDM, everything else AFDM.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "afl/types.hpp"

namespace afl {

enum class WaveformMode { OFDM, OCDM, AFDM };

const char* to_string(WaveformMode mode);

struct WaveformParams {
    std::size_t n = 0;
    double c1 = 0.0;
    double c2 = 0.0;
    std::size_t cpp_len = 0;

    /// Throws std::invalid_argument on n < 2, cpp_len >= n, negative or
    /// non-finite chirp rates.
    void validate() const;

    WaveformMode mode() const;

    /// 2*n*c1, the per-unit-delay shift (in affine-frequency bins) of a
    /// chirp subcarrier.
    double shear() const { return 2.0 * static_cast<double>(n) * c1; }
};

/// Index partition of an n-symbol affine-frequency frame.
struct FrameLayout {
    std::vector<std::size_t> pilot;
    std::vector<std::size_t> guard;
    std::vector<std::size_t> data;

    /// All indices carry data.
    static FrameLayout all_data(std::size_t n);

    /// One pilot at index 0 with `guard` zero symbols on each side (cyclic).
    static FrameLayout single_pilot(std::size_t n, std::size_t guard);

    /// Checks the partition is disjoint and exhaustive over 0..n-1 and that
    /// there is at most one pilot.
    void validate(std::size_t n) const;
};

struct Frame {
    ComplexVector symbols;
    FrameLayout layout;
};

/// Places `data` on the layout's data indices (in order), `pilot_amplitude`
/// on the pilot and zeros on guards.
Frame assemble_frame(const FrameLayout& layout, std::span<const Complex> data,
                     Complex pilot_amplitude = {1.0, 0.0});

/// Picks the data-index entries out of a length-n vector.
ComplexVector extract_data(const FrameLayout& layout, std::span<const Complex> symbols);

/// lambda[k] = exp(-i*2*pi*c*k^2), k = 0..n-1.
ComplexVector chirp_phase_vector(std::size_t n, double c);

/// Forward transform (receiver side): A * x.
ComplexVector daft(std::span<const Complex> x, const WaveformParams& p);

/// Inverse transform (transmitter side): A^H * X.
ComplexVector idaft(std::span<const Complex> X, const WaveformParams& p);

/// Dense n x n matrix A; column j is daft(e_j).
ComplexMatrix daft_matrix(const WaveformParams& p);

/// Prepends the chirp-periodic prefix. Prefix sample at time index
/// t = -L..-1 is s[n + t] * exp(-i*2*pi*c1*(n^2 + 2*n*t)); for c1 = 0 this is
/// a plain cyclic prefix.
ComplexVector add_cpp(std::span<const Complex> s, const WaveformParams& p);

/// Drops the first cpp_len samples.
ComplexVector strip_cpp(std::span<const Complex> r, const WaveformParams& p);

}  // namespace afl
