#pragma once

#include <span>

#include "afl/types.hpp"

namespace afl::detail {

/// Unitary DFT: out[m] = n^{-1/2} * sum_k in[k] exp(-i*2*pi*m*k/n).
ComplexVector unitary_fft(std::span<const Complex> in);

/// Unitary inverse DFT.
ComplexVector unitary_ifft(std::span<const Complex> in);

/// Unnormalized DFT with the given output length (input zero padded).
ComplexVector raw_fft(std::span<const Complex> in, std::size_t nfft);

}  // namespace afl::detail
