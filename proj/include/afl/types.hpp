#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace afl {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// exp(i*2*pi*cycles), with the integer part of `cycles` discarded first so
/// large quadratic exponents keep full phase precision.
Complex unit_phasor(double cycles);

/// splitmix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace afl
