// Test-only reference constructions. Everything here is built directly from
// the defining formulas (dense matrices, sample-by-sample loops, long double
// phases) and never calls the FFT-based library paths it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "afl/channel.hpp"
#include "afl/types.hpp"

namespace oracle {

using afl::Complex;
using afl::ComplexMatrix;
using afl::ComplexVector;

inline Complex phasor(long double cycles) {
    const long double frac = cycles - std::floor(cycles);
    const long double ang = 2.0L * 3.14159265358979323846264338327950288L * frac;
    return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

inline ComplexMatrix dft(std::size_t n) {
    ComplexMatrix f(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k)
            f(m, k) = scale * phasor(-static_cast<long double>((m * k) % n) / n);
    return f;
}

inline ComplexMatrix chirp_diag(std::size_t n, long double c) {
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = phasor(-c * static_cast<long double>(k * k));
    return d;
}

/// Lambda(c2) * F * Lambda(c1).
inline ComplexMatrix transform(std::size_t n, long double c1, long double c2) {
    return chirp_diag(n, c2) * dft(n) * chirp_diag(n, c1);
}

inline Eigen::VectorXcd to_eigen(const ComplexVector& v) {
    return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline ComplexVector from_eigen(const Eigen::VectorXcd& v) { return {v.begin(), v.end()}; }

/// Sample-by-sample transmit chain: chirp-periodic extension of s, then the
/// multipath sum, evaluated only on the payload (noiseless).
inline ComplexVector circular_channel(const ComplexVector& s, const afl::ChannelModel& ch,
                                      std::size_t n, long double c1) {
    ComplexVector r(n, Complex{});
    const long long nn = static_cast<long long>(n);
    for (const auto& path : ch.paths) {
        for (long long m = 0; m < nn; ++m) {
            const long long t = m - static_cast<long long>(path.delay);
            Complex v = t >= 0 ? s[t] : s[t + nn] * phasor(-c1 * static_cast<long double>(nn * nn + 2 * nn * t));
            r[m] += path.gain * phasor(static_cast<long double>(path.doppler) * m / nn) * v;
        }
    }
    return r;
}

inline ComplexVector random_vector(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexVector v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

inline double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double norm2(const ComplexVector& a) {
    double s = 0.0;
    for (const auto& x : a) s += std::norm(x);
    return std::sqrt(s);
}

/// Q-function.
inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace oracle
