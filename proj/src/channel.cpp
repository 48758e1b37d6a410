#include "afl/channel.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace afl {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

void check_delays(const ChannelModel& ch, const WaveformParams& p) {
    if (ch.max_delay() > p.cpp_len)
        throw std::invalid_argument("channel: path delay " + std::to_string(ch.max_delay()) +
                                    " exceeds cpp_len " + std::to_string(p.cpp_len));
}

}  // namespace

bool PathSpec::on_integer_grid() const { return doppler == std::round(doppler); }

long long PathSpec::integer_doppler() const { return std::llround(doppler); }

void ChannelModel::validate() const {
    if (paths.empty()) throw std::invalid_argument("channel: path list is empty");
    if (!(noise_variance >= 0.0) || !std::isfinite(noise_variance))
        throw std::invalid_argument("channel: noise variance must be finite and >= 0");
    std::set<std::pair<std::size_t, double>> seen;
    for (const auto& path : paths) {
        if (!(std::abs(path.gain) > 0.0) || !std::isfinite(std::abs(path.gain)))
            throw std::invalid_argument("channel: path gain must be finite and non-zero");
        if (!std::isfinite(path.doppler))
            throw std::invalid_argument("channel: path Doppler must be finite");
        if (!seen.emplace(path.delay, path.doppler).second)
            throw std::invalid_argument("channel: duplicate (delay, doppler) pair");
    }
}

std::size_t ChannelModel::max_delay() const {
    std::size_t m = 0;
    for (const auto& path : paths) m = std::max(m, path.delay);
    return m;
}

double ChannelModel::max_abs_doppler() const {
    double m = 0.0;
    for (const auto& path : paths) m = std::max(m, std::abs(path.doppler));
    return m;
}

ChannelModel ChannelModel::identity() { return ChannelModel{{PathSpec{}}, 0.0}; }

ChannelModel normalized(ChannelModel ch) {
    double energy = 0.0;
    for (const auto& path : ch.paths) energy += std::norm(path.gain);
    if (energy > 0.0) {
        const double scale = 1.0 / std::sqrt(energy);
        for (auto& path : ch.paths) path.gain *= scale;
    }
    return ch;
}

ComplexVector complex_awgn(std::size_t count, double variance, std::uint64_t seed) {
    if (!(variance >= 0.0)) throw std::invalid_argument("complex_awgn: variance must be >= 0");
    ComplexVector w(count, Complex{});
    if (variance == 0.0) return w;
    std::mt19937_64 rng(mix_seed(seed));
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    for (auto& v : w) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = {re, im};
    }
    return w;
}

ComplexVector apply_channel(std::span<const Complex> s, const ChannelModel& ch,
                            const WaveformParams& p, std::uint64_t noise_seed) {
    p.validate();
    ch.validate();
    check_delays(ch, p);
    const auto total = p.n + p.cpp_len;
    if (s.size() != total)
        throw std::invalid_argument("apply_channel: expected length " + std::to_string(total));

    const double n = static_cast<double>(p.n);
    const auto L = static_cast<long long>(p.cpp_len);
    ComplexVector r = complex_awgn(total, ch.noise_variance, noise_seed);
    for (const auto& path : ch.paths) {
        for (std::size_t m = path.delay; m < total; ++m) {
            const double t = static_cast<double>(static_cast<long long>(m) - L);
            r[m] += path.gain * unit_phasor(path.doppler * t / n) * s[m - path.delay];
        }
    }
    return r;
}

ComplexMatrix time_channel_matrix(const ChannelModel& ch, const WaveformParams& p) {
    p.validate();
    ch.validate();
    check_delays(ch, p);
    const auto n = static_cast<long long>(p.n);
    ComplexMatrix h = ComplexMatrix::Zero(n, n);
    for (const auto& path : ch.paths) {
        const auto l = static_cast<long long>(path.delay);
        for (long long k = 0; k < n; ++k) {
            Complex v = path.gain * unit_phasor(path.doppler * static_cast<double>(k) /
                                                static_cast<double>(n));
            const long long t = k - l;
            if (t < 0 && p.c1 != 0.0)
                v *= unit_phasor(-p.c1 * static_cast<double>(n * n + 2 * n * t));
            h(k, (t + n) % n) += v;
        }
    }
    return h;
}

double normalized_doppler(double speed_mps, double carrier_hz, double subcarrier_spacing_hz) {
    if (!(speed_mps >= 0.0) || !(carrier_hz > 0.0) || !(subcarrier_spacing_hz > 0.0))
        throw std::invalid_argument(
            "normalized_doppler: speed must be >= 0, carrier and spacing > 0");
    return speed_mps * carrier_hz / kSpeedOfLight / subcarrier_spacing_hz;
}

}  // namespace afl
