#include "afl/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "afl/errors.hpp"
#include "fft.hpp"

namespace afl {

namespace {

double wrap_half(double v, double n) {
    double w = std::fmod(v, n);
    if (w > n / 2.0) w -= n;
    if (w <= -n / 2.0) w += n;
    return w;
}

// Hann-windowed segment starting at `start`, zero padded to fft_len.
ComplexVector windowed_spectrum(std::span<const Complex> x, std::size_t start,
                                const SpectrogramSpec& spec) {
    ComplexVector seg(spec.window_len);
    const double w = static_cast<double>(spec.window_len);
    for (std::size_t j = 0; j < spec.window_len; ++j) {
        const double s = std::sin(kPi * (static_cast<double>(j) + 0.5) / w);
        seg[j] = x[start + j] * s * s;
    }
    return detail::raw_fft(seg, spec.fft_len);
}

// Peak bin of one window, refined by a parabola through the peak and its two
// (circular) neighbours.
double peak_bin(std::span<const Complex> x, std::size_t start, const SpectrogramSpec& spec) {
    const auto spectrum = windowed_spectrum(x, start, spec);
    std::size_t best = 0;
    for (std::size_t k = 1; k < spectrum.size(); ++k)
        if (std::norm(spectrum[k]) > std::norm(spectrum[best])) best = k;
    const auto m = spec.fft_len;
    const double a = std::abs(spectrum[(best + m - 1) % m]);
    const double b = std::abs(spectrum[best]);
    const double c = std::abs(spectrum[(best + 1) % m]);
    const double denom = a - 2.0 * b + c;
    const double delta = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    return static_cast<double>(best) + delta;
}

}  // namespace

void SpectrogramSpec::validate() const {
    if (window_len == 0 || hop == 0 || fft_len == 0)
        throw std::invalid_argument("spectrogram: lengths must be positive");
    if (hop > window_len) throw std::invalid_argument("spectrogram: hop must be <= window_len");
    if (fft_len < window_len)
        throw std::invalid_argument("spectrogram: fft_len must be >= window_len");
}

Eigen::MatrixXd spectrogram(std::span<const Complex> x, const SpectrogramSpec& spec) {
    spec.validate();
    if (x.size() < spec.window_len)
        throw std::invalid_argument("spectrogram: signal shorter than one window");
    const std::size_t frames = (x.size() - spec.window_len) / spec.hop + 1;
    Eigen::MatrixXd out(frames, spec.fft_len);
    for (std::size_t f = 0; f < frames; ++f) {
        const auto spectrum = windowed_spectrum(x, f * spec.hop, spec);
        for (std::size_t k = 0; k < spec.fft_len; ++k) out(f, k) = std::norm(spectrum[k]);
    }
    return out;
}

ComplexVector linear_chirp(std::size_t n, double rate) {
    ComplexVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        x[k] = unit_phasor(rate * kk);
    }
    return x;
}

double predicted_start_frequency_shift(double chirp_rate, std::size_t delay, double doppler,
                                       std::size_t n) {
    const double nn = static_cast<double>(n);
    return wrap_half(doppler - 2.0 * nn * chirp_rate * static_cast<double>(delay), nn);
}

double measure_start_frequency_shift(double chirp_rate, std::size_t delay, double doppler,
                                     std::size_t n, const SpectrogramSpec& spec) {
    spec.validate();
    if (!(chirp_rate >= 0.0) || !std::isfinite(chirp_rate) || !std::isfinite(doppler))
        throw std::invalid_argument("shift: chirp rate must be finite and >= 0");
    if (4 * spec.window_len > n) throw std::invalid_argument("shift: window_len must be <= n/4");
    if (delay >= n) throw std::invalid_argument("shift: delay must be < n");

    const double nn = static_cast<double>(n);
    const double bin = nn / static_cast<double>(spec.fft_len);
    const double expected = predicted_start_frequency_shift(chirp_rate, delay, doppler, n);
    if (expected != 0.0 && std::abs(expected) < bin) {
        const auto required = static_cast<std::size_t>(std::ceil(nn / std::abs(expected)));
        throw ResolutionError("shift: expected shift " + std::to_string(expected) +
                                  " is below one spectrogram bin; need fft_len >= " +
                                  std::to_string(required),
                              required);
    }

    const auto original = linear_chirp(n, chirp_rate);
    ComplexVector perturbed(n);
    for (std::size_t k = 0; k < n; ++k)
        perturbed[k] = unit_phasor(doppler * static_cast<double>(k) / nn) *
                       original[(k + n - delay) % n];

    const std::size_t start = (delay + spec.hop - 1) / spec.hop * spec.hop;
    if (start + spec.window_len > n) throw std::invalid_argument("shift: no valid window");
    const double moved = peak_bin(perturbed, start, spec) - peak_bin(original, start, spec);
    return wrap_half(moved * bin, nn);
}

SparsityMetrics sparsity_metrics(const EffectiveChannel& h, double rel_threshold) {
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
        throw std::invalid_argument("sparsity: rel_threshold must lie in (0, 1)");
    const auto n = static_cast<long long>(h.params.n);
    const double peak = h.matrix.cwiseAbs().maxCoeff();
    const auto predicted = h.predicted_diagonals();
    const std::set<std::size_t> predicted_set(predicted.begin(), predicted.end());

    SparsityMetrics out;
    if (!(peak > 0.0)) return out;
    std::set<std::size_t> occupied;
    std::size_t significant = 0;
    double leak = 0.0;
    for (long long r = 0; r < n; ++r) {
        for (long long c = 0; c < n; ++c) {
            const double mag = std::abs(h.matrix(r, c));
            const auto diag = static_cast<std::size_t>(((r - c) % n + n) % n);
            if (mag > rel_threshold * peak) {
                ++significant;
                occupied.insert(diag);
            }
            if (!predicted_set.count(diag)) leak = std::max(leak, mag);
        }
    }
    out.significant_fraction = static_cast<double>(significant) / static_cast<double>(n * n);
    out.max_offdiag_leakage = leak / peak;

    // A delayed path lands on an exact diagonal only when the shear is integer.
    const bool integer_shear = std::abs(h.params.shear() - std::round(h.params.shear())) < 1e-9;
    bool grid = h.source.has_value();
    if (grid)
        for (const auto& path : h.source->paths)
            grid = grid && path.on_integer_grid() && (path.delay == 0 || integer_shear);
    out.per_path_separation =
        grid && predicted_set.size() == predicted.size() && occupied == predicted_set;
    return out;
}

double RangeDopplerMap::at(std::size_t delay, long long doppler) const {
    return metric(static_cast<Eigen::Index>(delay),
                  static_cast<Eigen::Index>(doppler + static_cast<long long>(alpha_max)));
}

std::pair<std::size_t, long long> RangeDopplerMap::argmax() const {
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < metric.rows(); ++i)
        for (Eigen::Index j = 0; j < metric.cols(); ++j)
            if (metric(i, j) > metric(r, c)) {
                r = i;
                c = j;
            }
    return {static_cast<std::size_t>(r),
            static_cast<long long>(c) - static_cast<long long>(alpha_max)};
}

RangeDopplerMap range_doppler_map(std::span<const Complex> tx, std::span<const Complex> rx,
                                  const WaveformParams& p, std::size_t l_max,
                                  std::size_t alpha_max) {
    p.validate();
    const auto n = p.n;
    if (tx.size() != n || rx.size() != n)
        throw std::invalid_argument("range_doppler_map: tx and rx must have length n");
    if (2 * l_max > n || 2 * alpha_max > n)
        throw std::invalid_argument("range_doppler_map: bounds exceed n/2");

    RangeDopplerMap map{l_max, alpha_max, Eigen::MatrixXd::Zero(l_max + 1, 2 * alpha_max + 1)};
    ComplexVector z(n);
    for (std::size_t l = 0; l <= l_max; ++l) {
        for (std::size_t m = 0; m < n; ++m) z[m] = rx[m] * std::conj(tx[(m + n - l) % n]);
        const auto spectrum = detail::raw_fft(z, n);
        for (std::size_t c = 0; c < 2 * alpha_max + 1; ++c) {
            const long long a = static_cast<long long>(c) - static_cast<long long>(alpha_max);
            const auto bin = static_cast<std::size_t>((a % static_cast<long long>(n) +
                                                       static_cast<long long>(n)) %
                                                      static_cast<long long>(n));
            map.metric(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(c)) =
                std::norm(spectrum[bin]);
        }
    }
    return map;
}

}  // namespace afl
