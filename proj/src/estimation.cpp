#include "afl/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "afl/effective_channel.hpp"
#include "afl/errors.hpp"

namespace afl {

namespace {

struct Hypothesis {
    std::size_t delay;
    long long alpha;
};

// Effective-channel entry (row, 0) for a unit-gain path.
Complex probe_entry(const Hypothesis& h, std::size_t row, const WaveformParams& p) {
    const ChannelModel probe{{PathSpec{{1.0, 0.0}, h.delay, static_cast<double>(h.alpha)}}, 0.0};
    ComplexVector e0(p.n, Complex{});
    e0[0] = 1.0;
    const auto s = idaft(e0, p);
    const ComplexMatrix ht = time_channel_matrix(probe, p);
    const Eigen::VectorXcd r =
        ht * Eigen::Map<const Eigen::VectorXcd>(s.data(), static_cast<Eigen::Index>(p.n));
    const auto col = daft(ComplexVector(r.begin(), r.end()), p);
    return col[row];
}

}  // namespace

std::size_t required_pilot_guard(std::size_t l_max, std::size_t alpha_max) {
    return (l_max + 1) * (2 * alpha_max + 1) - 1;
}

ChannelModel estimate_channel_single_pilot(std::span<const Complex> y, const FrameLayout& layout,
                                           const WaveformParams& p,
                                           const PilotEstimatorSpec& spec) {
    p.validate();
    if (y.size() != p.n) throw std::invalid_argument("estimate: expected length n");
    layout.validate(p.n);
    if (layout.pilot.size() != 1 || layout.pilot[0] != 0)
        throw std::invalid_argument("estimate: layout must carry one pilot at index 0");
    if (!(spec.threshold > 0.0 && spec.threshold < 1.0))
        throw std::invalid_argument("estimate: threshold must lie in (0, 1)");
    if (spec.l_max > p.cpp_len) throw std::invalid_argument("estimate: l_max exceeds cpp_len");
    if (std::abs(spec.pilot_amplitude) == 0.0)
        throw std::invalid_argument("estimate: pilot amplitude must be non-zero");

    const auto n = static_cast<long long>(p.n);
    const auto alpha_max = static_cast<long long>(spec.alpha_max);
    std::map<std::size_t, Hypothesis> lookup;
    for (std::size_t l = 0; l <= spec.l_max; ++l) {
        for (long long a = -alpha_max; a <= alpha_max; ++a) {
            const auto row = path_displacement(static_cast<long long>(l), a, p);
            if (!lookup.emplace(row, Hypothesis{l, a}).second)
                throw ConfigurationError("estimate: two (delay, Doppler) hypotheses share index " +
                                         std::to_string(row) + "; c1 is below full diversity");
        }
    }

    // A data symbol at q lands on q + (pilot window); it must miss the window.
    std::vector<char> window(p.n, 0);
    for (const auto& [row, h] : lookup) window[row] = 1;
    for (auto q : layout.data) {
        for (const auto& [row, h] : lookup) {
            if (window[static_cast<std::size_t>((static_cast<long long>(q + row)) % n)])
                throw ConfigurationError("estimate: guard too narrow, data index " +
                                         std::to_string(q) + " leaks into the pilot window");
        }
    }

    double peak = 0.0;
    for (const auto& [row, h] : lookup) peak = std::max(peak, std::abs(y[row]));
    if (!(peak > 0.0)) throw EmptyChannel("estimate: no energy in the pilot window");

    ChannelModel est;
    for (const auto& [row, h] : lookup) {
        if (std::abs(y[row]) <= spec.threshold * peak) continue;
        const Complex ref = spec.pilot_amplitude * probe_entry(h, row, p);
        est.paths.push_back(PathSpec{y[row] / ref, h.delay, static_cast<double>(h.alpha)});
    }
    if (est.paths.empty()) throw EmptyChannel("estimate: no path above threshold");
    std::sort(est.paths.begin(), est.paths.end(), [](const PathSpec& a, const PathSpec& b) {
        return std::pair(a.delay, a.doppler) < std::pair(b.delay, b.doppler);
    });
    return est;
}

}  // namespace afl
