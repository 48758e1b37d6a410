#include "afl/effective_channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afl/errors.hpp"

namespace afl {

namespace {

long long wrap(long long v, long long n) { return ((v % n) + n) % n; }

}  // namespace

std::vector<std::size_t> EffectiveChannel::predicted_diagonals() const {
    if (!source) return {0};
    const auto n = static_cast<long long>(params.n);
    std::vector<std::size_t> out;
    out.reserve(source->paths.size());
    for (const auto& path : source->paths) {
        const double d = path.doppler - params.shear() * static_cast<double>(path.delay);
        out.push_back(static_cast<std::size_t>(wrap(std::llround(d), n)));
    }
    return out;
}

EffectiveChannel build_effective_channel(const ChannelModel& ch, const WaveformParams& p) {
    return build_effective_channel(ch, p, daft_matrix(p));
}

EffectiveChannel build_effective_channel(const ChannelModel& ch, const WaveformParams& p,
                                         const ComplexMatrix& daft_mat) {
    const ComplexMatrix ht = time_channel_matrix(ch, p);
    if (daft_mat.rows() != ht.rows() || daft_mat.cols() != ht.cols())
        throw std::invalid_argument("build_effective_channel: transform matrix size mismatch");
    return EffectiveChannel{daft_mat * ht * daft_mat.adjoint(), p, ch};
}

EffectiveChannel effective_channel_from_matrix(ComplexMatrix matrix, const WaveformParams& p) {
    p.validate();
    if (matrix.rows() != static_cast<Eigen::Index>(p.n) || matrix.cols() != matrix.rows())
        throw std::invalid_argument("effective channel: matrix must be n x n");
    return EffectiveChannel{std::move(matrix), p, std::nullopt};
}

std::size_t path_displacement(long long delay, long long alpha, const WaveformParams& p) {
    p.validate();
    const double shear = p.shear();
    const double k = std::round(shear);
    if (std::abs(shear - k) > 1e-9)
        throw UnsupportedRegime("path_displacement: 2*n*c1 is not an integer");
    const auto n = static_cast<long long>(p.n);
    return static_cast<std::size_t>(wrap(alpha - static_cast<long long>(k) * delay, n));
}

double min_c1_full_diversity(std::size_t alpha_max, std::size_t n) {
    if (n == 0) throw std::invalid_argument("min_c1_full_diversity: n must be positive");
    if (4 * alpha_max >= n)
        throw std::invalid_argument("min_c1_full_diversity: alpha_max must be < n/4");
    return static_cast<double>(2 * alpha_max + 1) / (2.0 * static_cast<double>(n));
}

bool diversity_region_fits(std::size_t l_max, std::size_t alpha_max, std::size_t n) {
    return (l_max + 1) * (2 * alpha_max + 1) <= n;
}

}  // namespace afl
