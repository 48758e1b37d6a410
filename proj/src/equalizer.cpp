#include "afl/equalizer.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "afl/errors.hpp"

namespace afl {

namespace {

constexpr double kMinRcond = 1e-13;

Eigen::VectorXcd to_eigen(std::span<const Complex> y) {
    return Eigen::Map<const Eigen::VectorXcd>(y.data(), static_cast<Eigen::Index>(y.size()));
}

ComplexVector from_eigen(const Eigen::VectorXcd& v) { return ComplexVector(v.begin(), v.end()); }

Eigen::VectorXcd solve_checked(const ComplexMatrix& m, const Eigen::VectorXcd& rhs,
                               const char* what) {
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    // rcond() alone misses exact zero pivots, so also bound the pivot spread.
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double spread = pivots.minCoeff() / pivots.maxCoeff();
    Eigen::VectorXcd x;
    if (spread > kMinRcond && lu.rcond() > kMinRcond) x = lu.solve(rhs);
    if (x.size() == 0 || !x.allFinite())
        throw IllConditioned(std::string(what) + ": matrix is numerically singular");
    return x;
}

Eigen::VectorXcd mmse(const ComplexMatrix& h, const Eigen::VectorXcd& y, double sigma2) {
    ComplexMatrix gram = h * h.adjoint();
    gram.diagonal().array() += sigma2;
    if (sigma2 > 0.0) {
        Eigen::LLT<ComplexMatrix> llt(gram);
        if (llt.info() == Eigen::Success) return h.adjoint() * llt.solve(y);
    }
    return h.adjoint() * solve_checked(gram, y, "MMSE");
}

}  // namespace

const char* to_string(EqualizerKind kind) {
    switch (kind) {
    case EqualizerKind::ZF: return "ZF";
    case EqualizerKind::MMSE: return "MMSE";
    case EqualizerKind::BANDED_MMSE: return "BANDED_MMSE";
    case EqualizerKind::MATCHED_FILTER: return "MATCHED_FILTER";
    }
    return "?";
}

EqualizerKind equalizer_kind_from_string(std::string_view name) {
    if (name == "ZF") return EqualizerKind::ZF;
    if (name == "MMSE") return EqualizerKind::MMSE;
    if (name == "BANDED_MMSE") return EqualizerKind::BANDED_MMSE;
    if (name == "MATCHED_FILTER") return EqualizerKind::MATCHED_FILTER;
    throw std::invalid_argument("unknown equalizer '" + std::string(name) + "'");
}

ComplexMatrix band_mask(const EffectiveChannel& h, std::size_t band_halfwidth,
                        bool* dropped_significant) {
    const auto n = static_cast<long long>(h.params.n);
    if (band_halfwidth >= h.params.n)
        throw std::invalid_argument("band_halfwidth must be < n");
    const auto centers = h.predicted_diagonals();
    std::vector<char> keep(static_cast<std::size_t>(n), 0);
    for (auto c : centers) {
        for (long long off = -static_cast<long long>(band_halfwidth);
             off <= static_cast<long long>(band_halfwidth); ++off)
            keep[static_cast<std::size_t>(((static_cast<long long>(c) + off) % n + n) % n)] = 1;
    }
    const double significant = 0.01 * h.matrix.cwiseAbs().maxCoeff();
    bool dropped = false;
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (long long r = 0; r < n; ++r) {
        for (long long c = 0; c < n; ++c) {
            if (keep[static_cast<std::size_t>(((r - c) % n + n) % n)]) {
                out(r, c) = h.matrix(r, c);
            } else if (std::abs(h.matrix(r, c)) > significant) {
                dropped = true;
            }
        }
    }
    if (dropped_significant) *dropped_significant = dropped;
    return out;
}

EqualizationResult equalize(std::span<const Complex> y, const EffectiveChannel& h, double sigma2,
                            const EqualizerSpec& eq) {
    if (y.size() != h.params.n || h.matrix.rows() != static_cast<Eigen::Index>(y.size()))
        throw std::invalid_argument("equalize: length mismatch");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("equalize: sigma2 must be finite and >= 0");
    const auto rhs = to_eigen(y);
    EqualizationResult result;
    switch (eq.kind) {
    case EqualizerKind::ZF:
        result.symbols = from_eigen(solve_checked(h.matrix, rhs, "ZF"));
        break;
    case EqualizerKind::MMSE:
        result.symbols = from_eigen(mmse(h.matrix, rhs, sigma2));
        break;
    case EqualizerKind::MATCHED_FILTER:
        result.symbols = from_eigen(h.matrix.adjoint() * rhs);
        break;
    case EqualizerKind::BANDED_MMSE: {
        const auto banded = band_mask(h, eq.band_halfwidth, &result.band_warning);
        result.symbols = from_eigen(mmse(banded, rhs, sigma2));
        break;
    }
    }
    return result;
}

}  // namespace afl
