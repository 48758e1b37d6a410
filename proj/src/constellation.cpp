#include "afl/constellation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace afl {

namespace {

// Gray-coded PAM levels for `bits` bits per axis, indexed by label.
std::vector<double> gray_pam(std::size_t bits) {
    const std::size_t levels = std::size_t{1} << bits;
    std::vector<double> out(levels);
    for (std::size_t pos = 0; pos < levels; ++pos) {
        const std::size_t label = pos ^ (pos >> 1);
        out[label] = 2.0 * static_cast<double>(pos) - static_cast<double>(levels - 1);
    }
    return out;
}

ComplexVector square_qam(std::size_t bits_per_symbol) {
    const std::size_t half = bits_per_symbol / 2;
    const auto pam = gray_pam(half);
    const std::size_t m = std::size_t{1} << bits_per_symbol;
    ComplexVector pts(m);
    double energy = 0.0;
    for (std::size_t label = 0; label < m; ++label) {
        const auto i_label = label >> half;
        const auto q_label = label & ((std::size_t{1} << half) - 1);
        pts[label] = {pam[i_label], pam[q_label]};
        energy += std::norm(pts[label]);
    }
    const double scale = 1.0 / std::sqrt(energy / static_cast<double>(m));
    for (auto& p : pts) p *= scale;
    return pts;
}

}  // namespace

Constellation Constellation::qpsk() { return {"QPSK", 2, square_qam(2)}; }

Constellation Constellation::qam16() { return {"16QAM", 4, square_qam(4)}; }

Constellation Constellation::by_name(std::string_view name) {
    if (name == "QPSK") return qpsk();
    if (name == "16QAM") return qam16();
    throw std::invalid_argument("unknown constellation '" + std::string(name) + "'");
}

double Constellation::min_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = i + 1; j < points_.size(); ++j)
            d = std::min(d, std::abs(points_[i] - points_[j]));
    return d;
}

ComplexVector Constellation::map(std::span<const std::uint8_t> bits) const {
    if (bits.size() % bits_per_symbol_ != 0)
        throw std::invalid_argument("map_bits: bit count not divisible by bits per symbol");
    ComplexVector out;
    out.reserve(bits.size() / bits_per_symbol_);
    for (std::size_t i = 0; i < bits.size(); i += bits_per_symbol_) {
        std::size_t label = 0;
        for (std::size_t b = 0; b < bits_per_symbol_; ++b) {
            if (bits[i + b] > 1) throw std::invalid_argument("map_bits: bits must be 0 or 1");
            label = (label << 1) | bits[i + b];
        }
        out.push_back(points_[label]);
    }
    return out;
}

Bits Constellation::demap(std::span<const Complex> symbols) const {
    Bits out;
    out.reserve(symbols.size() * bits_per_symbol_);
    for (const auto& y : symbols) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t label = 0; label < points_.size(); ++label) {
            const double d = std::norm(y - points_[label]);
            if (d < best_d) {
                best_d = d;
                best = label;
            }
        }
        for (std::size_t b = bits_per_symbol_; b-- > 0;)
            out.push_back(static_cast<std::uint8_t>((best >> b) & 1));
    }
    return out;
}

}  // namespace afl
