#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afl/types.hpp"

namespace afl {

using Bits = std::vector<std::uint8_t>;

/// Gray-labelled square constellation with unit average energy.
class Constellation {
public:
    static Constellation qpsk();
    static Constellation qam16();
    /// "QPSK" or "16QAM"; throws std::invalid_argument otherwise.
    static Constellation by_name(std::string_view name);

    const std::string& name() const { return name_; }
    std::size_t bits_per_symbol() const { return bits_per_symbol_; }
    /// points()[label] is the point carrying bit label `label` (MSB first).
    const ComplexVector& points() const { return points_; }
    double min_distance() const;

    ComplexVector map(std::span<const std::uint8_t> bits) const;
    /// Minimum-distance hard decision; exact ties go to the lowest label.
    Bits demap(std::span<const Complex> symbols) const;

private:
    Constellation(std::string name, std::size_t bits_per_symbol, ComplexVector points)
        : name_(std::move(name)), bits_per_symbol_(bits_per_symbol), points_(std::move(points)) {}

    std::string name_;
    std::size_t bits_per_symbol_;
    ComplexVector points_;
};

}  // namespace afl
