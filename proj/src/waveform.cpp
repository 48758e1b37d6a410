#include "afl/waveform.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fft.hpp"

namespace afl {

namespace {

void require_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want)
        throw std::invalid_argument(std::string(what) + ": expected length " +
                                    std::to_string(want) + ", got " + std::to_string(got));
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

const char* to_string(WaveformMode mode) {
    switch (mode) {
    case WaveformMode::OFDM: return "OFDM";
    case WaveformMode::OCDM: return "OCDM";
    case WaveformMode::AFDM: return "AFDM";
    }
    return "?";
}

void WaveformParams::validate() const {
    if (n < 2) throw std::invalid_argument("waveform: n must be >= 2");
    if (cpp_len >= n) throw std::invalid_argument("waveform: cpp_len must be < n");
    if (!std::isfinite(c1) || !std::isfinite(c2))
        throw std::invalid_argument("waveform: chirp rates must be finite");
    if (c1 < 0.0 || c2 < 0.0)
        throw std::invalid_argument("waveform: negative chirp rates are not supported");
}

WaveformMode WaveformParams::mode() const {
    if (c1 == 0.0 && c2 == 0.0) return WaveformMode::OFDM;
    const double ocdm = 1.0 / (2.0 * static_cast<double>(n));
    if (near(c1, ocdm) && near(c2, ocdm)) return WaveformMode::OCDM;
    return WaveformMode::AFDM;
}

FrameLayout FrameLayout::all_data(std::size_t n) {
    FrameLayout layout;
    layout.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) layout.data[i] = i;
    return layout;
}

FrameLayout FrameLayout::single_pilot(std::size_t n, std::size_t guard) {
    if (n == 0 || 2 * guard + 1 > n)
        throw std::invalid_argument("frame: pilot plus guards exceed the frame");
    FrameLayout layout;
    layout.pilot = {0};
    for (std::size_t g = 1; g <= guard; ++g) layout.guard.push_back(g);
    for (std::size_t i = guard + 1; i < n - guard; ++i) layout.data.push_back(i);
    for (std::size_t g = n - guard; g < n; ++g) layout.guard.push_back(g);
    return layout;
}

void FrameLayout::validate(std::size_t n) const {
    if (pilot.size() > 1) throw std::invalid_argument("frame: at most one pilot is supported");
    std::vector<int> seen(n, 0);
    for (const auto* set : {&pilot, &guard, &data}) {
        for (auto i : *set) {
            if (i >= n) throw std::invalid_argument("frame: index out of range");
            if (seen[i]++) throw std::invalid_argument("frame: index sets overlap");
        }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw std::invalid_argument("frame: index sets do not cover the frame");
}

Frame assemble_frame(const FrameLayout& layout, std::span<const Complex> data,
                     Complex pilot_amplitude) {
    require_length(data.size(), layout.data.size(), "assemble_frame");
    const auto n = layout.pilot.size() + layout.guard.size() + layout.data.size();
    layout.validate(n);
    Frame frame{ComplexVector(n, Complex{}), layout};
    for (auto i : layout.pilot) frame.symbols[i] = pilot_amplitude;
    for (std::size_t k = 0; k < data.size(); ++k) frame.symbols[layout.data[k]] = data[k];
    return frame;
}

ComplexVector extract_data(const FrameLayout& layout, std::span<const Complex> symbols) {
    ComplexVector out;
    out.reserve(layout.data.size());
    for (auto i : layout.data) {
        if (i >= symbols.size()) throw std::invalid_argument("extract_data: index out of range");
        out.push_back(symbols[i]);
    }
    return out;
}

ComplexVector chirp_phase_vector(std::size_t n, double c) {
    if (n == 0) throw std::invalid_argument("chirp_phase_vector: n must be positive");
    ComplexVector lambda(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k) * static_cast<double>(k);
        lambda[k] = unit_phasor(-c * kk);
    }
    return lambda;
}

ComplexVector daft(std::span<const Complex> x, const WaveformParams& p) {
    p.validate();
    require_length(x.size(), p.n, "daft");
    const auto l1 = chirp_phase_vector(p.n, p.c1);
    const auto l2 = chirp_phase_vector(p.n, p.c2);
    ComplexVector t(p.n);
    for (std::size_t k = 0; k < p.n; ++k) t[k] = l1[k] * x[k];
    auto out = detail::unitary_fft(t);
    for (std::size_t m = 0; m < p.n; ++m) out[m] *= l2[m];
    return out;
}

ComplexVector idaft(std::span<const Complex> X, const WaveformParams& p) {
    p.validate();
    require_length(X.size(), p.n, "idaft");
    const auto l1 = chirp_phase_vector(p.n, p.c1);
    const auto l2 = chirp_phase_vector(p.n, p.c2);
    ComplexVector t(p.n);
    for (std::size_t m = 0; m < p.n; ++m) t[m] = std::conj(l2[m]) * X[m];
    auto out = detail::unitary_ifft(t);
    for (std::size_t k = 0; k < p.n; ++k) out[k] *= std::conj(l1[k]);
    return out;
}

ComplexMatrix daft_matrix(const WaveformParams& p) {
    p.validate();
    ComplexMatrix a(p.n, p.n);
    ComplexVector e(p.n, Complex{});
    for (std::size_t j = 0; j < p.n; ++j) {
        e[j] = 1.0;
        const auto col = daft(e, p);
        for (std::size_t i = 0; i < p.n; ++i) a(i, j) = col[i];
        e[j] = 0.0;
    }
    return a;
}

ComplexVector add_cpp(std::span<const Complex> s, const WaveformParams& p) {
    p.validate();
    require_length(s.size(), p.n, "add_cpp");
    const auto n = static_cast<long long>(p.n);
    const auto L = static_cast<long long>(p.cpp_len);
    ComplexVector out;
    out.reserve(p.n + p.cpp_len);
    for (long long t = -L; t < 0; ++t) {
        const auto& sample = s[static_cast<std::size_t>(n + t)];
        if (p.c1 == 0.0) {
            out.push_back(sample);
        } else {
            const double exponent = static_cast<double>(n * n + 2 * n * t);
            out.push_back(sample * unit_phasor(-p.c1 * exponent));
        }
    }
    out.insert(out.end(), s.begin(), s.end());
    return out;
}

ComplexVector strip_cpp(std::span<const Complex> r, const WaveformParams& p) {
    p.validate();
    require_length(r.size(), p.n + p.cpp_len, "strip_cpp");
    return ComplexVector(r.begin() + static_cast<std::ptrdiff_t>(p.cpp_len), r.end());
}

}  // namespace afl
