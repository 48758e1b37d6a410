#include "fft.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace afl::detail {

namespace {

// kissfft keeps per-length twiddle caches; one engine per thread.
Eigen::FFT<double>& engine() {
    thread_local Eigen::FFT<double> fft = [] {
        Eigen::FFT<double> f;
        f.SetFlag(Eigen::FFT<double>::Unscaled);
        return f;
    }();
    return fft;
}

ComplexVector transform(std::span<const Complex> in, bool inverse) {
    const auto n = in.size();
    ComplexVector out(n);
    if (n == 0) return out;
    auto& fft = engine();
    if (inverse)
        fft.inv(out.data(), in.data(), static_cast<Eigen::Index>(n));
    else
        fft.fwd(out.data(), in.data(), static_cast<Eigen::Index>(n));
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace

ComplexVector unitary_fft(std::span<const Complex> in) { return transform(in, false); }

ComplexVector unitary_ifft(std::span<const Complex> in) { return transform(in, true); }

ComplexVector raw_fft(std::span<const Complex> in, std::size_t nfft) {
    ComplexVector padded(nfft, Complex{});
    for (std::size_t i = 0; i < std::min(nfft, in.size()); ++i) padded[i] = in[i];
    ComplexVector out(nfft);
    engine().fwd(out.data(), padded.data(), static_cast<Eigen::Index>(nfft));
    return out;
}

}  // namespace afl::detail
