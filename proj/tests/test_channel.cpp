#include <doctest.h>

#include <random>
#include <stdexcept>

#include "afl/channel.hpp"
#include "oracles.hpp"

using namespace afl;

namespace {

ChannelModel random_channel(std::mt19937_64& rng, std::size_t paths, std::size_t l_max,
                            double f_max, bool fractional) {
    std::uniform_int_distribution<std::size_t> delay(0, l_max);
    std::uniform_real_distribution<double> f(-f_max, f_max);
    std::normal_distribution<double> g(0.0, 1.0);
    ChannelModel ch;
    while (ch.paths.size() < paths) {
        PathSpec p{{g(rng), g(rng)}, delay(rng), fractional ? f(rng) : std::round(f(rng))};
        bool dup = false;
        for (const auto& q : ch.paths) dup = dup || (q.delay == p.delay && q.doppler == p.doppler);
        if (!dup) ch.paths.push_back(p);
    }
    return ch;
}

}  // namespace

TEST_CASE("apply_channel examples") {
    std::mt19937_64 rng(1);
    SUBCASE("identity") {
        const WaveformParams p{8, 0.1, 0.0, 2};
        const auto s = oracle::random_vector(10, rng);
        CHECK(apply_channel(s, ChannelModel::identity(), p, 7) == s);
    }
    SUBCASE("pure Doppler") {
        const WaveformParams p{8, 0.0, 0.0, 0};
        const auto s = oracle::random_vector(8, rng);
        const ChannelModel ch{{PathSpec{1.0, 0, 1.0}}, 0.0};
        const auto r = apply_channel(s, ch, p, 0);
        for (std::size_t m = 0; m < 8; ++m)
            CHECK(std::abs(r[m] - s[m] * std::polar(1.0, kTwoPi * m / 8.0)) < 1e-14);
    }
    SUBCASE("Doppler phase referenced to the payload start") {
        const WaveformParams p{8, 0.0, 0.0, 3};
        const auto s = oracle::random_vector(11, rng);
        const ChannelModel ch{{PathSpec{1.0, 0, 0.5}}, 0.0};
        const auto r = apply_channel(s, ch, p, 0);
        CHECK(r[3] == s[3]);
        CHECK(std::abs(r[0] - s[0] * std::polar(1.0, kTwoPi * 0.5 * -3 / 8.0)) < 1e-14);
    }
    SUBCASE("superposition of single-path outputs") {
        const WaveformParams p{16, 3.0 / 32, 0.0, 4};
        const auto s = oracle::random_vector(20, rng);
        const PathSpec a{{0.3, -0.4}, 1, 1.0};
        const PathSpec b{{-0.7, 0.2}, 3, -0.25};
        const auto ra = apply_channel(s, ChannelModel{{a}, 0.0}, p, 0);
        const auto rb = apply_channel(s, ChannelModel{{b}, 0.0}, p, 0);
        const auto rab = apply_channel(s, ChannelModel{{a, b}, 0.0}, p, 0);
        for (std::size_t m = 0; m < 20; ++m) CHECK(std::abs(rab[m] - (ra[m] + rb[m])) < 1e-12);
    }
    SUBCASE("errors") {
        const WaveformParams p{8, 0.0, 0.0, 1};
        const ComplexVector s(9);
        CHECK_THROWS_AS(apply_channel(s, ChannelModel{{PathSpec{1.0, 2, 0.0}}, 0.0}, p, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(s, ChannelModel{{PathSpec{}}, -1.0}, p, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(ComplexVector(8), ChannelModel::identity(), p, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(s, ChannelModel{}, p, 0), std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(s, ChannelModel{{PathSpec{0.0, 0, 0.0}}, 0.0}, p, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(apply_channel(s, ChannelModel{{PathSpec{}, PathSpec{0.5, 0, 0.0}}, 0.0}, p, 0),
                        std::invalid_argument);
    }
}

TEST_CASE("linearity and determinism") {
    std::mt19937_64 rng(3);
    const WaveformParams p{16, 0.1, 0.0, 3};
    for (int trial = 0; trial < 20; ++trial) {
        const auto ch = random_channel(rng, 3, 3, 2.0, true);
        const auto s1 = oracle::random_vector(19, rng);
        const auto s2 = oracle::random_vector(19, rng);
        const Complex a{0.7, -1.3};
        ComplexVector mix(19);
        for (std::size_t i = 0; i < 19; ++i) mix[i] = a * s1[i] + s2[i];
        const auto r1 = apply_channel(s1, ch, p, 0);
        const auto r2 = apply_channel(s2, ch, p, 0);
        const auto rm = apply_channel(mix, ch, p, 0);
        for (std::size_t i = 0; i < 19; ++i) CHECK(std::abs(rm[i] - (a * r1[i] + r2[i])) < 1e-10);
    }
    auto noisy = random_channel(rng, 2, 3, 1.0, false);
    noisy.noise_variance = 0.3;
    const auto s = oracle::random_vector(19, rng);
    CHECK(apply_channel(s, noisy, p, 99) == apply_channel(s, noisy, p, 99));
    CHECK(apply_channel(s, noisy, p, 99) != apply_channel(s, noisy, p, 100));
}

TEST_CASE("noise statistics") {
    const WaveformParams p{1000, 0.0, 0.0, 0};
    double power = 0.0;
    double re2 = 0.0;
    Complex mean{};
    const int blocks = 100;
    for (int b = 0; b < blocks; ++b) {
        // All-zero input isolates the noise term.
        const auto w = apply_channel(ComplexVector(1000), ChannelModel{{PathSpec{}}, 1.0}, p, b);
        for (const auto& v : w) {
            power += std::norm(v);
            re2 += v.real() * v.real();
            mean += v;
        }
    }
    const double count = 1000.0 * blocks;
    CHECK(power / count >= 0.98);
    CHECK(power / count <= 1.02);
    CHECK(std::abs(re2 / count - 0.5) < 0.02);
    CHECK(std::abs(mean / count) < 0.02);
}

TEST_CASE("time_channel_matrix") {
    SUBCASE("identity channel") {
        const WaveformParams p{8, 0.2, 0.0, 2};
        const auto h = time_channel_matrix(ChannelModel::identity(), p);
        CHECK((h - ComplexMatrix::Identity(8, 8)).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("one-sample delay under OFDM is a circulant shift") {
        const WaveformParams p{8, 0.0, 0.0, 1};
        const auto h = time_channel_matrix(ChannelModel{{PathSpec{1.0, 1, 0.0}}, 0.0}, p);
        for (Eigen::Index r = 0; r < 8; ++r)
            for (Eigen::Index c = 0; c < 8; ++c)
                CHECK(h(r, c) == Complex{(c == (r + 7) % 8) ? 1.0 : 0.0, 0.0});
    }
    SUBCASE("matches the simulated prefix chain") {
        std::mt19937_64 rng(8);
        for (double c1 : {0.0, 3.0 / 16, 0.0371}) {
            const WaveformParams p{8, c1, 0.13, 4};
            for (int t = 0; t < 5; ++t) {
                const auto ch = random_channel(rng, 3, 4, 2.0, t % 2 == 1);
                const auto ht = time_channel_matrix(ch, p);
                for (int k = 0; k < 20; ++k) {
                    const auto s = oracle::random_vector(8, rng);
                    const auto simulated = strip_cpp(apply_channel(add_cpp(s, p), ch, p, 0), p);
                    CHECK(oracle::max_abs_diff(simulated, oracle::from_eigen(ht * oracle::to_eigen(s))) < 1e-10);
                    CHECK(oracle::max_abs_diff(simulated, oracle::circular_channel(s, ch, 8, c1)) < 1e-10);
                }
            }
        }
    }
    CHECK_THROWS_AS(time_channel_matrix(ChannelModel{{PathSpec{1.0, 3, 0.0}}, 0.0}, WaveformParams{8, 0, 0, 2}),
                    std::invalid_argument);
}

TEST_CASE("normalized_doppler") {
    // 120 km/h at 71 GHz over 120 kHz spacing.
    const double v = normalized_doppler(120.0 / 3.6, 71e9, 120e3);
    CHECK(v == doctest::Approx(0.0658).epsilon(0.01));
    CHECK(v >= 0.06);
    CHECK(v <= 0.08);
    CHECK(normalized_doppler(0.0, 3e9, 15e3) == 0.0);
    CHECK(std::abs(normalized_doppler(29.9792458, 1e9, 1e3) - 0.1) < 1e-6);
    CHECK_THROWS_AS(normalized_doppler(-1.0, 1e9, 1e3), std::invalid_argument);
    CHECK_THROWS_AS(normalized_doppler(1.0, 0.0, 1e3), std::invalid_argument);
    CHECK_THROWS_AS(normalized_doppler(1.0, 1e9, -1.0), std::invalid_argument);
}

TEST_CASE("normalized gains") {
    ChannelModel ch{{PathSpec{3.0, 0, 0.0}, PathSpec{{0.0, 4.0}, 1, 0.0}}, 0.0};
    const auto n = normalized(ch);
    CHECK(std::abs(std::norm(n.paths[0].gain) + std::norm(n.paths[1].gain) - 1.0) < 1e-15);
    CHECK(std::abs(n.paths[0].gain - Complex{0.6, 0.0}) < 1e-15);
}
