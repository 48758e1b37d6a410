#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "afl/estimation.hpp"
#include "afl/experiment.hpp"
#include "oracles.hpp"

using namespace afl;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExperimentConfig awgn_config(std::vector<double> snr, std::size_t trials) {
    ExperimentConfig cfg;
    cfg.id = "awgn";
    cfg.waveform = WaveformParams{64, 0.0, 0.0, 0};
    cfg.paths = {PathSpec{1.0, 0, 0.0}};
    cfg.snr_db = std::move(snr);
    cfg.trials = trials;
    cfg.seed = 42;
    cfg.equalizer = {EqualizerKind::MMSE, 0};
    return cfg;
}

ExperimentConfig dispersive_config() {
    ExperimentConfig cfg;
    cfg.id = "dd";
    cfg.waveform = WaveformParams{32, 3.0 / 64, 0.0, 2};
    cfg.paths = {PathSpec{1.0, 0, 0.0}, PathSpec{{0.5, 0.3}, 1, 1.0}, PathSpec{{-0.2, 0.4}, 2, -1.0}};
    cfg.snr_db = {kInf};
    cfg.trials = 20;
    cfg.seed = 7;
    cfg.equalizer = {EqualizerKind::MMSE, 0};
    return cfg;
}

double qpsk_ber(double snr_db) {
    // Es/N0 per symbol; QPSK carries two bits per symbol.
    const double ebn0 = std::pow(10.0, snr_db / 10.0) / 2.0;
    return oracle::q_func(std::sqrt(2.0 * ebn0));
}

}  // namespace

TEST_CASE("noise variance from SNR") {
    CHECK(noise_variance_for_snr_db(0.0) == 1.0);
    CHECK(noise_variance_for_snr_db(10.0) == doctest::Approx(0.1));
    CHECK(noise_variance_for_snr_db(kInf) == 0.0);
}

TEST_CASE("noiseless perfect CSI gives zero bit errors") {
    SUBCASE("integer dispersive channel, every equalizer") {
        for (auto kind : {EqualizerKind::ZF, EqualizerKind::MMSE, EqualizerKind::BANDED_MMSE}) {
            auto cfg = dispersive_config();
            cfg.equalizer = {kind, 2};
            const auto rec = run_ber_experiment(cfg);
            REQUIRE(rec.size() == 1);
            CHECK(rec[0].bit_errors == 0);
            CHECK(rec[0].ber == 0.0);
            CHECK(rec[0].total_bits == 20u * 32u * 2u);
            CHECK(rec[0].failed_trials == 0);
        }
    }
    SUBCASE("fractional random profile, 16-QAM") {
        auto cfg = dispersive_config();
        cfg.paths.clear();
        cfg.random_profile = RandomChannelProfile{3, 2, 0.4, true};
        cfg.modulation = "16QAM";
        const auto rec = run_ber_experiment(cfg);
        CHECK(rec[0].bit_errors == 0);
        CHECK(rec[0].total_bits == 20u * 32u * 4u);
    }
    SUBCASE("estimated CSI on an integer channel") {
        auto cfg = dispersive_config();
        cfg.waveform = WaveformParams{64, 3.0 / 128, 0.0, 2};
        cfg.csi = CsiMode::Estimated;
        const auto rec = run_ber_experiment(cfg);
        CHECK(rec[0].bit_errors == 0);
        CHECK(rec[0].failed_trials == 0);
        const std::size_t guard = required_pilot_guard(2, 1);
        CHECK(rec[0].total_bits == 20u * (64u - 2 * guard - 1) * 2u);
    }
}

TEST_CASE("AWGN QPSK matches the analytic curve") {
    // 782 frames of 128 bits each is just over 1e5 bits.
    const auto rec = run_ber_experiment(awgn_config({6.0, 10.0}, 782));
    REQUIRE(rec.size() == 2);
    for (const auto& r : rec) {
        CHECK(r.total_bits >= 100000u);
        CHECK(r.ber == static_cast<double>(r.bit_errors) / static_cast<double>(r.total_bits));
        const double ref = qpsk_ber(r.snr_db);
        INFO("snr " << r.snr_db << " ber " << r.ber << " ref " << ref);
        CHECK(r.ber >= 0.5 * ref);
        CHECK(r.ber <= 2.0 * ref);
    }
}

TEST_CASE("records are deterministic and independent of thread count") {
    auto cfg = dispersive_config();
    cfg.paths.clear();
    cfg.random_profile = RandomChannelProfile{3, 2, 1.0, false};
    cfg.snr_db = {5.0, 12.0};
    cfg.trials = 25;
    const auto a = run_ber_experiment(cfg, 1);
    const auto b = run_ber_experiment(cfg, 1);
    const auto c = run_ber_experiment(cfg, 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].bit_errors == b[i].bit_errors);
        CHECK(a[i].bit_errors == c[i].bit_errors);
        CHECK(a[i].total_bits == c[i].total_bits);
        CHECK(a[i].ber == c[i].ber);
        CHECK(a[i].experiment_id == "dd");
    }
    CHECK(a[0].bit_errors > a[1].bit_errors);
    cfg.seed += 1;
    CHECK(run_ber_experiment(cfg)[0].bit_errors != a[0].bit_errors);
}

TEST_CASE("ill-conditioned trials are counted, not dropped") {
    // Two equal-and-opposite LTI taps null one OFDM subcarrier.
    auto cfg = awgn_config({kInf}, 4);
    cfg.waveform.cpp_len = 1;
    cfg.paths = {PathSpec{1.0, 0, 0.0}, PathSpec{-1.0, 1, 0.0}};
    cfg.equalizer = {EqualizerKind::ZF, 0};
    const auto rec = run_ber_experiment(cfg);
    CHECK(rec[0].failed_trials == 4);
    CHECK(rec[0].total_bits == 4u * 128u);
    CHECK(rec[0].bit_errors > 0);
}

TEST_CASE("draw_channel") {
    std::mt19937_64 rng(5);
    SUBCASE("integer grid, distinct pairs") {
        for (int t = 0; t < 50; ++t) {
            const auto ch = draw_channel(RandomChannelProfile{6, 2, 1.0, false}, rng);
            REQUIRE(ch.paths.size() == 6);
            std::set<std::pair<std::size_t, double>> seen;
            for (const auto& p : ch.paths) {
                CHECK(p.delay <= 2);
                CHECK(std::abs(p.doppler) <= 1.0);
                CHECK(p.doppler == std::round(p.doppler));
                seen.emplace(p.delay, p.doppler);
            }
            CHECK(seen.size() == 6);
        }
    }
    SUBCASE("fractional Dopplers stay within the bound") {
        double total = 0.0;
        const int draws = 2000;
        for (int t = 0; t < draws; ++t) {
            const auto ch = draw_channel(RandomChannelProfile{4, 3, 0.3, true}, rng);
            for (const auto& p : ch.paths) {
                CHECK(std::abs(p.doppler) <= 0.3);
                total += std::norm(p.gain);
            }
        }
        // Average total power is 1.
        CHECK(total / draws == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("config validation") {
    auto ok = dispersive_config();
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.channel_l_max() == 2);
    CHECK(ok.channel_alpha_max() == 1);

    auto cfg = ok;
    cfg.waveform.cpp_len = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.snr_db.clear();
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.snr_db = {std::nan("")};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.modulation = "8PSK";
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.random_profile = RandomChannelProfile{1, 1, 1.0, false};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.paths.clear();
    cfg.random_profile = RandomChannelProfile{7, 0, 1.0, false};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.random_profile = RandomChannelProfile{2, 0, 0.5, false};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = ok;
    cfg.csi = CsiMode::Estimated;
    cfg.pilot.guard = 16;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
