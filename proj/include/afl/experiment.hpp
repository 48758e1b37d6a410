// experiment.hpp - Monte-Carlo BER runs over the full transceiver chain
//
//   bits -> map -> frame -> idaft -> add_cpp -> channel -> strip_cpp -> daft
//        -> (estimate) -> equalize -> demap
//
// Trial t at SNR index i uses seed mix_seed(seed ^ mix_seed(i * trials + t)),
// so results do not depend on how trials are spread over threads.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "afl/channel.hpp"
#include "afl/equalizer.hpp"
#include "afl/waveform.hpp"

namespace afl {

struct RandomChannelProfile {
    std::size_t num_paths = 1;
    std::size_t l_max = 0;
    /// Integer unless `fractional`; Dopplers are drawn from [-alpha_max, alpha_max].
    double alpha_max = 0.0;
    bool fractional = false;
};

enum class CsiMode { Perfect, Estimated };

struct PilotSpec {
    /// Zero guards per side; unset means required_pilot_guard(l_max, alpha_max).
    std::optional<std::size_t> guard;
    double boost_db = 0.0;
    double threshold = 0.2;
};

struct ExperimentConfig {
    std::string id = "experiment";
    WaveformParams waveform;
    /// Exactly one of `paths` (non-empty) or `random_profile` is used.
    std::vector<PathSpec> paths;
    std::optional<RandomChannelProfile> random_profile;
    bool normalize_channel = true;
    std::string modulation = "QPSK";
    std::vector<double> snr_db;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    EqualizerSpec equalizer;
    CsiMode csi = CsiMode::Perfect;
    PilotSpec pilot;

    /// Largest delay the channel can produce.
    std::size_t channel_l_max() const;
    /// Largest integer Doppler bound (ceil of the largest |doppler|).
    std::size_t channel_alpha_max() const;

    /// Cross-module consistency checks; throws std::invalid_argument.
    void validate() const;
};

struct ResultRecord {
    std::string experiment_id;
    double snr_db = 0.0;
    std::size_t trials = 0;
    std::uint64_t total_bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    /// Trials whose equalizer or estimator failed; their bits were decided
    /// from an all-zero estimate and still count.
    std::size_t failed_trials = 0;
    double wall_time_ms = 0.0;
};

/// Draws one channel realization (gains CN(0, 1/num_paths)).
ChannelModel draw_channel(const RandomChannelProfile& profile, std::mt19937_64& rng);

/// Noise variance per complex sample for Es/N0 = snr_db with unit-energy
/// symbols; +inf gives 0.
double noise_variance_for_snr_db(double snr_db);

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t global_trial_index);

/// One record per SNR point. `threads` = 0 picks hardware concurrency.
std::vector<ResultRecord> run_ber_experiment(const ExperimentConfig& cfg, unsigned threads = 1);

}  // namespace afl
