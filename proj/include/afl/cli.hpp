// cli.hpp - declarative experiment files and the subcommand runner
//
// Config files are JSON; the full schema lives in docs/config.md.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afl/analysis.hpp"
#include "afl/experiment.hpp"

namespace afl::cli {

struct SensingSpec {
    std::size_t l_max = 0;
    std::size_t alpha_max = 0;
};

struct ShiftSweepSpec {
    std::size_t n = 1024;
    /// Chirp rates given as integer shears 2*n*rate.
    std::vector<long long> shears{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<std::size_t> delays{0, 1, 2, 3};
    std::vector<double> dopplers{-2, -1, 0, 1, 2};
    SpectrogramSpec spectrogram{8, 8, 1024};
};

struct RunConfig {
    ExperimentConfig experiment;
    /// The c1 field was "auto" (resolved via min_c1_full_diversity).
    bool c1_auto = false;
    SensingSpec sensing;
    ShiftSweepSpec shift;
    double sparsity_threshold = 0.01;
    /// The parsed document, echoed into run manifests.
    std::string source_json;
};

/// Parses and validates a JSON experiment document. Throws ParseError (with
/// 1-based line) on malformed JSON and ValidationError (with dotted field
/// path) on unknown keys, wrong types and constraint violations.
RunConfig parse_config(std::string_view text);

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitNumerical = 4;

struct RunOptions {
    std::string subcommand;
    std::filesystem::path config_path;
    std::filesystem::path output_dir;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

/// Subcommands: ber, effchan, sense, shift, sweep-c1. Writes the CSV
/// artifact(s) plus manifest.json into output_dir and returns an exit code;
/// diagnostics go to stderr.
int run(const RunOptions& options);

/// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

std::string sha256_hex(std::string_view bytes);

}  // namespace afl::cli
