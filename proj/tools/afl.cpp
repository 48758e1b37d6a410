#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "afl/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Chirp multicarrier (AFDM/OFDM/OCDM) link and sensing simulator"};
    app.require_subcommand(1, 1);

    afl::cli::RunOptions opt;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    const char* subcommands[][2] = {
        {"ber", "Monte-Carlo bit error rate per SNR point (ber.csv)"},
        {"effchan", "Affine-domain effective channel entries (effchan.csv)"},
        {"sense", "Matched-filter range-Doppler map (sense.csv)"},
        {"shift", "Chirp start-frequency displacement under delay/Doppler (shift.csv)"},
        {"sweep-c1", "Path separation versus chirp rate c1 (sweep_c1.csv)"},
    };
    for (const auto& [name, help] : subcommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opt.config_path, "Experiment file (JSON)")->required();
        sub->add_option("--out", opt.output_dir, "Output directory")->required();
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--threads", threads, "Worker threads (default: $AFL_THREADS or 1)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : afl::cli::kExitValidation;
    }

    auto* chosen = app.get_subcommands().front();
    opt.subcommand = chosen->get_name();
    if (chosen->count("--seed")) opt.seed = seed;
    if (chosen->count("--threads")) {
        opt.threads = threads;
    } else if (const char* env = std::getenv("AFL_THREADS")) {
        try {
            opt.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
            std::cerr << "error: AFL_THREADS must be a non-negative integer\n";
            return afl::cli::kExitValidation;
        }
    }
    return afl::cli::run(opt);
}
