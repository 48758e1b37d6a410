#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>
#include <openssl/evp.h>

#include "afl/cli.hpp"
#include "afl/constellation.hpp"
#include "afl/effective_channel.hpp"
#include "afl/errors.hpp"

namespace afl::cli {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Artifact {
    std::string name;
    std::string bytes;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << bytes;
    if (!out) throw IoError("write failed for " + path.string());
}

// Fixed channel for the single-realization subcommands.
ChannelModel config_channel(const ExperimentConfig& cfg, double noise_variance) {
    ChannelModel ch;
    if (cfg.random_profile) {
        std::mt19937_64 rng(mix_seed(cfg.seed));
        ch = draw_channel(*cfg.random_profile, rng);
    } else {
        ch.paths = cfg.paths;
    }
    if (cfg.normalize_channel) ch = normalized(std::move(ch));
    ch.noise_variance = noise_variance;
    return ch;
}

Artifact ber_csv(const RunConfig& rc, unsigned threads) {
    const auto records = run_ber_experiment(rc.experiment, threads);
    std::string csv = "snr_db,trials,total_bits,bit_errors,ber\n";
    for (const auto& r : records) {
        csv += format_double(r.snr_db) + "," + std::to_string(r.trials) + "," +
               std::to_string(r.total_bits) + "," + std::to_string(r.bit_errors) + "," +
               format_double(r.ber) + "\n";
        if (r.failed_trials)
            std::cerr << "warning: " << r.failed_trials << " trial(s) at " << r.snr_db
                      << " dB hit an equalizer/estimator failure\n";
    }
    return {"ber.csv", csv};
}

Artifact effchan_csv(const RunConfig& rc) {
    const auto& cfg = rc.experiment;
    const auto h = build_effective_channel(config_channel(cfg, 0.0), cfg.waveform);
    const double floor = 1e-9 * h.matrix.cwiseAbs().maxCoeff();
    std::string csv = "row,col,re,im,mag\n";
    for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) {
            const Complex v = h.matrix(r, c);
            if (std::abs(v) <= floor) continue;
            csv += std::to_string(r) + "," + std::to_string(c) + "," + format_double(v.real()) +
                   "," + format_double(v.imag()) + "," + format_double(std::abs(v)) + "\n";
        }
    }
    return {"effchan.csv", csv};
}

Artifact sense_csv(const RunConfig& rc) {
    const auto& cfg = rc.experiment;
    const auto& p = cfg.waveform;
    const auto constellation = Constellation::by_name(cfg.modulation);
    std::mt19937_64 rng(mix_seed(cfg.seed ^ 0x5e115e5ULL));
    std::bernoulli_distribution coin(0.5);
    Bits bits(p.n * constellation.bits_per_symbol());
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    const auto tx = idaft(constellation.map(bits), p);
    const auto ch = config_channel(cfg, noise_variance_for_snr_db(cfg.snr_db.front()));
    const auto rx = strip_cpp(apply_channel(add_cpp(tx, p), ch, p, rng()), p);
    const auto map = range_doppler_map(tx, rx, p, rc.sensing.l_max, rc.sensing.alpha_max);

    std::string csv = "delay,doppler,metric\n";
    const auto amax = static_cast<long long>(map.alpha_max);
    for (std::size_t l = 0; l <= map.l_max; ++l)
        for (long long a = -amax; a <= amax; ++a)
            csv += std::to_string(l) + "," + std::to_string(a) + "," + format_double(map.at(l, a)) +
                   "\n";
    return {"sense.csv", csv};
}

Artifact shift_csv(const RunConfig& rc) {
    const auto& s = rc.shift;
    std::string csv = "chirp_rate,delay,doppler,measured_shift,predicted_shift\n";
    for (auto shear : s.shears) {
        const double rate = static_cast<double>(shear) / (2.0 * static_cast<double>(s.n));
        for (auto delay : s.delays) {
            for (double doppler : s.dopplers) {
                const double measured =
                    measure_start_frequency_shift(rate, delay, doppler, s.n, s.spectrogram);
                const double predicted = predicted_start_frequency_shift(rate, delay, doppler, s.n);
                csv += format_double(rate) + "," + std::to_string(delay) + "," +
                       format_double(doppler) + "," + format_double(measured) + "," +
                       format_double(predicted) + "\n";
            }
        }
    }
    return {"shift.csv", csv};
}

Artifact sweep_c1_csv(const RunConfig& rc) {
    const auto& cfg = rc.experiment;
    const auto ch = config_channel(cfg, 0.0);
    const auto alpha_max = cfg.channel_alpha_max();
    std::string csv = "shear,c1,per_path_separation,significant_fraction,max_offdiag_leakage\n";
    for (std::size_t k = 0; k <= 2 * alpha_max + 1; ++k) {
        WaveformParams p = cfg.waveform;
        p.c1 = static_cast<double>(k) / (2.0 * static_cast<double>(p.n));
        const auto m = sparsity_metrics(build_effective_channel(ch, p), rc.sparsity_threshold);
        csv += std::to_string(k) + "," + format_double(p.c1) + "," +
               (m.per_path_separation ? "1" : "0") + "," + format_double(m.significant_fraction) +
               "," + format_double(m.max_offdiag_leakage) + "\n";
    }
    return {"sweep_c1.csv", csv};
}

std::string manifest(const RunOptions& opt, const RunConfig& rc,
                     const std::vector<Artifact>& artifacts) {
    nlohmann::json m;
    m["subcommand"] = opt.subcommand;
    m["seed"] = rc.experiment.seed;
    m["config"] = nlohmann::json::parse(rc.source_json);
    m["resolved"] = {{"c1", rc.experiment.waveform.c1},
                     {"c2", rc.experiment.waveform.c2},
                     {"cpp_len", rc.experiment.waveform.cpp_len},
                     {"mode", to_string(rc.experiment.waveform.mode())}};
    auto list = nlohmann::json::array();
    for (const auto& a : artifacts) list.push_back({{"file", a.name}, {"sha256", sha256_hex(a.bytes)}});
    m["artifacts"] = list;
    return m.dump(2) + "\n";
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

int run(const RunOptions& opt) {
    try {
        const std::map<std::string, int> known{
            {"ber", 0}, {"effchan", 1}, {"sense", 2}, {"shift", 3}, {"sweep-c1", 4}};
        if (!known.count(opt.subcommand)) {
            std::cerr << "error: unknown subcommand '" << opt.subcommand << "'\n";
            return kExitValidation;
        }
        RunConfig rc = parse_config(read_file(opt.config_path));
        if (opt.seed) rc.experiment.seed = *opt.seed;

        std::vector<Artifact> artifacts;
        switch (known.at(opt.subcommand)) {
        case 0: artifacts.push_back(ber_csv(rc, opt.threads)); break;
        case 1: artifacts.push_back(effchan_csv(rc)); break;
        case 2: artifacts.push_back(sense_csv(rc)); break;
        case 3: artifacts.push_back(shift_csv(rc)); break;
        case 4: artifacts.push_back(sweep_c1_csv(rc)); break;
        }

        std::error_code ec;
        fs::create_directories(opt.output_dir, ec);
        if (ec) throw IoError("cannot create " + opt.output_dir.string() + ": " + ec.message());
        for (const auto& a : artifacts) write_file(opt.output_dir / a.name, a.bytes);
        write_file(opt.output_dir / "manifest.json", manifest(opt, rc, artifacts));
        return kExitOk;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid config field " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfigurationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace afl::cli
