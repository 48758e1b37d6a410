#include "afl/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

#include "afl/constellation.hpp"
#include "afl/effective_channel.hpp"
#include "afl/errors.hpp"
#include "afl/estimation.hpp"

namespace afl {

namespace {

struct TrialOutcome {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    bool failed = false;
};

struct Shared {
    const ExperimentConfig& cfg;
    const Constellation constellation;
    const FrameLayout layout;
    const ComplexMatrix daft_mat;
    const Complex pilot_amplitude;
    const std::size_t l_max;
    const std::size_t alpha_max;
};

ChannelModel realize(const ExperimentConfig& cfg, std::mt19937_64& rng) {
    ChannelModel ch;
    if (cfg.random_profile)
        ch = draw_channel(*cfg.random_profile, rng);
    else
        ch.paths = cfg.paths;
    return cfg.normalize_channel ? normalized(std::move(ch)) : ch;
}

TrialOutcome run_trial(const Shared& sh, double sigma2, std::uint64_t seed) {
    const auto& cfg = sh.cfg;
    const auto& p = cfg.waveform;
    std::mt19937_64 rng(seed);

    ChannelModel ch = realize(cfg, rng);
    ch.noise_variance = sigma2;

    const auto bps = sh.constellation.bits_per_symbol();
    Bits bits(sh.layout.data.size() * bps);
    std::bernoulli_distribution coin(0.5);
    for (auto& b : bits) b = coin(rng) ? 1 : 0;
    const std::uint64_t noise_seed = rng();

    const Frame frame = assemble_frame(sh.layout, sh.constellation.map(bits), sh.pilot_amplitude);
    const auto tx = add_cpp(idaft(frame.symbols, p), p);
    auto y = daft(strip_cpp(apply_channel(tx, ch, p, noise_seed), p), p);

    TrialOutcome out;
    out.bits = bits.size();
    ComplexVector estimate(p.n, Complex{});
    try {
        EffectiveChannel h;
        if (cfg.csi == CsiMode::Perfect) {
            h = build_effective_channel(ch, p, sh.daft_mat);
        } else {
            PilotEstimatorSpec spec{sh.l_max, sh.alpha_max, cfg.pilot.threshold,
                                    sh.pilot_amplitude};
            const auto est = estimate_channel_single_pilot(y, sh.layout, p, spec);
            h = build_effective_channel(est, p, sh.daft_mat);
        }
        for (auto i : sh.layout.pilot)
            for (std::size_t r = 0; r < p.n; ++r) y[r] -= h.matrix(r, i) * sh.pilot_amplitude;
        estimate = equalize(y, h, sigma2, cfg.equalizer).symbols;
    } catch (const IllConditioned&) {
        out.failed = true;
    } catch (const EmptyChannel&) {
        out.failed = true;
    }

    const auto decided = sh.constellation.demap(extract_data(sh.layout, estimate));
    for (std::size_t i = 0; i < bits.size(); ++i) out.errors += decided[i] != bits[i];
    return out;
}

}  // namespace

std::size_t ExperimentConfig::channel_l_max() const {
    if (random_profile) return random_profile->l_max;
    std::size_t l = 0;
    for (const auto& path : paths) l = std::max(l, path.delay);
    return l;
}

std::size_t ExperimentConfig::channel_alpha_max() const {
    double a = 0.0;
    if (random_profile)
        a = random_profile->alpha_max;
    else
        for (const auto& path : paths) a = std::max(a, std::abs(path.doppler));
    return static_cast<std::size_t>(std::ceil(a - 1e-12));
}

void ExperimentConfig::validate() const {
    waveform.validate();
    if (random_profile) {
        const auto& rp = *random_profile;
        if (!paths.empty())
            throw std::invalid_argument("channel: give either explicit paths or a random profile");
        if (rp.num_paths == 0) throw std::invalid_argument("channel: num_paths must be positive");
        if (!(rp.alpha_max >= 0.0) || !std::isfinite(rp.alpha_max))
            throw std::invalid_argument("channel: alpha_max must be finite and >= 0");
        if (!rp.fractional) {
            if (rp.alpha_max != std::floor(rp.alpha_max))
                throw std::invalid_argument("channel: alpha_max must be an integer unless fractional");
            const double grid = static_cast<double>(rp.l_max + 1) * (2.0 * rp.alpha_max + 1.0);
            if (static_cast<double>(rp.num_paths) > grid)
                throw std::invalid_argument("channel: num_paths exceeds the delay-Doppler grid");
        }
    } else {
        ChannelModel{paths, 0.0}.validate();
    }
    if (channel_l_max() > waveform.cpp_len)
        throw std::invalid_argument("waveform.cpp_len: shorter than the maximum path delay");
    if (snr_db.empty()) throw std::invalid_argument("snr_db: list is empty");
    for (double s : snr_db)
        if (std::isnan(s) || s == -std::numeric_limits<double>::infinity())
            throw std::invalid_argument("snr_db: values must be numbers; +inf means noiseless");
    if (trials == 0) throw std::invalid_argument("trials: must be positive");
    Constellation::by_name(modulation);
    if (equalizer.band_halfwidth >= waveform.n)
        throw std::invalid_argument("equalizer.band_halfwidth: must be < n");
    if (csi == CsiMode::Estimated) {
        const auto guard = pilot.guard.value_or(required_pilot_guard(channel_l_max(),
                                                                     channel_alpha_max()));
        if (2 * guard + 1 >= waveform.n)
            throw std::invalid_argument("pilot.guard: pilot and guards leave no data symbols");
        if (!(pilot.threshold > 0.0 && pilot.threshold < 1.0))
            throw std::invalid_argument("pilot.threshold: must lie in (0, 1)");
        if (!std::isfinite(pilot.boost_db))
            throw std::invalid_argument("pilot.boost_db: must be finite");
    }
}

ChannelModel draw_channel(const RandomChannelProfile& profile, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> delay(0, profile.l_max);
    const auto amax = static_cast<long long>(std::floor(profile.alpha_max));
    std::uniform_int_distribution<long long> alpha(-amax, amax);
    std::uniform_real_distribution<double> frac(-profile.alpha_max, profile.alpha_max);
    std::normal_distribution<double> normal(0.0,
                                            std::sqrt(0.5 / static_cast<double>(profile.num_paths)));
    ChannelModel ch;
    std::set<std::pair<std::size_t, double>> used;
    while (ch.paths.size() < profile.num_paths) {
        PathSpec path;
        path.delay = delay(rng);
        path.doppler = profile.fractional ? frac(rng) : static_cast<double>(alpha(rng));
        const double re = normal(rng);
        const double im = normal(rng);
        path.gain = {re, im};
        if (std::abs(path.gain) == 0.0) continue;
        if (!used.emplace(path.delay, path.doppler).second) continue;
        ch.paths.push_back(path);
    }
    return ch;
}

double noise_variance_for_snr_db(double snr_db) {
    if (snr_db == std::numeric_limits<double>::infinity()) return 0.0;
    return std::pow(10.0, -snr_db / 10.0);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t global_trial_index) {
    return mix_seed(seed ^ mix_seed(global_trial_index));
}

std::vector<ResultRecord> run_ber_experiment(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();
    const auto& p = cfg.waveform;
    const std::size_t l_max = cfg.channel_l_max();
    const std::size_t alpha_max = cfg.channel_alpha_max();
    const FrameLayout layout =
        cfg.csi == CsiMode::Perfect
            ? FrameLayout::all_data(p.n)
            : FrameLayout::single_pilot(p.n,
                                        cfg.pilot.guard.value_or(required_pilot_guard(l_max, alpha_max)));
    const Shared shared{cfg,
                        Constellation::by_name(cfg.modulation),
                        layout,
                        daft_matrix(p),
                        Complex{std::pow(10.0, cfg.pilot.boost_db / 20.0), 0.0},
                        l_max,
                        alpha_max};

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, cfg.trials));

    std::vector<ResultRecord> records;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const auto start = std::chrono::steady_clock::now();
        const double sigma2 = noise_variance_for_snr_db(cfg.snr_db[si]);
        std::vector<TrialOutcome> outcomes(cfg.trials);
        auto worker = [&](std::size_t first, std::size_t stride) {
            for (std::size_t t = first; t < cfg.trials; t += stride)
                outcomes[t] = run_trial(shared, sigma2,
                                        trial_seed(cfg.seed, si * cfg.trials + t));
        };
        if (threads <= 1) {
            worker(0, 1);
        } else {
            std::vector<std::jthread> pool;
            for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w, threads);
        }

        ResultRecord rec;
        rec.experiment_id = cfg.id;
        rec.snr_db = cfg.snr_db[si];
        rec.trials = cfg.trials;
        for (const auto& o : outcomes) {
            rec.total_bits += o.bits;
            rec.bit_errors += o.errors;
            rec.failed_trials += o.failed ? 1 : 0;
        }
        rec.ber = rec.total_bits ? static_cast<double>(rec.bit_errors) /
                                       static_cast<double>(rec.total_bits)
                                 : 0.0;
        rec.wall_time_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - start)
                               .count();
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace afl
