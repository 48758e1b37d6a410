#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "afl/cli.hpp"
#include "afl/constellation.hpp"
#include "afl/effective_channel.hpp"
#include "afl/errors.hpp"
#include "afl/estimation.hpp"

namespace afl::cli {

namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Checked access to one JSON object; every key must be consumed or listed.
class Section {
public:
    Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
        if (!node_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    void allow(std::initializer_list<const char*> keys) {
        const std::set<std::string> allowed(keys.begin(), keys.end());
        for (const auto& [key, value] : node_.items())
            if (!allowed.count(key)) throw ValidationError(join(path_, key), "unknown key");
    }

    bool has(const char* key) const { return node_.contains(key); }
    const json& raw(const char* key) const { return node_.at(key); }
    std::string field(const char* key) const { return join(path_, key); }

    std::size_t count(const char* key, std::optional<std::size_t> fallback = std::nullopt) const {
        if (!has(key)) return required(key, fallback);
        const auto& v = node_.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw ValidationError(field(key), "expected a non-negative integer");
        return v.get<std::size_t>();
    }

    double number(const char* key, std::optional<double> fallback = std::nullopt) const {
        if (!has(key)) return required(key, fallback);
        const auto& v = node_.at(key);
        if (!v.is_number()) throw ValidationError(field(key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError(field(key), "expected a finite number");
        return d;
    }

    bool boolean(const char* key, bool fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_.at(key);
        if (!v.is_boolean()) throw ValidationError(field(key), "expected true or false");
        return v.get<bool>();
    }

    std::string string(const char* key, std::optional<std::string> fallback = std::nullopt) const {
        if (!has(key)) return required(key, fallback);
        const auto& v = node_.at(key);
        if (!v.is_string()) throw ValidationError(field(key), "expected a string");
        return v.get<std::string>();
    }

    const json& array(const char* key) const {
        if (!has(key)) throw ValidationError(field(key), "missing required key");
        const auto& v = node_.at(key);
        if (!v.is_array()) throw ValidationError(field(key), "expected a list");
        return v;
    }

private:
    template <typename T>
    T required(const char* key, const std::optional<T>& fallback) const {
        if (!fallback) throw ValidationError(field(key), "missing required key");
        return *fallback;
    }

    const json& node_;
    std::string path_;
};

std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

Complex parse_gain(const json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ValidationError(field, "expected a number or [re, im]");
}

void parse_channel(const json& node, ExperimentConfig& cfg) {
    Section ch(node, "channel");
    ch.allow({"paths", "random", "normalize_channel"});
    cfg.normalize_channel = ch.boolean("normalize_channel", true);
    if (ch.has("paths") == ch.has("random"))
        throw ValidationError("channel", "give exactly one of 'paths' or 'random'");

    if (ch.has("paths")) {
        const auto& list = ch.array("paths");
        if (list.empty()) throw ValidationError("channel.paths", "path list is empty");
        std::set<std::pair<std::size_t, double>> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path_field = "channel.paths[" + std::to_string(i) + "]";
            Section p(list[i], path_field);
            p.allow({"gain", "delay", "doppler"});
            PathSpec spec;
            spec.gain = p.has("gain") ? parse_gain(p.raw("gain"), p.field("gain")) : Complex{1.0, 0.0};
            spec.delay = p.count("delay", 0);
            spec.doppler = p.number("doppler", 0.0);
            if (!(std::abs(spec.gain) > 0.0) || !std::isfinite(std::abs(spec.gain)))
                throw ValidationError(p.field("gain"), "gain must be finite and non-zero");
            if (!seen.emplace(spec.delay, spec.doppler).second)
                throw ValidationError(path_field, "duplicate (delay, doppler) pair");
            cfg.paths.push_back(spec);
        }
    } else {
        Section r(ch.raw("random"), "channel.random");
        r.allow({"num_paths", "l_max", "alpha_max", "fractional"});
        RandomChannelProfile prof;
        prof.num_paths = r.count("num_paths");
        prof.l_max = r.count("l_max");
        prof.alpha_max = r.number("alpha_max");
        prof.fractional = r.boolean("fractional", false);
        if (prof.num_paths == 0) throw ValidationError(r.field("num_paths"), "must be positive");
        if (prof.alpha_max < 0.0) throw ValidationError(r.field("alpha_max"), "must be >= 0");
        if (!prof.fractional && prof.alpha_max != std::floor(prof.alpha_max))
            throw ValidationError(r.field("alpha_max"), "must be an integer unless fractional");
        if (!prof.fractional &&
            static_cast<double>(prof.num_paths) >
                static_cast<double>(prof.l_max + 1) * (2.0 * prof.alpha_max + 1.0))
            throw ValidationError(r.field("num_paths"), "exceeds the delay-Doppler grid");
        cfg.random_profile = prof;
    }
}

void parse_shift(const json& node, ShiftSweepSpec& shift) {
    Section s(node, "shift");
    s.allow({"n", "shears", "delays", "dopplers", "window_len", "hop", "fft_len"});
    shift.n = s.count("n", shift.n);
    if (s.has("shears")) {
        shift.shears.clear();
        for (const auto& v : s.array("shears")) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ValidationError(s.field("shears"), "expected non-negative integers");
            shift.shears.push_back(v.get<long long>());
        }
    }
    if (s.has("delays")) {
        shift.delays.clear();
        for (const auto& v : s.array("delays")) {
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw ValidationError(s.field("delays"), "expected non-negative integers");
            shift.delays.push_back(v.get<std::size_t>());
        }
    }
    if (s.has("dopplers")) {
        shift.dopplers.clear();
        for (const auto& v : s.array("dopplers")) {
            if (!v.is_number()) throw ValidationError(s.field("dopplers"), "expected numbers");
            shift.dopplers.push_back(v.get<double>());
        }
    }
    auto& sg = shift.spectrogram;
    sg.window_len = s.count("window_len", sg.window_len);
    sg.hop = s.count("hop", sg.hop);
    sg.fft_len = s.count("fft_len", shift.n);
    try {
        sg.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError("shift", e.what());
    }
    if (shift.n < 2) throw ValidationError(s.field("n"), "must be >= 2");
    if (4 * sg.window_len > shift.n) throw ValidationError(s.field("window_len"), "must be <= n/4");
    for (auto d : shift.delays)
        if (d >= shift.n) throw ValidationError(s.field("delays"), "delays must be < n");
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("config line " + std::to_string(line) + ": " + e.what(), line);
    }

    RunConfig run;
    auto& cfg = run.experiment;
    Section root(doc, "");
    root.allow({"id", "waveform", "channel", "modulation", "snr_db", "trials", "seed", "equalizer",
                "csi", "pilot", "sensing", "shift", "sparsity_threshold"});

    cfg.id = root.string("id", std::string("experiment"));
    if (!root.has("channel")) throw ValidationError("channel", "missing required key");
    parse_channel(root.raw("channel"), cfg);

    if (!root.has("waveform")) throw ValidationError("waveform", "missing required key");
    Section wf(root.raw("waveform"), "waveform");
    wf.allow({"n", "c1", "c2", "cpp_len"});
    auto& p = cfg.waveform;
    p.n = wf.count("n");
    if (p.n < 2) throw ValidationError("waveform.n", "must be >= 2");
    p.c2 = wf.number("c2", 0.0);
    if (p.c2 < 0.0) throw ValidationError("waveform.c2", "must be >= 0");
    p.cpp_len = wf.count("cpp_len", cfg.channel_l_max());
    if (p.cpp_len >= p.n) throw ValidationError("waveform.cpp_len", "must be < n");
    if (p.cpp_len < cfg.channel_l_max())
        throw ValidationError("waveform.cpp_len", "shorter than the maximum path delay " +
                                                      std::to_string(cfg.channel_l_max()));
    if (!wf.has("c1") || (wf.raw("c1").is_string() && wf.raw("c1").get<std::string>() == "auto")) {
        run.c1_auto = true;
        try {
            p.c1 = min_c1_full_diversity(cfg.channel_alpha_max(), p.n);
        } catch (const std::invalid_argument& e) {
            throw ValidationError("waveform.c1", e.what());
        }
    } else if (wf.raw("c1").is_string()) {
        throw ValidationError("waveform.c1", "expected a number or \"auto\"");
    } else {
        p.c1 = wf.number("c1");
        if (p.c1 < 0.0) throw ValidationError("waveform.c1", "must be >= 0");
    }

    cfg.modulation = root.string("modulation", std::string("QPSK"));
    try {
        Constellation::by_name(cfg.modulation);
    } catch (const std::invalid_argument& e) {
        throw ValidationError("modulation", e.what());
    }

    for (const auto& v : root.array("snr_db")) {
        if (v.is_string() && v.get<std::string>() == "inf")
            cfg.snr_db.push_back(std::numeric_limits<double>::infinity());
        else if (v.is_number())
            cfg.snr_db.push_back(v.get<double>());
        else
            throw ValidationError("snr_db", "expected numbers or \"inf\"");
    }
    if (cfg.snr_db.empty()) throw ValidationError("snr_db", "list is empty");
    cfg.trials = root.count("trials");
    if (cfg.trials == 0) throw ValidationError("trials", "must be positive");
    if (!root.has("seed")) throw ValidationError("seed", "missing required key");
    if (!root.raw("seed").is_number_unsigned())
        throw ValidationError("seed", "expected an unsigned 64-bit integer");
    cfg.seed = root.raw("seed").get<std::uint64_t>();

    if (root.has("equalizer")) {
        Section eq(root.raw("equalizer"), "equalizer");
        eq.allow({"kind", "band_halfwidth"});
        try {
            cfg.equalizer.kind = equalizer_kind_from_string(eq.string("kind", std::string("MMSE")));
        } catch (const std::invalid_argument& e) {
            throw ValidationError("equalizer.kind", e.what());
        }
        cfg.equalizer.band_halfwidth = eq.count("band_halfwidth", 0);
        if (cfg.equalizer.band_halfwidth >= p.n)
            throw ValidationError("equalizer.band_halfwidth", "must be < n");
    }

    const auto csi = root.string("csi", std::string("perfect"));
    if (csi == "perfect")
        cfg.csi = CsiMode::Perfect;
    else if (csi == "estimated")
        cfg.csi = CsiMode::Estimated;
    else
        throw ValidationError("csi", "expected \"perfect\" or \"estimated\"");

    if (root.has("pilot")) {
        Section pl(root.raw("pilot"), "pilot");
        pl.allow({"guard", "boost_db", "threshold"});
        if (pl.has("guard")) cfg.pilot.guard = pl.count("guard");
        cfg.pilot.boost_db = pl.number("boost_db", 0.0);
        cfg.pilot.threshold = pl.number("threshold", 0.2);
        if (!(cfg.pilot.threshold > 0.0 && cfg.pilot.threshold < 1.0))
            throw ValidationError("pilot.threshold", "must lie in (0, 1)");
    }
    if (cfg.csi == CsiMode::Estimated) {
        if (!diversity_region_fits(cfg.channel_l_max(), cfg.channel_alpha_max(), p.n))
            throw ValidationError("waveform.n", "too small for the channel's delay-Doppler grid");
        const auto need = required_pilot_guard(cfg.channel_l_max(), cfg.channel_alpha_max());
        const auto guard = cfg.pilot.guard.value_or(need);
        if (guard < need)
            throw ValidationError("pilot.guard", "must be >= " + std::to_string(need) +
                                                     " for the channel's delay/Doppler spread");
        if (2 * guard + 1 >= p.n)
            throw ValidationError("pilot.guard", "pilot and guards leave no data symbols");
        const double shear = p.shear();
        if (std::abs(shear - std::round(shear)) > 1e-9)
            throw ValidationError("waveform.c1", "estimated CSI needs 2*n*c1 to be an integer");
    }

    run.sensing.l_max = cfg.channel_l_max();
    run.sensing.alpha_max = cfg.channel_alpha_max();
    if (root.has("sensing")) {
        Section s(root.raw("sensing"), "sensing");
        s.allow({"l_max", "alpha_max"});
        run.sensing.l_max = s.count("l_max", run.sensing.l_max);
        run.sensing.alpha_max = s.count("alpha_max", run.sensing.alpha_max);
    }
    if (2 * run.sensing.l_max > p.n) throw ValidationError("sensing.l_max", "must be <= n/2");
    if (2 * run.sensing.alpha_max > p.n) throw ValidationError("sensing.alpha_max", "must be <= n/2");

    if (root.has("shift")) parse_shift(root.raw("shift"), run.shift);
    run.sparsity_threshold = root.number("sparsity_threshold", 0.01);
    if (!(run.sparsity_threshold > 0.0 && run.sparsity_threshold < 1.0))
        throw ValidationError("sparsity_threshold", "must lie in (0, 1)");

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto colon = msg.find(':');
        throw ValidationError(colon == std::string::npos ? "config" : msg.substr(0, colon),
                              colon == std::string::npos ? msg : msg.substr(colon + 2));
    }
    run.source_json = doc.dump();
    return run;
}

}  // namespace afl::cli
