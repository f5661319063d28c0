#include "tris/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "tris/error.hpp"

namespace tris {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

struct FieldContext {
    const std::string& key;
    std::size_t line;
    const std::string& source;

    [[noreturn]] void fail(const std::string& message) const { throw ConfigError(source, line, key + ": " + message); }
};

double parse_double(std::string_view text, const FieldContext& ctx) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(v)) {
        ctx.fail("expected a finite number, got '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(std::string_view text, const FieldContext& ctx) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        ctx.fail("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_list(std::string_view text, const FieldContext& ctx) {
    std::vector<double> out;
    std::string item;
    std::istringstream in{std::string(text)};
    while (std::getline(in, item, ',')) {
        std::istringstream words(item);
        std::string w;
        while (words >> w) out.push_back(parse_double(w, ctx));
    }
    if (out.empty()) ctx.fail("expected a list of numbers");
    return out;
}

void require(bool ok, const FieldContext& ctx, const std::string& message) {
    if (!ok) ctx.fail(message);
}

using Setter = std::function<void(ScenarioParams&, const std::string&, const FieldContext&)>;

Setter real(double ScenarioParams::*field, std::function<bool(double)> check, std::string rule) {
    return [field, check = std::move(check), rule = std::move(rule)](ScenarioParams& p, const std::string& value, const FieldContext& ctx) {
        const double v = parse_double(value, ctx);
        require(check(v), ctx, rule + ", got " + value);
        p.*field = v;
    };
}

const std::map<std::string, Setter, std::less<>>& scenario_setters() {
    static const std::map<std::string, Setter, std::less<>> setters = [] {
        std::map<std::string, Setter, std::less<>> m;
        const auto positive = [](double v) { return v > 0.0; };
        const auto non_negative = [](double v) { return v >= 0.0; };
        const auto any = [](double) { return true; };
        m["frequency_ghz"] = real(&ScenarioParams::frequency_ghz, positive, "must be positive");
        m["pitch_x_mm"] = real(&ScenarioParams::pitch_x_mm, positive, "must be positive");
        m["pitch_y_mm"] = real(&ScenarioParams::pitch_y_mm, positive, "must be positive");
        m["pitch_mm"] = [](ScenarioParams& p, const std::string& value, const FieldContext& ctx) {
            const double v = parse_double(value, ctx);
            require(v > 0.0, ctx, "must be positive, got " + value);
            p.pitch_x_mm = p.pitch_y_mm = v;
        };
        m["rows"] = [](ScenarioParams& p, const std::string& value, const FieldContext& ctx) {
            p.rows = parse_unsigned(value, ctx);
            require(p.rows >= 1, ctx, "must be at least 1");
        };
        m["cols"] = [](ScenarioParams& p, const std::string& value, const FieldContext& ctx) {
            p.cols = parse_unsigned(value, ctx);
            require(p.cols >= 1, ctx, "must be at least 1");
        };
        m["tx_distance_m"] = real(&ScenarioParams::tx_distance_m, positive, "must be positive");
        m["tx_zenith_deg"] = real(&ScenarioParams::tx_zenith_deg, [](double v) { return v >= 0.0 && v <= 180.0 && v != 90.0; },
                                  "must lie in [0, 180] degrees and off the array plane");
        m["tx_azimuth_deg"] = real(&ScenarioParams::tx_azimuth_deg, [](double v) { return v >= 0.0 && v < 360.0; }, "must lie in [0, 360) degrees");
        m["rx_distance_m"] = real(&ScenarioParams::rx_distance_m, positive, "must be positive");
        m["rx_zenith_deg"] = real(&ScenarioParams::rx_zenith_deg, [](double v) { return v >= 0.0 && v < 90.0; },
                                  "must lie in [0, 90) degrees from the RX-side normal");
        m["rx_azimuth_deg"] = real(&ScenarioParams::rx_azimuth_deg, [](double v) { return v >= 0.0 && v < 360.0; }, "must lie in [0, 360) degrees");
        m["tx_gain_dbi"] = real(&ScenarioParams::tx_gain_dbi, any, "");
        m["rx_gain_dbi"] = real(&ScenarioParams::rx_gain_dbi, any, "");
        m["tx_pattern_exponent"] = real(&ScenarioParams::tx_pattern_exponent, non_negative, "must be >= 0");
        m["rx_pattern_exponent"] = real(&ScenarioParams::rx_pattern_exponent, non_negative, "must be >= 0");
        m["tx_power_dbm"] = real(&ScenarioParams::tx_power_dbm, any, "");
        m["noise_power_dbm"] = real(&ScenarioParams::noise_power_dbm, any, "");
        m["phase_bits"] = [](ScenarioParams& p, const std::string& value, const FieldContext& ctx) {
            const auto bits = parse_unsigned(value, ctx);
            require(bits >= 1 && bits <= 16, ctx, "must lie in [1, 16]");
            p.phase_bits = static_cast<unsigned>(bits);
        };
        m["phase_offset_deg"] = real(&ScenarioParams::phase_offset_deg, non_negative, "must be >= 0");
        m["unit_current_a"] = [](ScenarioParams& p, const std::string& value, const FieldContext& ctx) {
            const double v = parse_double(value, ctx);
            require(v >= 0.0, ctx, "must be >= 0, got " + value);
            p.unit_current_a = v;
        };
        m["attenuation"] = real(&ScenarioParams::attenuation, [](double v) { return v >= 0.0 && v <= 1.0; }, "must lie in [0, 1]");
        m["jitter_deg"] = real(&ScenarioParams::jitter_deg, non_negative, "must be >= 0");
        m["seed"] = [](ScenarioParams& p, const std::string& value, const FieldContext& ctx) { p.seed = parse_unsigned(value, ctx); };
        return m;
    }();
    return setters;
}

}  // namespace

bool is_scenario_key(std::string_view key) { return scenario_setters().contains(key); }

ConfigDocument parse_config_document(std::string_view text, std::string source) {
    ConfigDocument doc{std::move(source), {}};
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(doc.source, line_no, "unterminated section header");
            std::string_view header = trim(line.substr(1, line.size() - 2));
            ConfigSection section;
            section.line = line_no;
            const auto space = header.find_first_of(" \t");
            section.kind = std::string(header.substr(0, space));
            if (space != std::string_view::npos) section.name = std::string(trim(header.substr(space)));
            if (section.kind == "sweep") {
                if (section.name.empty()) throw ConfigError(doc.source, line_no, "sweep section needs a name, e.g. [sweep fig12]");
                const bool ok = std::all_of(section.name.begin(), section.name.end(),
                                            [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'; });
                if (!ok) throw ConfigError(doc.source, line_no, "sweep name '" + section.name + "' may only use letters, digits, '_' and '-'");
            } else if (section.kind == "scenario" || section.kind == "amplifier") {
                if (!section.name.empty()) throw ConfigError(doc.source, line_no, "[" + section.kind + "] takes no name");
            } else {
                throw ConfigError(doc.source, line_no, "unknown section '" + std::string(header) + "'");
            }
            doc.sections.push_back(std::move(section));
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(doc.source, line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(doc.source, line_no, "missing key before '='");
        if (value.empty()) throw ConfigError(doc.source, line_no, key + ": missing value");
        if (doc.sections.empty()) throw ConfigError(doc.source, line_no, "'" + key + "' appears before any section");
        doc.sections.back().entries.push_back({key, value, line_no});
    }
    return doc;
}

bool ScenarioParams::set(const std::string& key, const std::string& value, std::size_t line, const std::string& source) {
    const auto& setters = scenario_setters();
    const auto it = setters.find(key);
    if (it == setters.end()) return false;
    it->second(*this, value, FieldContext{key, line, source});
    lines[key] = line;
    return true;
}

Scenario ScenarioParams::build(const std::string& source) const {
    auto line_of = [&](const std::string& key) {
        const auto it = lines.find(key);
        return it == lines.end() ? std::size_t{0} : it->second;
    };
    Scenario s;
    s.frequency = frequency_ghz * 1e9;
    s.layout = ArrayLayout{rows, cols, pitch_x_mm * 1e-3, pitch_y_mm * 1e-3};
    s.tx_pose = SphericalPose{tx_distance_m, deg_to_rad(tx_zenith_deg), deg_to_rad(tx_azimuth_deg)};
    const bool tx_in_front = tx_zenith_deg < 90.0;
    s.rx_pose = tx_in_front ? transmission_side_pose(rx_distance_m, deg_to_rad(rx_zenith_deg), deg_to_rad(rx_azimuth_deg))
                            : SphericalPose{rx_distance_m, deg_to_rad(rx_zenith_deg), deg_to_rad(rx_azimuth_deg)};
    s.tx_antenna = AntennaModel{std::pow(10.0, tx_gain_dbi / 10.0), tx_pattern_exponent};
    s.rx_antenna = AntennaModel{std::pow(10.0, rx_gain_dbi / 10.0), rx_pattern_exponent};
    s.tx_power = dbm_to_watts(tx_power_dbm);
    s.noise_variance = dbm_to_watts(noise_power_dbm);
    s.codebook = PhaseCodebook{phase_bits, deg_to_rad(phase_offset_deg)};
    s.attenuation = attenuation;
    if (jitter_deg > 0.0) s.jitter = PhaseJitterModel{deg_to_rad(jitter_deg), seed};

    // the measured curve is a per-unit property of the 32-unit hardware, whatever the layout
    try {
        if (calibration.empty()) {
            AmplifierModel def = AmplifierModel::measured_default();
            s.amplifier = max_current_a ? AmplifierModel(def.calibration(), *max_current_a) : def;
        } else {
            s.amplifier = AmplifierModel(calibration, max_current_a.value_or(kDefaultMaxUnitCurrent));
        }
    } catch (const Error& e) {
        throw ConfigError(source, line_of("amplifier"), std::string("amplifier: ") + e.what());
    }
    s.unit_current = unit_current_a.value_or(kArrayCurrentHigh / 32.0);

    try {
        s.codebook.validate();
    } catch (const Error& e) {
        throw ConfigError(source, line_of("phase_offset_deg"), std::string("phase_offset_deg: ") + e.what());
    }
    try {
        s.amplifier.gain_db(s.unit_current);
    } catch (const Error& e) {
        throw ConfigError(source, line_of("unit_current_a"), std::string("unit_current_a: ") + e.what());
    }
    try {
        s.validate();
    } catch (const Error& e) {
        throw ConfigError(source, 0, std::string("scenario: ") + e.what());
    }
    return s;
}

void apply_overrides(ScenarioParams& params, const std::vector<std::string>& assignments) {
    for (const std::string& a : assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw ConfigError("--set", 0, "expected key=value, got '" + a + "'");
        const std::string key(trim(std::string_view(a).substr(0, eq)));
        const std::string value(trim(std::string_view(a).substr(eq + 1)));
        if (!params.set(key, value, 0, "--set")) throw ConfigError("--set", 0, "unknown scenario key '" + key + "'");
    }
}

namespace {

void read_amplifier(const ConfigSection& section, ScenarioParams& params, const std::string& source) {
    params.lines["amplifier"] = section.line;
    for (const ConfigEntry& e : section.entries) {
        const FieldContext ctx{e.key, e.line, source};
        if (e.key == "max_current_a") {
            const double v = parse_double(e.value, ctx);
            require(v > 0.0, ctx, "must be positive");
            params.max_current_a = v;
        } else if (e.key == "point") {
            std::istringstream in(e.value);
            std::string current, gain, extra;
            if (!(in >> current >> gain) || (in >> extra)) ctx.fail("expected '<current A> <gain dB>'");
            params.calibration.push_back({parse_double(current, ctx), parse_double(gain, ctx)});
        } else {
            ctx.fail("unknown amplifier key");
        }
    }
}

SweepDefinition read_sweep(const ConfigSection& section, const ScenarioParams& base, const std::string& source) {
    SweepDefinition def;
    def.name = section.name;
    def.line = section.line;
    def.params = base;
    bool has_variable = false, has_start = false, has_stop = false, has_step = false, has_currents = false;
    std::set<std::string> seen;
    for (const ConfigEntry& e : section.entries) {
        const FieldContext ctx{e.key, e.line, source};
        if (!seen.insert(e.key).second) ctx.fail("duplicate key");
        if (def.params.set(e.key, e.value, e.line, source)) continue;
        if (e.key == "variable") {
            try {
                def.spec.variable = parse_sweep_variable(e.value);
            } catch (const InvalidArgument& err) {
                ctx.fail(err.what());
            }
            has_variable = true;
        } else if (e.key == "start") {
            def.spec.start = parse_double(e.value, ctx);
            has_start = true;
        } else if (e.key == "stop") {
            def.spec.stop = parse_double(e.value, ctx);
            has_stop = true;
        } else if (e.key == "step") {
            def.spec.step = parse_double(e.value, ctx);
            require(def.spec.step > 0.0, ctx, "must be positive");
            has_step = true;
        } else if (e.key == "currents") {
            def.spec.currents = parse_list(e.value, ctx);
            for (double c : def.spec.currents) require(c >= 0.0, ctx, "currents must be non-negative");
            has_currents = true;
        } else if (e.key == "beamforming") {
            try {
                def.spec.beamforming.method = parse_beamforming_method(e.value);
            } catch (const InvalidArgument& err) {
                ctx.fail(err.what());
            }
        } else if (e.key == "passes") {
            def.spec.beamforming.passes = parse_unsigned(e.value, ctx);
            require(def.spec.beamforming.passes >= 1, ctx, "must be at least 1");
        } else if (e.key == "max_rounds") {
            def.spec.beamforming.max_rounds = parse_unsigned(e.value, ctx);
            require(def.spec.beamforming.max_rounds >= 1, ctx, "must be at least 1");
        } else if (e.key == "phase_constant_deg") {
            def.spec.beamforming.phase_constant = deg_to_rad(parse_double(e.value, ctx));
        } else if (e.key == "steering_deg") {
            def.spec.steering_deg = parse_double(e.value, ctx);
            require(def.spec.steering_deg > -90.0 && def.spec.steering_deg < 90.0, ctx, "must lie strictly inside (-90, 90) degrees");
        } else if (e.key == "reference") {
            def.reference = parse_double(e.value, ctx);
        } else {
            ctx.fail("unknown sweep key");
        }
    }
    if (!has_variable) throw ConfigError(source, section.line, "sweep '" + def.name + "' needs 'variable'");
    if (def.spec.variable == SweepVariable::AmplifierCurrent) {
        if (!has_currents) throw ConfigError(source, section.line, "sweep '" + def.name + "' needs 'currents'");
    } else {
        if (!(has_start && has_stop && has_step)) throw ConfigError(source, section.line, "sweep '" + def.name + "' needs 'start', 'stop' and 'step'");
        if (def.spec.start > def.spec.stop) throw ConfigError(source, section.line, "sweep '" + def.name + "': start exceeds stop");
        const double lo = def.spec.start, hi = def.spec.stop;
        switch (def.spec.variable) {
            case SweepVariable::RxDistance:
                if (!(lo > 0.0)) throw ConfigError(source, section.line, "sweep '" + def.name + "': distances must be positive");
                break;
            case SweepVariable::RxZenith:
                if (!(lo >= 0.0 && hi < 90.0)) throw ConfigError(source, section.line, "sweep '" + def.name + "': zenith angles must lie in [0, 90) degrees");
                break;
            case SweepVariable::PatternAngle:
                if (!(lo > -90.0 && hi < 90.0)) throw ConfigError(source, section.line, "sweep '" + def.name + "': pattern angles must lie strictly inside (-90, 90) degrees");
                break;
            case SweepVariable::AmplifierCurrent: break;
        }
    }
    def.scenario = def.params.build(source);
    def.spec.beamforming.seed = def.params.seed;
    return def;
}

}  // namespace

RunConfig parse_run_config(std::string_view text, std::string source, std::optional<std::uint64_t> seed_override) {
    const ConfigDocument doc = parse_config_document(text, std::move(source));
    RunConfig run;
    run.source = doc.source;

    std::set<std::string> seen_kinds;
    for (const ConfigSection& section : doc.sections) {
        if (section.kind == "sweep") continue;
        if (!seen_kinds.insert(section.kind).second) throw ConfigError(doc.source, section.line, "duplicate [" + section.kind + "] section");
        if (section.kind == "amplifier") {
            read_amplifier(section, run.params, doc.source);
            continue;
        }
        std::set<std::string> seen;
        for (const ConfigEntry& e : section.entries) {
            if (!seen.insert(e.key).second) throw ConfigError(doc.source, e.line, e.key + ": duplicate key");
            if (!run.params.set(e.key, e.value, e.line, doc.source)) throw ConfigError(doc.source, e.line, e.key + ": unknown scenario key");
        }
    }
    if (seed_override) run.params.seed = *seed_override;
    run.seed = run.params.seed;
    run.scenario = run.params.build(doc.source);

    std::set<std::string> names;
    for (const ConfigSection& section : doc.sections) {
        if (section.kind != "sweep") continue;
        if (!names.insert(section.name).second) throw ConfigError(doc.source, section.line, "duplicate sweep name '" + section.name + "'");
        SweepDefinition def = read_sweep(section, run.params, doc.source);
        if (seed_override) {
            def.params.seed = *seed_override;
            def.scenario = def.params.build(doc.source);
            def.spec.beamforming.seed = *seed_override;
        }
        run.sweeps.push_back(std::move(def));
    }
    return run;
}

RunConfig load_run_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.filename().string(), seed_override);
}

}  // namespace tris
