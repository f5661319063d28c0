// trisim: command-line front end for the transmissive RIS link simulator.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tris/config.hpp"
#include "tris/error.hpp"
#include "tris/runner.hpp"

namespace {

constexpr const char* kSeedEnv = "TRIS_SEED";

struct CommonOptions {
    std::string config;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string method = "quantized";
    std::size_t passes = 4;
    std::size_t max_rounds = 50;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_method = true) {
    cmd->add_option("--config", o.config, "Config file providing [scenario]/[amplifier] sections")->check(CLI::ExistingFile);
    cmd->add_option("--set", o.overrides, "Scenario override key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Seed for feedback noise and jitter (overrides " + std::string(kSeedEnv) + ")");
    cmd->add_option("--out", o.out, "Output directory (default: CSV on stdout)");
    if (with_method) {
        cmd->add_option("--method", o.method, "Beamforming: none, continuous, quantized, blind, greedy")
            ->check(CLI::IsMember({"none", "continuous", "quantized", "blind", "greedy"}));
        cmd->add_option("--passes", o.passes, "Blind search passes")->check(CLI::PositiveNumber);
        cmd->add_option("--max-rounds", o.max_rounds, "Greedy search round limit")->check(CLI::PositiveNumber);
    }
}

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return flag;
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw tris::ConfigError(kSeedEnv, 0, "expected a non-negative integer, got '" + std::string(env) + "'");
    }
    return std::nullopt;
}

tris::Scenario scenario_from(const CommonOptions& o, std::uint64_t& seed_out) {
    tris::ScenarioParams params;
    if (!o.config.empty()) params = tris::load_run_config(o.config).params;
    tris::apply_overrides(params, o.overrides);
    if (const auto seed = resolve_seed(o.seed)) params.seed = *seed;
    seed_out = params.seed;
    return params.build(o.config.empty() ? "--set" : o.config);
}

tris::BeamformingOptions beam_options(const CommonOptions& o, std::uint64_t seed) {
    tris::BeamformingOptions b;
    b.method = tris::parse_beamforming_method(o.method);
    b.passes = o.passes;
    b.max_rounds = o.max_rounds;
    b.seed = seed;
    return b;
}

void emit(const CommonOptions& o, const std::string& name, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(o.out);
    const auto path = std::filesystem::path(o.out) / name;
    tris::write_text_file(path, text);
    std::cerr << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Active transmissive RIS link simulator"};
    app.require_subcommand(1);

    CommonOptions dist_opt, angle_opt, gain_opt, pattern_opt, beam_opt;
    double d_start = 0.5, d_stop = 5.0, d_step = 0.5;
    double a_start = 0.0, a_stop = 60.0, a_step = 10.0;
    std::vector<double> currents{tris::kArrayCurrentLow, tris::kArrayCurrentHigh};
    double steering = 0.0, p_start = -89.0, p_stop = 89.0, p_step = 0.5;

    auto* dist = app.add_subcommand("sweep-distance", "Path loss versus RX distance on the RX-side normal");
    add_common(dist, dist_opt);
    dist->add_option("--start", d_start, "First RX distance (m)");
    dist->add_option("--stop", d_stop, "Last RX distance (m)");
    dist->add_option("--step", d_step, "Distance step (m)");

    auto* angle = app.add_subcommand("sweep-angle", "Path loss versus RX zenith angle");
    add_common(angle, angle_opt);
    angle->add_option("--start", a_start, "First zenith (deg)");
    angle->add_option("--stop", a_stop, "Last zenith (deg)");
    angle->add_option("--step", a_step, "Zenith step (deg)");

    auto* gain = app.add_subcommand("sweep-gain", "Received power versus array supply current");
    add_common(gain, gain_opt);
    gain->add_option("--currents", currents, "Array-level supply currents (A), comma separated")->delimiter(',');

    auto* pattern = app.add_subcommand("pattern", "Radiation pattern cut of a frozen steered beam");
    add_common(pattern, pattern_opt);
    pattern->add_option("--steering", steering, "Steering angle (deg)");
    pattern->add_option("--start", p_start, "First observation angle (deg)");
    pattern->add_option("--stop", p_stop, "Last observation angle (deg)");
    pattern->add_option("--step", p_step, "Observation step (deg)");

    auto* beam = app.add_subcommand("beamform", "Optimize the phase configuration for the scenario's RX and report it");
    add_common(beam, beam_opt);

    std::string run_path;
    std::string run_out = "out";
    std::optional<std::uint64_t> run_seed;
    auto* run = app.add_subcommand("run", "Execute every sweep declared in a config file");
    run->add_option("config", run_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "Output directory");
    run->add_option("--seed", run_seed, "Seed override (also " + std::string(kSeedEnv) + ")");

    CLI11_PARSE(app, argc, argv);

    try {
        std::uint64_t seed = 0;
        if (*dist) {
            tris::SweepSpec spec{tris::SweepVariable::RxDistance, d_start, d_stop, d_step};
            const auto base = scenario_from(dist_opt, seed);
            spec.beamforming = beam_options(dist_opt, seed);
            emit(dist_opt, "sweep-distance.csv", tris::sweep_csv(tris::distance_sweep(base, spec)));
        } else if (*angle) {
            tris::SweepSpec spec{tris::SweepVariable::RxZenith, a_start, a_stop, a_step};
            const auto base = scenario_from(angle_opt, seed);
            spec.beamforming = beam_options(angle_opt, seed);
            emit(angle_opt, "sweep-angle.csv", tris::sweep_csv(tris::angle_sweep(base, spec)));
        } else if (*gain) {
            const auto base = scenario_from(gain_opt, seed);
            emit(gain_opt, "sweep-gain.csv", tris::sweep_csv(tris::gain_sweep(base, currents, beam_options(gain_opt, seed))));
        } else if (*pattern) {
            const auto base = scenario_from(pattern_opt, seed);
            const auto grid = tris::sweep_grid(p_start, p_stop, p_step);
            const auto result = tris::radiation_pattern(base, steering, grid, beam_options(pattern_opt, seed));
            tris::SweepResult rows{tris::SweepVariable::PatternAngle, {}};
            for (std::size_t k = 0; k < grid.size(); ++k) {
                rows.rows.push_back({grid[k], result.received_power_dbm[k], result.path_loss_db[k], result.config_digest});
            }
            emit(pattern_opt, "pattern.csv", tris::sweep_csv(rows));
            nlohmann::json metrics = tris::pattern_metrics_to_json(result.metrics);
            metrics["steering_deg"] = steering;
            if (pattern_opt.out.empty()) {
                std::cerr << metrics.dump() << "\n";
            } else {
                emit(pattern_opt, "pattern.json", metrics.dump(2) + "\n");
            }
        } else if (*beam) {
            const auto base = scenario_from(beam_opt, seed);
            const tris::LinkBudget link(base);
            const auto applied = tris::apply_beamforming(link, beam_options(beam_opt, seed));
            const auto states = link.states(std::vector<std::size_t>(link.size(), 0));
            const double power = link.received_power(states, applied.phases);
            nlohmann::json j;
            j["method"] = beam_opt.method;
            j["received_power_dbm"] = tris::watts_to_dbm(power);
            j["path_loss_db"] = tris::power_to_db(link.path_loss(states, applied.phases));
            j["min_path_loss_db"] = tris::power_to_db(link.min_path_loss());
            j["feedback_queries"] = applied.feedback_queries;
            j["config_digest"] = applied.digest;
            j["phases_deg"] = nlohmann::json::array();
            for (double p : applied.phases) j["phases_deg"].push_back(tris::rad_to_deg(p));
            if (applied.configuration) {
                const auto& c = *applied.configuration;
                nlohmann::json grid = nlohmann::json::array();
                nlohmann::json words = nlohmann::json::array();
                for (std::size_t r = 0; r < c.rows(); ++r) {
                    nlohmann::json row = nlohmann::json::array();
                    nlohmann::json wrow = nlohmann::json::array();
                    for (std::size_t col = 0; col < c.cols(); ++col) {
                        row.push_back(c.at(r, col));
                        if (base.codebook.bits == 2) wrow.push_back(tris::encode_control(c.at(r, col)).to_string());
                    }
                    grid.push_back(row);
                    if (base.codebook.bits == 2) words.push_back(wrow);
                }
                j["phase_indices"] = grid;
                if (base.codebook.bits == 2) j["control_words"] = words;
            }
            emit(beam_opt, "beamform.json", j.dump(2) + "\n");
        } else if (*run) {
            const auto cfg = tris::load_run_config(run_path, resolve_seed(run_seed));
            const auto artifacts = tris::run_config(cfg, run_out);
            for (const auto& f : artifacts.files) std::cerr << "wrote " << f.string() << "\n";
        }
    } catch (const tris::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
