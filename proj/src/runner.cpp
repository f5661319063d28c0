#include "tris/runner.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "tris/error.hpp"

namespace tris {

namespace {

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::size_t reference_row(const SweepResult& result, const std::optional<double>& reference, const std::string& name) {
    if (!reference) return 0;
    for (std::size_t k = 0; k < result.rows.size(); ++k) {
        if (std::abs(result.rows[k].value - *reference) <= 1e-9 * std::max(1.0, std::abs(*reference))) return k;
    }
    throw ConfigError("", 0, "sweep '" + name + "': reference " + fmt::format("{}", *reference) + " is not a grid point");
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
    std::string out = std::string(kCsvHeader) + "\n";
    const std::string_view variable = to_string(result.variable);
    for (const SweepRow& row : result.rows) {
        out += fmt::format("{},{:.6f},{:.6f},{:.6f},{}\n", variable, row.value, row.received_power_dbm, row.path_loss_db, row.config_digest);
    }
    return out;
}

nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json calibration = nlohmann::json::array();
    for (const auto& p : s.amplifier.calibration()) calibration.push_back({{"current_a", p.current}, {"gain_db", p.gain_db}});
    nlohmann::json j = {
        {"frequency_hz", s.frequency},
        {"wavelength_m", s.wavelength()},
        {"layout", {{"rows", s.layout.n_rows}, {"cols", s.layout.n_cols}, {"pitch_x_m", s.layout.pitch_x}, {"pitch_y_m", s.layout.pitch_y}}},
        {"tx_pose", {{"r_m", s.tx_pose.r}, {"theta_rad", s.tx_pose.theta}, {"phi_rad", s.tx_pose.phi}}},
        {"rx_pose", {{"r_m", s.rx_pose.r}, {"theta_rad", s.rx_pose.theta}, {"phi_rad", s.rx_pose.phi}}},
        {"tx_antenna", {{"boresight_gain", s.tx_antenna.boresight_gain}, {"pattern_exponent", s.tx_antenna.pattern_exponent}}},
        {"rx_antenna", {{"boresight_gain", s.rx_antenna.boresight_gain}, {"pattern_exponent", s.rx_antenna.pattern_exponent}}},
        {"codebook", {{"bits", s.codebook.bits}, {"offset_rad", s.codebook.offset}}},
        {"amplifier", {{"calibration", calibration}, {"max_current_a", s.amplifier.max_current()}}},
        {"tx_power_w", s.tx_power},
        {"noise_variance_w", s.noise_variance},
        {"unit_current_a", s.unit_current},
        {"attenuation", s.attenuation},
    };
    if (s.jitter) {
        j["jitter"] = {{"max_error_rad", s.jitter->max_error}, {"seed", s.jitter->seed}};
    } else {
        j["jitter"] = nullptr;
    }
    return j;
}

nlohmann::json pattern_metrics_to_json(const PatternMetrics& m) {
    return {
        {"peak_angle_deg", m.peak_angle_deg},
        {"peak_power_dbm", finite_or_null(m.peak_power_dbm)},
        {"hpbw_deg", finite_or_null(m.hpbw_deg)},
        {"peak_to_sidelobe_db", finite_or_null(m.peak_to_sidelobe_db)},
    };
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

RunArtifacts run_config(const RunConfig& run, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    RunArtifacts artifacts;
    nlohmann::json sweeps = nlohmann::json::array();

    for (const SweepDefinition& def : run.sweeps) {
        SweepResult result;
        nlohmann::json entry;
        if (def.spec.variable == SweepVariable::PatternAngle) {
            const auto grid = sweep_grid(def.spec.start, def.spec.stop, def.spec.step);
            const PatternResult pattern = radiation_pattern(def.scenario, def.spec.steering_deg, grid, def.spec.beamforming);
            result.variable = SweepVariable::PatternAngle;
            for (std::size_t k = 0; k < grid.size(); ++k) {
                result.rows.push_back({grid[k], pattern.received_power_dbm[k], pattern.path_loss_db[k], pattern.config_digest});
            }
            entry["steering_deg"] = def.spec.steering_deg;
            entry["metrics"] = pattern_metrics_to_json(pattern.metrics);
        } else {
            result = run_sweep(def.scenario, def.spec);
        }

        const std::string csv = sweep_csv(result);
        const std::filesystem::path csv_path = out_dir / (def.name + ".csv");
        write_text_file(csv_path, csv);
        artifacts.files.push_back(csv_path);

        const std::size_t ref = reference_row(result, def.reference, def.name);
        nlohmann::json pl_delta = nlohmann::json::array();
        nlohmann::json pr_delta = nlohmann::json::array();
        for (const SweepRow& row : result.rows) {
            pl_delta.push_back(finite_or_null(row.path_loss_db - result.rows[ref].path_loss_db));
            pr_delta.push_back(finite_or_null(row.received_power_dbm - result.rows[ref].received_power_dbm));
        }
        entry["name"] = def.name;
        entry["variable"] = to_string(def.spec.variable);
        entry["beamforming"] = to_string(def.spec.beamforming.method);
        entry["csv"] = csv_path.filename().string();
        entry["csv_digest"] = digest_hex(csv);
        entry["rows"] = result.rows.size();
        entry["reference_value"] = result.rows[ref].value;
        entry["path_loss_delta_db"] = pl_delta;
        entry["received_power_delta_db"] = pr_delta;
        entry["scenario"] = scenario_to_json(def.scenario);
        sweeps.push_back(std::move(entry));
    }

    artifacts.summary = {
        {"source", run.source},
        {"seed", run.seed},
        {"scenario", scenario_to_json(run.scenario)},
        {"sweeps", sweeps},
    };
    const std::filesystem::path summary_path = out_dir / "summary.json";
    write_text_file(summary_path, artifacts.summary.dump(2) + "\n");
    artifacts.files.push_back(summary_path);
    return artifacts;
}

}  // namespace tris
