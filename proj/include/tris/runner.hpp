#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "tris/config.hpp"

namespace tris {

inline constexpr const char* kCsvHeader = "variable,value,received_power_dBm,path_loss_dB,config_digest";

/// CSV text with the fixed header, one row per grid point, newline-terminated.
std::string sweep_csv(const SweepResult& result);

nlohmann::json scenario_to_json(const Scenario& scenario);
nlohmann::json pattern_metrics_to_json(const PatternMetrics& metrics);

struct RunArtifacts {
    std::vector<std::filesystem::path> files;
    nlohmann::json summary;
};

/// Executes every sweep of the run, writing <name>.csv files and summary.json into out_dir.
RunArtifacts run_config(const RunConfig& run, const std::filesystem::path& out_dir);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tris
