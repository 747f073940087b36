#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cirfuse/model.hpp"
#include "cirfuse/pipeline.hpp"

namespace cirfuse {

/// Full synthetic scenario: channel, motion, artifacts, and acquisition
/// parameters for generate_recording.
struct Scenario {
    MultipathChannel channel;
    EmulatorMotion motion;
    ArtifactSpec artifacts;
    double duration_s = 50.0;
    double nominal_rate_hz = 19.3;
    std::uint64_t seed = 1;
    std::string label;
};

/// Runs generate_recording and stamps the label into the metadata.
CirRecording simulate(const Scenario& scenario);

/// Line-oriented recording format: one header line (bin count, nominal
/// rate, optional ground truth, label) and one line per snapshot with the
/// timestamp followed by interleaved real/imag pairs. Values are printed
/// with 17 significant digits so parse(serialize(r)) == r.
void write_recording(std::ostream& os, const CirRecording& recording);
void write_recording(const std::filesystem::path& path, const CirRecording& recording);
CirRecording read_recording(std::istream& is);
CirRecording read_recording(const std::filesystem::path& path);

/// JSON scenario schema; unknown keys are errors.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const std::filesystem::path& path, const Scenario& scenario);

/// Per-window CSV: start index, method, rate, confidence, lambda, ok.
void write_report_csv(std::ostream& os, const ScenarioReport& report);

/// Medians, ground truth, and a config echo.
nlohmann::json summary_json(const ScenarioReport& report, const WindowConfig& cfg,
                            const CalibrationConfig& calib_cfg);

std::string method_name(Method method);

}  // namespace cirfuse
