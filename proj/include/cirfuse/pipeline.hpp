#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cirfuse/calib.hpp"
#include "cirfuse/fusion.hpp"
#include "cirfuse/model.hpp"
#include "cirfuse/spectral.hpp"

namespace cirfuse {

enum class Method { selection, fusion };

/// Sliding-window count convention. `paper` drops the final flush-aligned
/// window so a 965-snapshot recording yields 965 - 800 = 165 hop-1 windows;
/// `full` keeps every window that fits.
enum class WindowCountConvention { paper, full };

struct WindowConfig {
    int window_snapshots = 800;
    int hop_snapshots = 1;
    double nominal_rate_hz = 19.3;
    double resolution_hz = 0.001;
    BandOfInterest band;
    Method method = Method::fusion;
    WindowCountConvention count_convention = WindowCountConvention::paper;
    double rank_tol = 1e-10;

    /// Throws when the window spans fewer than two breathing periods at
    /// the band's lower edge, or on nonsensical fields.
    void validate() const;
};

struct BreathingEstimate {
    std::size_t window_start_index = 0;
    double rate_hz = 0.0;
    double confidence = 0.0;
    Method method = Method::selection;
    std::optional<double> lambda;  ///< fusion only
    bool ok = true;
    std::string note;
};

struct ScenarioReport {
    std::vector<BreathingEstimate> estimates;
    double median_abs_error_hz = 0.0;  ///< NaN when no ground truth
    double median_confidence = 0.0;
    std::optional<double> ground_truth_hz;
    Method method = Method::selection;
};

/// Per-bin complex linear interpolation of a snapshot window onto the
/// uniform grid t0 + n/rate; grid points beyond the last timestamp clamp
/// to the last snapshot.
SnapshotMatrix interpolate_uniform(std::span<const CirSnapshot> window, double nominal_rate_hz);

/// One window: dimension reduction (selection or fusion), PSD peak
/// detection on the configured grid, and the confidence index. A
/// degenerate fusion window yields ok = false instead of throwing.
BreathingEstimate estimate_window(const SnapshotMatrix& matrix, const WindowConfig& cfg);

/// Start indices of the sliding windows over `total_snapshots` snapshots.
std::vector<std::size_t> window_starts(std::size_t total_snapshots, const WindowConfig& cfg);

/// Calibrates, slides the window, estimates each window, and aggregates
/// medians against the recording's ground truth when present.
ScenarioReport run_recording(const CirRecording& recording, const WindowConfig& cfg,
                             const CalibrationConfig& calib_cfg);

/// Both methods on identical calibrated windows: (selection, fusion).
std::pair<ScenarioReport, ScenarioReport> compare_methods(const CirRecording& recording,
                                                          const WindowConfig& cfg,
                                                          const CalibrationConfig& calib_cfg);

/// Median of a sample (average of the two middle values for even sizes);
/// NaN for an empty sample.
double median(std::vector<double> values);

}  // namespace cirfuse
