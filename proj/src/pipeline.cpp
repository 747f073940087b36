#include "cirfuse/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cirfuse {

void WindowConfig::validate() const {
    if (window_snapshots < 2) throw std::invalid_argument("window: need at least 2 snapshots");
    if (hop_snapshots < 1) throw std::invalid_argument("window: hop must be >= 1");
    if (nominal_rate_hz <= 0.0) throw std::invalid_argument("window: rate must be positive");
    if (resolution_hz <= 0.0) throw std::invalid_argument("window: resolution must be positive");
    if (band.f_low_hz <= 0.0 || band.f_high_hz <= band.f_low_hz) {
        throw std::invalid_argument("window: invalid band");
    }
    const double duration_s = window_snapshots / nominal_rate_hz;
    if (duration_s * band.f_low_hz < 2.0) {
        throw std::invalid_argument("window: shorter than two breathing periods at the band edge");
    }
}

SnapshotMatrix interpolate_uniform(std::span<const CirSnapshot> window, double nominal_rate_hz) {
    if (window.size() < 2) throw std::invalid_argument("interpolate_uniform: need >= 2 snapshots");
    const std::size_t n_bins = window.front().bins.size();
    for (std::size_t i = 1; i < window.size(); ++i) {
        if (window[i].timestamp_s <= window[i - 1].timestamp_s) {
            throw std::invalid_argument("interpolate_uniform: timestamps not strictly increasing");
        }
        if (window[i].bins.size() != n_bins) {
            throw std::invalid_argument("interpolate_uniform: inconsistent bin count");
        }
    }

    const std::size_t n = window.size();
    SnapshotMatrix out;
    out.sample_rate_hz = nominal_rate_hz;
    out.data = CMat(n, n_bins);

    const double t0 = window.front().timestamp_s;
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + static_cast<double>(i) / nominal_rate_hz;
        if (t >= window.back().timestamp_s) {
            for (std::size_t b = 0; b < n_bins; ++b) out.data(i, b) = window.back().bins[b];
            continue;
        }
        while (seg + 2 < n && window[seg + 1].timestamp_s <= t) ++seg;
        const double ta = window[seg].timestamp_s;
        const double tb = window[seg + 1].timestamp_s;
        const double alpha = (t - ta) / (tb - ta);
        for (std::size_t b = 0; b < n_bins; ++b) {
            out.data(i, b) = (1.0 - alpha) * window[seg].bins[b] + alpha * window[seg + 1].bins[b];
        }
    }
    return out;
}

BreathingEstimate estimate_window(const SnapshotMatrix& matrix, const WindowConfig& cfg) {
    cfg.validate();
    if (matrix.data.rows != static_cast<std::size_t>(cfg.window_snapshots)) {
        throw std::invalid_argument("estimate_window: row count != window_snapshots");
    }
    const DftPlan plan(matrix.data.rows, matrix.sample_rate_hz, cfg.band);

    BreathingEstimate est;
    est.method = cfg.method;
    std::vector<cplx> x;
    try {
        if (cfg.method == Method::selection) {
            x = select_bin(matrix, plan).second;
        } else {
            auto [weights, fused] = fuse(matrix, plan, cfg.rank_tol);
            est.lambda = weights.lambda;
            x = std::move(fused);
        }
    } catch (const DegenerateWindow& e) {
        est.ok = false;
        est.note = e.what();
        est.rate_hz = std::numeric_limits<double>::quiet_NaN();
        return est;
    }

    const PsdSpectrum spec = psd_on_grid(x, matrix.sample_rate_hz, cfg.band, cfg.resolution_hz);
    const auto [freq, value] = detect_peak(spec);
    est.rate_hz = freq;
    est.confidence = confidence_index(spec);
    if (value <= 0.0) {
        est.ok = false;
        est.note = "flat spectrum";
    }
    return est;
}

std::vector<std::size_t> window_starts(std::size_t total_snapshots, const WindowConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.window_snapshots);
    const auto hop = static_cast<std::size_t>(cfg.hop_snapshots);
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + n <= total_snapshots; s += hop) starts.push_back(s);
    if (cfg.count_convention == WindowCountConvention::paper && starts.size() > 1 &&
        starts.back() + n == total_snapshots) {
        starts.pop_back();
    }
    return starts;
}

namespace {

ScenarioReport aggregate(std::vector<BreathingEstimate> estimates, Method method,
                         std::optional<double> truth) {
    ScenarioReport report;
    report.method = method;
    report.ground_truth_hz = truth;
    std::vector<double> errors;
    std::vector<double> confidences;
    for (const BreathingEstimate& e : estimates) {
        if (!e.ok) continue;
        confidences.push_back(e.confidence);
        if (truth) errors.push_back(std::abs(e.rate_hz - *truth));
    }
    report.estimates = std::move(estimates);
    report.median_confidence = median(std::move(confidences));
    report.median_abs_error_hz =
        truth ? median(std::move(errors)) : std::numeric_limits<double>::quiet_NaN();
    return report;
}

}  // namespace

ScenarioReport run_recording(const CirRecording& recording, const WindowConfig& cfg,
                             const CalibrationConfig& calib_cfg) {
    cfg.validate();
    if (recording.snapshots.size() < static_cast<std::size_t>(cfg.window_snapshots)) {
        throw std::invalid_argument("run_recording: recording shorter than one window");
    }
    const CirRecording calibrated = calibrate(recording, calib_cfg);
    const auto starts = window_starts(calibrated.snapshots.size(), cfg);

    std::vector<BreathingEstimate> estimates;
    estimates.reserve(starts.size());
    for (std::size_t s : starts) {
        const std::span<const CirSnapshot> window(calibrated.snapshots.data() + s,
                                                  static_cast<std::size_t>(cfg.window_snapshots));
        const SnapshotMatrix matrix = interpolate_uniform(window, cfg.nominal_rate_hz);
        BreathingEstimate est = estimate_window(matrix, cfg);
        est.window_start_index = s;
        estimates.push_back(std::move(est));
    }
    return aggregate(std::move(estimates), cfg.method, recording.meta.ground_truth_hz);
}

std::pair<ScenarioReport, ScenarioReport> compare_methods(const CirRecording& recording,
                                                          const WindowConfig& cfg,
                                                          const CalibrationConfig& calib_cfg) {
    cfg.validate();
    if (recording.snapshots.size() < static_cast<std::size_t>(cfg.window_snapshots)) {
        throw std::invalid_argument("compare_methods: recording shorter than one window");
    }
    const CirRecording calibrated = calibrate(recording, calib_cfg);
    const auto starts = window_starts(calibrated.snapshots.size(), cfg);

    std::vector<BreathingEstimate> sel;
    std::vector<BreathingEstimate> fus;
    WindowConfig sel_cfg = cfg;
    sel_cfg.method = Method::selection;
    WindowConfig fus_cfg = cfg;
    fus_cfg.method = Method::fusion;
    for (std::size_t s : starts) {
        const std::span<const CirSnapshot> window(calibrated.snapshots.data() + s,
                                                  static_cast<std::size_t>(cfg.window_snapshots));
        const SnapshotMatrix matrix = interpolate_uniform(window, cfg.nominal_rate_hz);
        BreathingEstimate es = estimate_window(matrix, sel_cfg);
        es.window_start_index = s;
        sel.push_back(std::move(es));
        BreathingEstimate ef = estimate_window(matrix, fus_cfg);
        ef.window_start_index = s;
        fus.push_back(std::move(ef));
    }
    return {aggregate(std::move(sel), Method::selection, recording.meta.ground_truth_hz),
            aggregate(std::move(fus), Method::fusion, recording.meta.ground_truth_hz)};
}

double median(std::vector<double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace cirfuse
