#include "cirfuse/calib.hpp"

#include <cmath>
#include <stdexcept>

namespace cirfuse {

namespace {

void check_config(const CirSnapshot& snapshot, const CalibrationConfig& cfg) {
    if (cfg.search_start_bin < 0 || cfg.neighbor_radius < 0) {
        throw std::invalid_argument("calib: negative search_start_bin or neighbor_radius");
    }
    const int n = static_cast<int>(snapshot.bins.size());
    if (cfg.search_start_bin + 2 * cfg.neighbor_radius >= n) {
        throw std::invalid_argument("calib: search window does not fit in the CIR");
    }
}

double reference_energy(const CirSnapshot& snapshot, const CalibrationConfig& cfg) {
    const int n = static_cast<int>(snapshot.bins.size());
    double e = 0.0;
    for (int k = cfg.target_ref_bin - cfg.neighbor_radius; k <= cfg.target_ref_bin + cfg.neighbor_radius;
         ++k) {
        if (k >= 0 && k < n) e += std::norm(snapshot.bins[static_cast<std::size_t>(k)]);
    }
    return e;
}

}  // namespace

int find_reference_peak(const CirSnapshot& snapshot, const CalibrationConfig& cfg) {
    check_config(snapshot, cfg);
    const int n = static_cast<int>(snapshot.bins.size());
    int best = -1;
    double best_amp = 0.0;
    for (int k = cfg.search_start_bin; k < n; ++k) {
        const double amp = std::abs(snapshot.bins[static_cast<std::size_t>(k)]);
        if (amp > best_amp) {
            best_amp = amp;
            best = k;
        }
    }
    if (best < 0) throw std::runtime_error("calib: reference not found (candidate region is zero)");
    return best;
}

CirRecording calibrate_delay(const CirRecording& recording, const CalibrationConfig& cfg) {
    CirRecording out = recording;
    for (CirSnapshot& snap : out.snapshots) {
        const int peak = find_reference_peak(snap, cfg);
        const int shift = cfg.target_ref_bin - peak;
        const int n = static_cast<int>(snap.bins.size());
        if (2 * std::abs(shift) > n) {
            throw std::runtime_error("calib: delay shift would truncate more than half the CIR");
        }
        if (shift == 0) continue;
        std::vector<cplx> shifted(snap.bins.size(), cplx{0.0, 0.0});
        for (int k = 0; k < n; ++k) {
            const int src = k - shift;
            if (src >= 0 && src < n) shifted[static_cast<std::size_t>(k)] = snap.bins[static_cast<std::size_t>(src)];
        }
        snap.bins = std::move(shifted);
    }
    return out;
}

CirRecording calibrate_amplitude(const CirRecording& recording, const CalibrationConfig& cfg) {
    if (cfg.target_ref_energy <= 0.0) {
        throw std::invalid_argument("calib: target_ref_energy must be positive");
    }
    CirRecording out = recording;
    for (CirSnapshot& snap : out.snapshots) {
        check_config(snap, cfg);
        const double e = reference_energy(snap, cfg);
        if (e == 0.0) throw std::runtime_error("calib: zero reference energy");
        const double scale = std::sqrt(cfg.target_ref_energy / e);
        for (cplx& b : snap.bins) b *= scale;
    }
    return out;
}

CirRecording calibrate(const CirRecording& recording, const CalibrationConfig& cfg) {
    return calibrate_amplitude(calibrate_delay(recording, cfg), cfg);
}

}  // namespace cirfuse
