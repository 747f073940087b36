#pragma once

#include "cirfuse/model.hpp"

namespace cirfuse {

/// Reference-path calibration settings. The reference peak is searched at
/// bin indices >= search_start_bin; the peak and its 2*neighbor_radius
/// adjacent bins form the reference window.
struct CalibrationConfig {
    int search_start_bin = 75;
    int neighbor_radius = 2;
    int target_ref_bin = 82;
    double target_ref_energy = 1.0;
};

/// Index of the maximum-amplitude bin at or after search_start_bin.
/// Ties break toward the lowest index. Throws if the whole candidate
/// region is exactly zero.
int find_reference_peak(const CirSnapshot& snapshot, const CalibrationConfig& cfg);

/// Shifts each snapshot by an integer number of bins so its reference peak
/// lands at target_ref_bin (zero fill, timestamps unchanged).
CirRecording calibrate_delay(const CirRecording& recording, const CalibrationConfig& cfg);

/// Scales each snapshot by a positive real factor so the energy in the
/// reference window equals target_ref_energy. Expects delay-calibrated
/// input.
CirRecording calibrate_amplitude(const CirRecording& recording, const CalibrationConfig& cfg);

/// Delay then amplitude calibration.
CirRecording calibrate(const CirRecording& recording, const CalibrationConfig& cfg);

}  // namespace cirfuse
