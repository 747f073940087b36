#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cirfuse {

using cplx = std::complex<double>;

/// Speed of light in m/s (exact).
inline constexpr double kSpeedOfLight = 299792458.0;

/// One propagation path: complex attenuation, nominal delay, and the
/// fraction of the emulator displacement that modulates the path's
/// round-trip length (0 = static, 2 = full round trip on a direct
/// reflection).
struct PathSpec {
    cplx attenuation{1.0, 0.0};
    double base_delay_s = 0.0;
    double breathing_coupling = 0.0;
};

struct MultipathChannel {
    std::vector<PathSpec> paths;
    double bandwidth_hz = 499.2e6;
    double carrier_hz = 3.9936e9;
    int n_bins = 96;
    /// Bin index of the simulated transmission-line reference path, if any.
    std::optional<int> reference_bin;

    /// Throws std::invalid_argument when a field or path is out of range.
    void validate() const;
};

enum class Waveform { sinusoid, triangular };

/// Breathing-emulator plate motion. Displacement d(t) oscillates in [0, D]
/// where D is the peak-to-peak displacement:
///   sinusoid:   d(t) = D/2 * (1 + sin(2 pi f t))
///   triangular: d(t) ramps 0 -> D -> 0 linearly over one period 1/f
struct EmulatorMotion {
    Waveform waveform = Waveform::sinusoid;
    double displacement_m = 0.004;
    double rate_hz = 0.3;

    /// Triangular motion from plate speed v: f = v / (2 D).
    static EmulatorMotion triangular_from_speed(double displacement_m, double speed_m_s);

    double displacement_at(double t_s) const;
};

/// Per-snapshot measurement artifacts. All ranges zero / identity by
/// default, in which case the recording equals the clean samples.
struct ArtifactSpec {
    double gain_mag_lo = 1.0;   ///< AGC gain magnitude range
    double gain_mag_hi = 1.0;
    double gain_phase_lo = 0.0; ///< gain phase range (radians)
    double gain_phase_hi = 0.0;
    int shift_lo = 0;           ///< sync delay offset range (integer bins)
    int shift_hi = 0;
    double jitter_std_s = 0.0;  ///< timestamp jitter std dev
    double noise_std = 0.0;     ///< per-bin complex noise, E|n|^2 = noise_std^2

    bool is_identity() const;
};

struct CirSnapshot {
    double timestamp_s = 0.0;
    std::vector<cplx> bins;
};

struct RecordingMeta {
    int n_bins = 0;
    double bandwidth_hz = 0.0;
    double carrier_hz = 0.0;
    std::optional<double> ground_truth_hz;
    std::string label;
};

struct CirRecording {
    std::vector<CirSnapshot> snapshots;
    double nominal_rate_hz = 19.3;
    RecordingMeta meta;
};

/// Sampled CIR for a given plate displacement:
///   h_n = sum_p A_p g(n/B - tau_p(d)) exp(-j 2 pi f_c tau_p(d))
/// with tau_p(d) = base_delay + coupling * d / c and g the sinc pulse.
std::vector<cplx> sample_cir(const MultipathChannel& channel, double displacement_m);

/// Synthesizes floor(duration * rate) snapshots at nominal times n/rate.
/// Artifacts are applied per snapshot in the order: complex gain, integer
/// bin shift with zero fill, additive noise, timestamp jitter.
/// Deterministic for a fixed seed.
CirRecording generate_recording(const MultipathChannel& channel,
                                const EmulatorMotion& motion,
                                const ArtifactSpec& artifacts,
                                double duration_s,
                                double nominal_rate_hz,
                                std::uint64_t seed);

}  // namespace cirfuse
