#include "cirfuse/presets.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cirfuse {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBandwidthHz = 499.2e6;
constexpr double kCarrierHz = 3.9936e9;
constexpr int kNumBins = 96;
constexpr int kReferenceBin = 82;
constexpr double kReferenceAmp = 0.7;

PathSpec static_path(int bin, cplx attenuation) {
    return PathSpec{attenuation, bin / kBandwidthHz, 0.0};
}

PathSpec breathing_path(int bin, cplx attenuation, double coupling) {
    return PathSpec{attenuation, bin / kBandwidthHz, coupling};
}

/// AC power of exp(-j theta(t)) under sinusoidal phase modulation with
/// index z: 1 - J0(z)^2.
double modulation_ac_power(double z) {
    const double j0 = std::cyl_bessel_j(0.0, z);
    return 1.0 - j0 * j0;
}

/// Phase modulation index for a breathing path: half the peak-to-peak
/// carrier phase swing.
double modulation_index(double coupling, double displacement_m) {
    return kPi * kCarrierHz * coupling * displacement_m / kSpeedOfLight;
}

}  // namespace

Scenario los_preset(double displacement_mm, double rate_hz, std::uint64_t seed) {
    const double D = displacement_mm * 1e-3;
    Scenario s;
    s.channel.bandwidth_hz = kBandwidthHz;
    s.channel.carrier_hz = kCarrierHz;
    s.channel.n_bins = kNumBins;
    s.channel.reference_bin = kReferenceBin;
    s.channel.paths = {
        static_path(4, cplx{1.0, 0.0}),
        breathing_path(12, std::polar(0.3, 0.4), 2.0),
        static_path(kReferenceBin, cplx{kReferenceAmp, 0.0}),
    };
    s.motion = EmulatorMotion{Waveform::sinusoid, D, rate_hz};
    s.artifacts.gain_mag_lo = 0.7;
    s.artifacts.gain_mag_hi = 1.4;
    s.artifacts.shift_lo = -3;
    s.artifacts.shift_hi = 3;
    s.artifacts.jitter_std_s = 5e-3;
    s.artifacts.noise_std = 0.3 * std::pow(10.0, -30.0 / 20.0);
    s.duration_s = 50.0;
    s.nominal_rate_hz = 19.3;
    s.seed = seed;
    char label[64];
    std::snprintf(label, sizeof(label), "los-%gmm-%ghz", displacement_mm, rate_hz);
    s.label = label;
    return s;
}

Scenario spread_preset(double displacement_mm, double rate_hz, std::uint64_t seed) {
    const double D = displacement_mm * 1e-3;

    const int breathing_bins[6] = {14, 18, 22, 26, 33, 40};
    const double amps[6] = {0.050, 0.045, 0.055, 0.040, 0.052, 0.048};
    const double couplings[6] = {2.0, 1.6, 1.2, 1.8, 1.4, 1.0};
    const double phases[6] = {0.0, 0.9, 1.8, 2.7, 3.6, 4.5};

    // Mean breathing component power per bin fixes the scales below.
    double mean_ac = 0.0;
    for (int i = 0; i < 6; ++i) {
        mean_ac += amps[i] * amps[i] * modulation_ac_power(modulation_index(couplings[i], D));
    }
    mean_ac /= 6.0;

    // 0 dB per-bin SNR: noise power in a bin equals the breathing power.
    const double noise_std = std::sqrt(mean_ac);

    // Amplitude calibration rescales every snapshot by the noisy reference
    // energy, leaving a white relative amplitude error of variance
    // sigma^2 / (2 E_ref) on each bin. Clutter amplitudes are sized so the
    // in-band share of that residual (about |I|/N = 1/25 of it) is three
    // times the per-bin breathing energy, which is what lures the
    // single-bin selection onto a bin without a breathing line.
    const double e_ref = kReferenceAmp * kReferenceAmp;
    const double var_eps = mean_ac / (2.0 * e_ref);
    const double clutter_amp = std::sqrt(3.0 * 25.0 * mean_ac / var_eps);

    Scenario s;
    s.channel.bandwidth_hz = kBandwidthHz;
    s.channel.carrier_hz = kCarrierHz;
    s.channel.n_bins = kNumBins;
    s.channel.reference_bin = kReferenceBin;
    s.channel.paths = {
        static_path(3, cplx{1.0, 0.0}),
        static_path(8, std::polar(clutter_amp, 0.6)),
        static_path(30, std::polar(0.85 * clutter_amp, 2.1)),
        static_path(kReferenceBin, cplx{kReferenceAmp, 0.0}),
    };
    for (int i = 0; i < 6; ++i) {
        s.channel.paths.push_back(
            breathing_path(breathing_bins[i], std::polar(amps[i], phases[i]), couplings[i]));
    }
    s.motion = EmulatorMotion{Waveform::sinusoid, D, rate_hz};
    s.artifacts.gain_mag_lo = 0.7;
    s.artifacts.gain_mag_hi = 1.4;
    s.artifacts.shift_lo = -3;
    s.artifacts.shift_hi = 3;
    s.artifacts.jitter_std_s = 5e-3;
    s.artifacts.noise_std = noise_std;
    s.duration_s = 50.0;
    s.nominal_rate_hz = 19.3;
    s.seed = seed;
    char label[64];
    std::snprintf(label, sizeof(label), "spread-%gmm-%ghz", displacement_mm, rate_hz);
    s.label = label;
    return s;
}

Scenario static_preset(std::uint64_t seed) {
    Scenario s = los_preset(4.0, 0.3, seed);
    for (PathSpec& p : s.channel.paths) p.breathing_coupling = 0.0;
    s.label = "static";
    return s;
}

std::optional<Scenario> preset_by_name(const std::string& name, std::uint64_t seed) {
    if (name == "static") return static_preset(seed);
    double disp = 0.0;
    double rate = 0.0;
    if (std::sscanf(name.c_str(), "los-%lfmm-%lfhz", &disp, &rate) == 2) {
        return los_preset(disp, rate, seed);
    }
    if (std::sscanf(name.c_str(), "spread-%lfmm-%lfhz", &disp, &rate) == 2) {
        return spread_preset(disp, rate, seed);
    }
    return std::nullopt;
}

}  // namespace cirfuse
