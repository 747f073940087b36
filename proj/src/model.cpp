#include "cirfuse/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace cirfuse {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sinc_pulse(double bandwidth_hz, double tau_s) {
    const double x = kPi * bandwidth_hz * tau_s;
    if (std::abs(x) < 1e-8) {
        return 1.0 - x * x / 6.0;
    }
    return std::sin(x) / x;
}

/// Shift with zero fill: out[k] = in[k - s].
std::vector<cplx> shift_bins(const std::vector<cplx>& in, int s) {
    std::vector<cplx> out(in.size(), cplx{0.0, 0.0});
    const int n = static_cast<int>(in.size());
    for (int k = 0; k < n; ++k) {
        const int src = k - s;
        if (src >= 0 && src < n) {
            out[k] = in[src];
        }
    }
    return out;
}

}  // namespace

void MultipathChannel::validate() const {
    if (bandwidth_hz <= 0.0) throw std::invalid_argument("channel: bandwidth must be positive");
    if (carrier_hz <= 0.0) throw std::invalid_argument("channel: carrier must be positive");
    if (n_bins <= 0) throw std::invalid_argument("channel: n_bins must be positive");
    const double max_delay = n_bins / bandwidth_hz;
    for (const PathSpec& p : paths) {
        if (p.base_delay_s < 0.0 || p.base_delay_s >= max_delay) {
            throw std::invalid_argument("channel: path delay outside [0, n_bins/B)");
        }
        if (p.breathing_coupling < 0.0 || p.breathing_coupling > 2.0) {
            throw std::invalid_argument("channel: breathing_coupling outside [0, 2]");
        }
    }
    if (reference_bin) {
        if (*reference_bin < 0 || *reference_bin >= n_bins) {
            throw std::invalid_argument("channel: reference_bin outside CIR");
        }
        int matches = 0;
        for (const PathSpec& p : paths) {
            if (p.breathing_coupling == 0.0 &&
                std::abs(p.base_delay_s * bandwidth_hz - *reference_bin) <= 0.5) {
                ++matches;
            }
        }
        if (matches != 1) {
            throw std::invalid_argument(
                "channel: reference_bin requires exactly one static path within half a bin");
        }
    }
}

EmulatorMotion EmulatorMotion::triangular_from_speed(double displacement_m, double speed_m_s) {
    if (displacement_m <= 0.0 || speed_m_s <= 0.0) {
        throw std::invalid_argument("motion: displacement and speed must be positive");
    }
    EmulatorMotion m;
    m.waveform = Waveform::triangular;
    m.displacement_m = displacement_m;
    m.rate_hz = speed_m_s / (2.0 * displacement_m);
    return m;
}

double EmulatorMotion::displacement_at(double t_s) const {
    const double D = displacement_m;
    if (waveform == Waveform::sinusoid) {
        return 0.5 * D * (1.0 + std::sin(2.0 * kPi * rate_hz * t_s));
    }
    double u = rate_hz * t_s;
    u -= std::floor(u);
    return (u < 0.5) ? 2.0 * u * D : 2.0 * (1.0 - u) * D;
}

bool ArtifactSpec::is_identity() const {
    return gain_mag_lo == 1.0 && gain_mag_hi == 1.0 && gain_phase_lo == 0.0 &&
           gain_phase_hi == 0.0 && shift_lo == 0 && shift_hi == 0 && jitter_std_s == 0.0 &&
           noise_std == 0.0;
}

std::vector<cplx> sample_cir(const MultipathChannel& channel, double displacement_m) {
    channel.validate();
    if (!std::isfinite(displacement_m)) {
        throw std::invalid_argument("sample_cir: displacement must be finite");
    }
    std::vector<cplx> h(static_cast<std::size_t>(channel.n_bins), cplx{0.0, 0.0});
    const double B = channel.bandwidth_hz;
    for (const PathSpec& p : channel.paths) {
        const double tau = p.base_delay_s + p.breathing_coupling * displacement_m / kSpeedOfLight;
        const double phase = -2.0 * kPi * channel.carrier_hz * tau;
        const cplx rot = p.attenuation * cplx{std::cos(phase), std::sin(phase)};
        for (int n = 0; n < channel.n_bins; ++n) {
            h[static_cast<std::size_t>(n)] += rot * sinc_pulse(B, n / B - tau);
        }
    }
    return h;
}

CirRecording generate_recording(const MultipathChannel& channel,
                                const EmulatorMotion& motion,
                                const ArtifactSpec& artifacts,
                                double duration_s,
                                double nominal_rate_hz,
                                std::uint64_t seed) {
    channel.validate();
    if (duration_s <= 0.0) throw std::invalid_argument("generate_recording: duration must be positive");
    if (nominal_rate_hz <= 0.0) throw std::invalid_argument("generate_recording: rate must be positive");
    if (artifacts.gain_mag_lo > artifacts.gain_mag_hi || artifacts.gain_phase_lo > artifacts.gain_phase_hi ||
        artifacts.shift_lo > artifacts.shift_hi) {
        throw std::invalid_argument("generate_recording: artifact range lo > hi");
    }
    if (channel.reference_bin) {
        const int ref = *channel.reference_bin;
        if (ref + artifacts.shift_lo < 0 || ref + artifacts.shift_hi >= channel.n_bins) {
            throw std::invalid_argument(
                "generate_recording: delay offset can move the reference path out of the CIR");
        }
    }

    const auto count = static_cast<std::size_t>(std::floor(duration_s * nominal_rate_hz));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    CirRecording rec;
    rec.nominal_rate_hz = nominal_rate_hz;
    rec.meta.n_bins = channel.n_bins;
    rec.meta.bandwidth_hz = channel.bandwidth_hz;
    rec.meta.carrier_hz = channel.carrier_hz;
    rec.meta.ground_truth_hz = motion.rate_hz;
    rec.snapshots.reserve(count);

    double prev_ts = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / nominal_rate_hz;
        CirSnapshot snap;
        snap.bins = sample_cir(channel, motion.displacement_at(t));

        const double mag =
            artifacts.gain_mag_lo + unit(rng) * (artifacts.gain_mag_hi - artifacts.gain_mag_lo);
        const double ph =
            artifacts.gain_phase_lo + unit(rng) * (artifacts.gain_phase_hi - artifacts.gain_phase_lo);
        if (mag != 1.0 || ph != 0.0) {
            const cplx g = std::polar(mag, ph);
            for (cplx& b : snap.bins) b *= g;
        }

        int s = artifacts.shift_lo;
        if (artifacts.shift_hi > artifacts.shift_lo) {
            std::uniform_int_distribution<int> shift_dist(artifacts.shift_lo, artifacts.shift_hi);
            s = shift_dist(rng);
        }
        if (s != 0) snap.bins = shift_bins(snap.bins, s);

        if (artifacts.noise_std > 0.0) {
            const double comp_std = artifacts.noise_std / std::sqrt(2.0);
            for (cplx& b : snap.bins) {
                b += cplx{comp_std * gauss(rng), comp_std * gauss(rng)};
            }
        }

        double ts = t;
        if (artifacts.jitter_std_s > 0.0) ts += artifacts.jitter_std_s * gauss(rng);
        if (ts <= prev_ts) ts = prev_ts + 1e-9;  // keep timestamps strictly increasing
        prev_ts = ts;
        snap.timestamp_s = ts;
        rec.snapshots.push_back(std::move(snap));
    }
    return rec;
}

}  // namespace cirfuse
