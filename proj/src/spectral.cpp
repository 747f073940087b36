#include "cirfuse/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cirfuse {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DftPlan::DftPlan(std::size_t window_len, double sample_rate_hz, BandOfInterest band)
    : window_len_(window_len), sample_rate_hz_(sample_rate_hz), band_(band) {
    if (window_len == 0) throw std::invalid_argument("DftPlan: empty window");
    if (sample_rate_hz <= 0.0) throw std::invalid_argument("DftPlan: rate must be positive");
    if (band.f_low_hz <= 0.0 || band.f_high_hz <= band.f_low_hz) {
        throw std::invalid_argument("DftPlan: invalid band");
    }
    if (band.f_high_hz >= sample_rate_hz / 2.0) {
        throw std::invalid_argument("DftPlan: band exceeds Nyquist");
    }
    const double eps = 1e-12 * sample_rate_hz;
    for (std::size_t k = 0; k < window_len; ++k) {
        double f = static_cast<double>(k) * sample_rate_hz / static_cast<double>(window_len);
        if (f > sample_rate_hz / 2.0) f -= sample_rate_hz;
        const double af = std::abs(f);
        if (af >= band.f_low_hz - eps && af <= band.f_high_hz + eps) {
            band_rows_.push_back(k);
        }
    }
    if (band_rows_.empty()) throw std::invalid_argument("DftPlan: band covers no DFT rows");
}

cplx dft_row(std::span<const cplx> x, std::size_t k) {
    const std::size_t n = x.size();
    const double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    const cplx w{std::cos(ang), std::sin(ang)};
    cplx acc{0.0, 0.0};
    cplx p{1.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc += x[i] * p;
        p *= w;
    }
    return acc;
}

double boi_energy(std::span<const cplx> x, const DftPlan& plan) {
    if (x.size() != plan.window_len()) throw std::invalid_argument("boi_energy: length mismatch");
    double e = 0.0;
    for (std::size_t k : plan.band_rows()) {
        e += std::norm(dft_row(x, k));
    }
    return e / static_cast<double>(x.size());
}

double total_energy(std::span<const cplx> x, const DftPlan& plan) {
    if (x.size() != plan.window_len()) throw std::invalid_argument("total_energy: length mismatch");
    // Parseval: ||F x||^2 / N == ||x||^2 for the unnormalized DFT.
    double e = 0.0;
    for (const cplx& v : x) e += std::norm(v);
    return e;
}

PsdSpectrum psd_on_grid(std::span<const cplx> x, double rate_hz, BandOfInterest band,
                        double resolution_hz) {
    if (resolution_hz <= 0.0) throw std::invalid_argument("psd_on_grid: resolution must be positive");
    if (band.f_high_hz <= band.f_low_hz) throw std::invalid_argument("psd_on_grid: invalid band");
    if (x.empty()) throw std::invalid_argument("psd_on_grid: empty input");

    const auto grid_size =
        static_cast<std::size_t>(std::floor((band.f_high_hz - band.f_low_hz) / resolution_hz + 1e-9)) + 1;
    if (grid_size == 0) throw std::invalid_argument("psd_on_grid: empty grid");

    const std::size_t n = x.size();
    cplx mean{0.0, 0.0};
    for (const cplx& v : x) mean += v;
    mean /= static_cast<double>(n);
    std::vector<cplx> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] - mean;

    PsdSpectrum spec;
    spec.freqs_hz.resize(grid_size);
    spec.values.resize(grid_size);
    for (std::size_t m = 0; m < grid_size; ++m) {
        const double f = band.f_low_hz + static_cast<double>(m) * resolution_hz;
        const double ang = -2.0 * kPi * f / rate_hz;
        const cplx w{std::cos(ang), std::sin(ang)};
        cplx acc{0.0, 0.0};
        cplx p{1.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            acc += y[i] * p;
            p *= w;
        }
        spec.freqs_hz[m] = f;
        spec.values[m] = std::norm(acc) / static_cast<double>(n);
    }
    return spec;
}

std::pair<double, double> detect_peak(const PsdSpectrum& spec) {
    if (spec.values.empty()) throw std::invalid_argument("detect_peak: empty spectrum");
    std::size_t best = 0;
    for (std::size_t i = 1; i < spec.values.size(); ++i) {
        if (spec.values[i] > spec.values[best]) best = i;
    }
    return {spec.freqs_hz[best], spec.values[best]};
}

double confidence_index(const PsdSpectrum& spec) {
    if (spec.values.empty()) throw std::invalid_argument("confidence_index: empty spectrum");
    double sum = 0.0;
    for (double v : spec.values) sum += v;
    if (sum <= 0.0) return 0.0;

    const std::size_t n = spec.values.size();
    std::vector<double> maxima;
    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = (i == 0) || spec.values[i] > spec.values[i - 1];
        const bool right_ok = (i + 1 == n) || spec.values[i] > spec.values[i + 1];
        if (left_ok && right_ok) maxima.push_back(spec.values[i] / sum);
    }
    if (maxima.size() < 2) {
        double best = 0.0;
        for (double v : spec.values) best = std::max(best, v / sum);
        return best;
    }
    std::sort(maxima.begin(), maxima.end(), std::greater<>());
    return maxima[0] - maxima[1];
}

}  // namespace cirfuse
