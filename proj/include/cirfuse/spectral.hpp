#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "cirfuse/model.hpp"

namespace cirfuse {

/// Breathing band [f_low, f_high] in Hz.
struct BandOfInterest {
    double f_low_hz = 0.1;
    double f_high_hz = 0.5;
};

/// Window length, sample rate, and the set of DFT rows whose frequency
/// falls inside the band (both signs). Frequencies are k*rate/N mapped to
/// (-rate/2, rate/2]. Construction fails when the band covers no rows.
class DftPlan {
public:
    DftPlan(std::size_t window_len, double sample_rate_hz, BandOfInterest band);

    std::size_t window_len() const { return window_len_; }
    double sample_rate_hz() const { return sample_rate_hz_; }
    const BandOfInterest& band() const { return band_; }
    const std::vector<std::size_t>& band_rows() const { return band_rows_; }

private:
    std::size_t window_len_;
    double sample_rate_hz_;
    BandOfInterest band_;
    std::vector<std::size_t> band_rows_;
};

struct PsdSpectrum {
    std::vector<double> freqs_hz;
    std::vector<double> values;
};

/// Unnormalized DFT value X[k] of x.
cplx dft_row(std::span<const cplx> x, std::size_t k);

/// Energy in the band rows: sum_{k in I} |X[k]|^2 / N.
double boi_energy(std::span<const cplx> x, const DftPlan& plan);

/// Full-spectrum energy ||F x||^2 / N, which equals sum |x[n]|^2.
double total_energy(std::span<const cplx> x, const DftPlan& plan);

/// DTFT power of the mean-removed sequence on the grid
/// f = f_low, f_low + res, ..., f_high, as |X(f)|^2 / N.
PsdSpectrum psd_on_grid(std::span<const cplx> x, double rate_hz, BandOfInterest band,
                        double resolution_hz);

/// Global maximum (frequency, value); ties break toward lower frequency.
std::pair<double, double> detect_peak(const PsdSpectrum& spec);

/// Difference between the largest and second-largest local maxima of the
/// sum-normalized spectrum; with fewer than two local maxima, the largest
/// normalized value.
double confidence_index(const PsdSpectrum& spec);

}  // namespace cirfuse
