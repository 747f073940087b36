#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cirfuse/io.hpp"

namespace cirfuse {

/// Single strong breathing reflection in line of sight, plus a static
/// direct path and the transmission-line reference. Noise 30 dB below the
/// breathing path amplitude, 5 ms timestamp jitter, random AGC gain and
/// sync offset.
Scenario los_preset(double displacement_mm, double rate_hz, std::uint64_t seed);

/// Breathing energy spread over six delay bins with distinct couplings and
/// phases. Additive noise is sized so each breathing bin runs at 0 dB
/// per-bin SNR (breathing component power equals the noise power in that
/// bin), and two strong static clutter bins carry enough calibration
/// residual to dominate the single-bin band-energy ranking. Mimics an
/// obstructed scene where no single bin is trustworthy.
Scenario spread_preset(double displacement_mm, double rate_hz, std::uint64_t seed);

/// The LOS geometry with the breathing modulation switched off.
Scenario static_preset(std::uint64_t seed);

/// Parses "los-<D>mm-<F>hz", "spread-<D>mm-<F>hz", or "static".
std::optional<Scenario> preset_by_name(const std::string& name, std::uint64_t seed);

}  // namespace cirfuse
