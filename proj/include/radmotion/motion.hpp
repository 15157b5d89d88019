#pragma once

#include <span>
#include <vector>

#include "radmotion/types.hpp"

namespace radmotion {

// output[0] = input[0]; successive differences in (-pi, pi]; output = input (mod 2pi).
std::vector<double> unwrap_phase(std::span<const double> phases);

// Phase at the tracked cell, unwrapped per segment and scaled by lambda/(4*pi).
// While the tracked cell is unchanged across a segment boundary the unwrap
// continues through it; when the cell switches, the new segment is offset so
// its first sample equals the previous segment's last (the retargeting jump is
// not motion). Zero-magnitude samples are bridged by the previous valid phase
// and flagged in sample_valid.
DisplacementTrace extract_displacement(const ComplexImageSequence& seq,
                                       const TargetTrack& track,
                                       const RadarConfig& config);

// b(t): windowed RMS of the Doppler velocity d'(t) over [t - T_b/2, t + T_b/2].
// Central differences (one-sided at the ends); trapezoid end-weights; windows
// truncated and renormalized at trace edges; the two derivative samples
// straddling each segment stitch carry zero weight.
MovementTrace movement_index(const DisplacementTrace& trace, double window_s, double fs_hz);

} // namespace radmotion
