#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "radmotion/config.hpp"

namespace radmotion {

using cd = std::complex<double>;

// Range-compressed multichannel slow-time data. Sample layout is
// channel-fastest: index(t, r, n) = (t*n_range + r)*n_channels + n.
struct DataCube {
    RadarConfig config;
    std::string radar_id;
    std::size_t n_slow = 0;
    std::size_t n_range = 0;
    std::vector<cd> samples;

    std::size_t n_channels() const { return static_cast<std::size_t>(config.n_channels); }
    std::size_t index(std::size_t t, std::size_t r, std::size_t n) const {
        return (t * n_range + r) * n_channels() + n;
    }
    cd& at(std::size_t t, std::size_t r, std::size_t n) { return samples[index(t, r, n)]; }
    const cd& at(std::size_t t, std::size_t r, std::size_t n) const { return samples[index(t, r, n)]; }
};

// Throws NumericError if sample count mismatches dimensions or any value is non-finite.
void validate_cube(const DataCube& cube);

// Beamformed complex image over (slow time, range, angle); angle-fastest layout:
// index(t, r, k) = (t*n_range + r)*n_angles + k.
struct ComplexImageSequence {
    std::size_t n_slow = 0;
    std::size_t n_range = 0;
    std::vector<double> angles_rad;
    double fs_hz = 0.0;
    double range_bin_m = 0.0;
    double wavelength_m = 0.0;
    std::string radar_id;
    std::vector<cd> values;

    std::size_t n_angles() const { return angles_rad.size(); }
    std::size_t index(std::size_t t, std::size_t r, std::size_t k) const {
        return (t * n_range + r) * n_angles() + k;
    }
    cd& at(std::size_t t, std::size_t r, std::size_t k) { return values[index(t, r, k)]; }
    const cd& at(std::size_t t, std::size_t r, std::size_t k) const { return values[index(t, r, k)]; }
};

// Per-segment time-averaged power over (range, angle).
struct PowerImage {
    std::size_t n_range = 0;
    std::vector<double> angles_rad;
    double range_bin_m = 0.0;
    std::size_t segment_index = 0;
    std::vector<double> values; // n_range * n_angles, all >= 0

    std::size_t n_angles() const { return angles_rad.size(); }
    double& at(std::size_t r, std::size_t k) { return values[r * n_angles() + k]; }
    const double& at(std::size_t r, std::size_t k) const { return values[r * n_angles() + k]; }
};

// Rectangle in polar coordinates assigned to one participant.
struct SeatRegion {
    std::string participant_id;
    double r_min_m = 0.0;
    double r_max_m = 0.0;
    double theta_min_rad = 0.0;
    double theta_max_rad = 0.0;
};

struct CellIndex {
    std::size_t range_idx = 0;
    std::size_t angle_idx = 0;
    bool operator==(const CellIndex&) const = default;
};

struct TrackedCell {
    CellIndex cell;
    double range_m = 0.0;
    double theta_rad = 0.0;
};

// One chosen cell per segment; cells.size() == number of full segments.
struct TargetTrack {
    std::string participant_id;
    std::vector<TrackedCell> cells;
};

struct DisplacementTrace {
    std::string participant_id;
    std::string radar_id;
    double fs_hz = 0.0;
    std::vector<double> d_m;
    // First sample index of each stitched segment (first entry is 0).
    std::vector<std::size_t> segment_starts;
    // 0 where the tracked cell had zero magnitude and the phase was bridged.
    std::vector<std::uint8_t> sample_valid;
};

struct MovementTrace {
    std::string participant_id;
    std::string radar_id;
    double fs_hz = 0.0;
    std::vector<double> b_mps; // >= 0 everywhere
};

} // namespace radmotion
