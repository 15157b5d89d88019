#pragma once

#include <cstddef>
#include <vector>

namespace radmotion {

// Azimuth grid in degrees; strictly increasing, contained in [-90, 90].
struct AngleGrid {
    double min_deg = -60.0;
    double max_deg = 60.0;
    double step_deg = 1.0;

    std::size_t size() const;
    double angle_deg(std::size_t k) const { return min_deg + step_deg * static_cast<double>(k); }
    double angle_rad(std::size_t k) const;
    std::vector<double> angles_rad() const;
};

struct RadarConfig {
    double wavelength_m = 3.8e-3;
    int n_channels = 12;
    double element_spacing_wavelengths = 0.5; // fixed by the steering model
    double slow_time_fs_hz = 100.0;
    double range_bin_m = 0.0447;
    double clutter_segment_s = 30.0;  // T
    double movement_window_s = 0.5;   // T_b
    double corr_segment_s = 60.0;     // T_rho
    double taylor_sidelobe_db = -25.0;
    int taylor_nbar = 4;
    AngleGrid angle_grid;
};

// Throws ConfigError naming the first violated invariant; returns config unchanged.
const RadarConfig& validate_config(const RadarConfig& config);

struct SegmentSpan {
    std::size_t begin = 0; // inclusive
    std::size_t end = 0;   // exclusive

    std::size_t size() const { return end - begin; }
    bool operator==(const SegmentSpan&) const = default;
};

// Maximal list of non-overlapping full segments of seg_len_s seconds;
// a trailing partial segment is dropped.
std::vector<SegmentSpan> segment_bounds(std::size_t n_slow, double fs_hz, double seg_len_s);

} // namespace radmotion
