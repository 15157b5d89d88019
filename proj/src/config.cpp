#include "radmotion/config.hpp"

#include <cmath>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kGridEps = 1e-9; // absorbs fp error in (max-min)/step
}

std::size_t AngleGrid::size() const {
    if (step_deg <= 0.0 || max_deg < min_deg) return 0;
    return static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + kGridEps)) + 1;
}

double AngleGrid::angle_rad(std::size_t k) const {
    return angle_deg(k) * kPi / 180.0;
}

std::vector<double> AngleGrid::angles_rad() const {
    std::vector<double> out(size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = angle_rad(k);
    return out;
}

const RadarConfig& validate_config(const RadarConfig& config) {
    // Comparisons are written so NaN fails them too.
    if (!(config.wavelength_m > 0.0))
        throw ConfigError("wavelength must be positive");
    if (!(config.n_channels >= 1))
        throw ConfigError("n_channels must be at least 1");
    if (!(config.element_spacing_wavelengths == 0.5))
        throw ConfigError("element_spacing_wavelengths must equal 0.5");
    if (!(config.slow_time_fs_hz > 0.0))
        throw ConfigError("slow_time_fs_hz must be positive");
    if (!(config.range_bin_m > 0.0))
        throw ConfigError("range_bin_m must be positive");
    if (!(config.clutter_segment_s > 0.0))
        throw ConfigError("clutter_segment_s must be positive");
    if (!(config.movement_window_s > 0.0))
        throw ConfigError("movement_window_s must be positive");
    if (!(config.corr_segment_s > 0.0))
        throw ConfigError("corr_segment_s must be positive");
    if (!(config.movement_window_s <= config.clutter_segment_s))
        throw ConfigError("movement_window_s must not exceed clutter_segment_s");
    if (!(config.clutter_segment_s <= config.corr_segment_s))
        throw ConfigError("clutter_segment_s must not exceed corr_segment_s");
    if (!(config.taylor_sidelobe_db < 0.0))
        throw ConfigError("taylor_sidelobe_db must be negative");
    if (!(config.taylor_nbar >= 1))
        throw ConfigError("taylor_nbar must be at least 1");
    const AngleGrid& g = config.angle_grid;
    if (!(g.step_deg > 0.0))
        throw ConfigError("angle grid step must be positive");
    if (!(g.min_deg <= g.max_deg))
        throw ConfigError("angle grid must contain at least one angle");
    if (!(g.min_deg >= -90.0) || !(g.max_deg <= 90.0))
        throw ConfigError("angle grid must lie within [-90, 90] degrees");
    return config;
}

std::vector<SegmentSpan> segment_bounds(std::size_t n_slow, double fs_hz, double seg_len_s) {
    std::vector<SegmentSpan> spans;
    if (fs_hz <= 0.0 || seg_len_s <= 0.0) return spans;
    const auto spp = static_cast<std::size_t>(std::llround(fs_hz * seg_len_s));
    if (spp < 1 || n_slow < spp) return spans;
    const std::size_t count = n_slow / spp;
    spans.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        spans.push_back({i * spp, (i + 1) * spp});
    return spans;
}

} // namespace radmotion
