#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radmotion/types.hpp"

namespace radmotion {

struct RadarPose {
    std::string radar_id;
    double x_m = 0.0;
    double y_m = 0.0;
    double boresight_rad = 0.0; // world azimuth of the array normal; target azimuths
                                // are measured from it, counterclockwise positive
};

enum class WaveformKind { kSinusoid, kMultiSine, kBandNoise, kBurst, kStep };

struct WaveformSpec {
    WaveformKind kind = WaveformKind::kSinusoid;
    double amplitude_m = 0.0; // sinusoid/burst/step amplitude; band noise sigma
    double freq_hz = 0.0;     // sinusoid/burst carrier
    double phase_rad = 0.0;   // sinusoid
    std::vector<double> multi_amps_m;   // multi-sine
    std::vector<double> multi_freqs_hz;
    std::vector<double> multi_phases_rad;
    double cutoff_hz = 0.0; // band noise
    double center_s = 0.0;  // burst center
    double width_s = 0.0;   // burst Gaussian envelope width
    double step_time_s = 0.0;
};

// Deterministic displacement sequence; noise kinds are zero-mean by construction.
std::vector<double> synth_waveform(const WaveformSpec& spec, std::size_t n_samples,
                                   double fs_hz, std::uint64_t seed);

struct Scatterer {
    double x_m = 0.0;
    double y_m = 0.0;
    cd reflectivity{1.0, 0.0};
    bool is_static = false;
    double direction_x = 0.0; // unit motion direction (ignored for static)
    double direction_y = 0.0;
    WaveformSpec motion;
};

struct SceneSpec {
    std::vector<Scatterer> scatterers;
    std::vector<RadarPose> radars;
    double duration_s = 0.0;
    double noise_power = 0.0; // per complex sample
    std::uint64_t seed = 0;
    double range_extent_m = 0.0; // 0 = auto (max scatterer range + margin), per radar
};

// Cosine of the angle between the motion direction and the radar->scatterer
// line of sight. Ground-truth radial (range) displacement = factor * waveform.
double project_los(double direction_x, double direction_y, const RadarPose& pose,
                   double scatterer_x, double scatterer_y);

struct RadarSimOutput {
    DataCube cube;
    // Ground truth per scatterer, toward-radar sign convention: positive values
    // mean the target moved closer. This is the quantity the phase pipeline
    // recovers (up to a constant), i.e. -project_los(...) * waveform.
    std::vector<std::vector<double>> truth_toward_m;
};

// Forward model per scatterer k and channel n:
//   a_k * g(r - r_k(t)) * e^{-j 4 pi r_k(t) / lambda} * e^{-j pi n sin(theta_k)}
// with r_k(t) = rest range + projected displacement, g a Gaussian of
// FWHM = range_bin_m, plus seeded complex circular noise.
RadarSimOutput simulate_radar(const SceneSpec& scene, const RadarConfig& config,
                              std::size_t radar_index);

struct SimOutput {
    std::vector<RadarSimOutput> radars;
};

SimOutput simulate(const SceneSpec& scene, const RadarConfig& config);

} // namespace radmotion
