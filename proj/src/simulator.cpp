#include "radmotion/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKernelCutBins = 6.0; // Gaussian amplitude < 1e-43 beyond this

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t waveform_seed(std::uint64_t scene_seed, std::size_t scatterer_index) {
    return splitmix64(splitmix64(scene_seed ^ 0x77F6A5C1E2D3B498ULL) + scatterer_index);
}

std::uint64_t noise_seed(std::uint64_t scene_seed, std::size_t radar_index) {
    return splitmix64(splitmix64(scene_seed ^ 0x3C6EF372FE94F82AULL) + radar_index);
}

// Box-Muller over a pinned engine: std::normal_distribution's algorithm is
// implementation-defined, which would break cross-build determinism.
class GaussianGen {
public:
    explicit GaussianGen(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_) {
            have_ = false;
            return cached_;
        }
        const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
        const double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;         // [0, 1)
        const double r = std::sqrt(-2.0 * std::log(u1));
        cached_ = r * std::sin(2.0 * kPi * u2);
        have_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool have_ = false;
};

double wrap_to_pi(double a) {
    while (a > kPi) a -= 2.0 * kPi;
    while (a < -kPi) a += 2.0 * kPi;
    return a;
}

void check_freq(double f, double fs, const char* what) {
    if (!(f >= 0.0) || !(f < fs / 2.0))
        throw ConfigError(std::string(what) + " frequency must lie in [0, fs/2)");
}

} // namespace

std::vector<double> synth_waveform(const WaveformSpec& spec, std::size_t n_samples,
                                   double fs_hz, std::uint64_t seed) {
    if (n_samples == 0)
        throw ConfigError("waveform length must be positive");
    if (!(fs_hz > 0.0))
        throw ConfigError("waveform sampling rate must be positive");

    std::vector<double> w(n_samples, 0.0);
    switch (spec.kind) {
    case WaveformKind::kSinusoid: {
        check_freq(spec.freq_hz, fs_hz, "sinusoid");
        const double om = 2.0 * kPi * spec.freq_hz / fs_hz;
        for (std::size_t t = 0; t < n_samples; ++t)
            w[t] = spec.amplitude_m * std::sin(om * static_cast<double>(t) + spec.phase_rad);
        break;
    }
    case WaveformKind::kMultiSine: {
        const std::size_t m = spec.multi_freqs_hz.size();
        if (spec.multi_amps_m.size() != m || spec.multi_phases_rad.size() != m)
            throw ConfigError("multi-sine component lists must have equal length");
        for (std::size_t j = 0; j < m; ++j) check_freq(spec.multi_freqs_hz[j], fs_hz, "multi-sine");
        for (std::size_t j = 0; j < m; ++j) {
            const double om = 2.0 * kPi * spec.multi_freqs_hz[j] / fs_hz;
            for (std::size_t t = 0; t < n_samples; ++t)
                w[t] += spec.multi_amps_m[j] *
                        std::sin(om * static_cast<double>(t) + spec.multi_phases_rad[j]);
        }
        break;
    }
    case WaveformKind::kBandNoise: {
        if (!(spec.amplitude_m >= 0.0))
            throw ConfigError("band noise sigma must be nonnegative");
        check_freq(spec.cutoff_hz, fs_hz, "band noise cutoff");
        if (!(spec.cutoff_hz > 0.0))
            throw ConfigError("band noise cutoff must be positive");
        // Harmonics of 1/D over [1/D, cutoff]: exactly zero-mean, exact sample
        // variance sigma^2 (distinct harmonics are orthogonal over the window).
        const double duration = static_cast<double>(n_samples) / fs_hz;
        const auto k_full = static_cast<std::size_t>(std::floor(spec.cutoff_hz * duration));
        if (k_full < 1)
            throw ConfigError("band noise cutoff admits no harmonic over this duration");
        const std::size_t k_used = std::min<std::size_t>(k_full, 300);
        const double amp = spec.amplitude_m * std::sqrt(2.0 / static_cast<double>(k_used));
        std::mt19937_64 eng(seed);
        for (std::size_t j = 0; j < k_used; ++j) {
            const std::size_t harmonic = 1 + j * k_full / k_used;
            const double phase =
                2.0 * kPi * (static_cast<double>(eng() >> 11) * 0x1.0p-53);
            const double step = 2.0 * kPi * static_cast<double>(harmonic) /
                                static_cast<double>(n_samples);
            cd z = std::polar(1.0, phase);
            const cd rot = std::polar(1.0, step);
            for (std::size_t t = 0; t < n_samples; ++t) {
                w[t] += amp * z.real();
                z *= rot;
            }
        }
        break;
    }
    case WaveformKind::kBurst: {
        check_freq(spec.freq_hz, fs_hz, "burst");
        if (!(spec.width_s > 0.0))
            throw ConfigError("burst width must be positive");
        const double om = 2.0 * kPi * spec.freq_hz;
        for (std::size_t t = 0; t < n_samples; ++t) {
            const double dt = static_cast<double>(t) / fs_hz - spec.center_s;
            w[t] = spec.amplitude_m * std::sin(om * dt) *
                   std::exp(-dt * dt / (2.0 * spec.width_s * spec.width_s));
        }
        break;
    }
    case WaveformKind::kStep: {
        for (std::size_t t = 0; t < n_samples; ++t)
            w[t] = (static_cast<double>(t) / fs_hz >= spec.step_time_s) ? spec.amplitude_m : 0.0;
        break;
    }
    }
    return w;
}

double project_los(double direction_x, double direction_y, const RadarPose& pose,
                   double scatterer_x, double scatterer_y) {
    const double nrm = std::hypot(direction_x, direction_y);
    if (!(std::abs(nrm - 1.0) <= 1e-9))
        throw ConfigError("motion direction must be a unit vector");
    const double lx = scatterer_x - pose.x_m;
    const double ly = scatterer_y - pose.y_m;
    const double dist = std::hypot(lx, ly);
    if (!(dist > 0.0))
        throw ConfigError("scatterer coincides with the radar position");
    return (direction_x * lx + direction_y * ly) / dist;
}

RadarSimOutput simulate_radar(const SceneSpec& scene, const RadarConfig& config,
                              std::size_t radar_index) {
    validate_config(config);
    if (radar_index >= scene.radars.size())
        throw ConfigError("radar index out of range for the scene");
    if (!(scene.duration_s > 0.0))
        throw ConfigError("scene duration must be positive");
    if (!(scene.noise_power >= 0.0))
        throw ConfigError("scene noise power must be nonnegative");
    const RadarPose& pose = scene.radars[radar_index];
    if (!std::isfinite(pose.x_m) || !std::isfinite(pose.y_m) || !std::isfinite(pose.boresight_rad))
        throw ConfigError("radar pose must be finite");

    const auto n_slow =
        static_cast<std::size_t>(std::llround(scene.duration_s * config.slow_time_fs_hz));
    if (n_slow < 1)
        throw ConfigError("scene duration shorter than one slow-time sample");
    const auto n_ch = static_cast<std::size_t>(config.n_channels);
    const double dr = config.range_bin_m;

    const std::size_t n_scat = scene.scatterers.size();
    std::vector<double> rest_range(n_scat);
    std::vector<double> proj(n_scat, 0.0);
    std::vector<std::vector<double>> wf(n_scat);
    RadarSimOutput out;
    out.truth_toward_m.resize(n_scat);

    double max_range = 0.0;
    for (std::size_t k = 0; k < n_scat; ++k) {
        const Scatterer& sc = scene.scatterers[k];
        const double lx = sc.x_m - pose.x_m;
        const double ly = sc.y_m - pose.y_m;
        const double dist = std::hypot(lx, ly);
        if (!(dist > 0.0))
            throw ConfigError("scatterer coincides with the radar position");
        rest_range[k] = dist;
        max_range = std::max(max_range, dist);
        const double theta = wrap_to_pi(std::atan2(ly, lx) - pose.boresight_rad);
        if (!(std::abs(theta) <= kPi / 2.0))
            throw ConfigError("scatterer lies outside the [-90, 90] degree angle coverage");
        if (!sc.is_static) {
            proj[k] = project_los(sc.direction_x, sc.direction_y, pose, sc.x_m, sc.y_m);
            wf[k] = synth_waveform(sc.motion, n_slow, config.slow_time_fs_hz,
                                   waveform_seed(scene.seed, k));
            out.truth_toward_m[k].resize(n_slow);
            for (std::size_t t = 0; t < n_slow; ++t)
                out.truth_toward_m[k][t] = -proj[k] * wf[k][t];
        } else {
            out.truth_toward_m[k].assign(n_slow, 0.0);
        }
    }

    double extent = scene.range_extent_m;
    if (extent > 0.0) {
        for (std::size_t k = 0; k < n_scat; ++k)
            if (rest_range[k] > extent)
                throw ConfigError("scatterer lies beyond the simulated range extent");
    } else {
        extent = max_range + (kKernelCutBins + 2.0) * dr;
    }
    const auto n_range = static_cast<std::size_t>(std::floor(extent / dr)) + 1;

    DataCube& cube = out.cube;
    cube.config = config;
    cube.radar_id = pose.radar_id;
    cube.n_slow = n_slow;
    cube.n_range = n_range;
    cube.samples.assign(n_slow * n_range * n_ch, cd{0.0, 0.0});

    // Per-channel steering factors are constant over time for each scatterer.
    std::vector<std::vector<cd>> chan(n_scat, std::vector<cd>(n_ch));
    for (std::size_t k = 0; k < n_scat; ++k) {
        const Scatterer& sc = scene.scatterers[k];
        const double theta = wrap_to_pi(
            std::atan2(sc.y_m - pose.y_m, sc.x_m - pose.x_m) - pose.boresight_rad);
        const double phase_step = -kPi * std::sin(theta);
        for (std::size_t n = 0; n < n_ch; ++n)
            chan[k][n] = sc.reflectivity * std::polar(1.0, phase_step * static_cast<double>(n));
    }

    const double four_pi_over_lambda = 4.0 * kPi / config.wavelength_m;
    const double kcoef = 4.0 * std::numbers::ln2 / (dr * dr); // FWHM = one range bin
    for (std::size_t t = 0; t < n_slow; ++t) {
        for (std::size_t k = 0; k < n_scat; ++k) {
            const double r = scene.scatterers[k].is_static
                                 ? rest_range[k]
                                 : rest_range[k] + proj[k] * wf[k][t];
            const cd echo = std::polar(1.0, -four_pi_over_lambda * r);
            const double lo_f = std::ceil((r - kKernelCutBins * dr) / dr);
            const double hi_f = std::floor((r + kKernelCutBins * dr) / dr);
            if (hi_f < 0.0 || lo_f > static_cast<double>(n_range - 1)) continue;
            const auto lo = static_cast<std::size_t>(std::max(0.0, lo_f));
            const auto hi = static_cast<std::size_t>(
                std::min(static_cast<double>(n_range - 1), hi_f));
            for (std::size_t bin = lo; bin <= hi; ++bin) {
                const double x = static_cast<double>(bin) * dr - r;
                const cd coef = echo * std::exp(-kcoef * x * x);
                cd* row = cube.samples.data() + (t * n_range + bin) * n_ch;
                for (std::size_t n = 0; n < n_ch; ++n) row[n] += coef * chan[k][n];
            }
        }
    }

    if (scene.noise_power > 0.0) {
        GaussianGen gen(noise_seed(scene.seed, radar_index));
        const double scale = std::sqrt(scene.noise_power / 2.0);
        for (cd& s : cube.samples) {
            const double re = scale * gen.next();
            const double im = scale * gen.next();
            s += cd{re, im};
        }
    }
    return out;
}

SimOutput simulate(const SceneSpec& scene, const RadarConfig& config) {
    if (scene.radars.empty())
        throw ConfigError("scene must contain at least one radar");
    SimOutput out;
    out.radars.reserve(scene.radars.size());
    for (std::size_t i = 0; i < scene.radars.size(); ++i)
        out.radars.push_back(simulate_radar(scene, config, i));
    return out;
}

} // namespace radmotion
