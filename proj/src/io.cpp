#include "radmotion/io.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kCubeVersionKey = "radmotion_cube_version";
constexpr int kCubeVersion = 1;

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool valid_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
        if (!ok) return false;
    }
    return true;
}

void require_id(const std::string& id, const char* what) {
    if (!valid_id(id))
        throw IoError(std::string(what) + " '" + id + "' must match [A-Za-z0-9_.-]+");
}

double parse_double(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw IoError("cannot parse number '" + s + "' in " + context);
    return v;
}

long long parse_int(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw IoError("cannot parse integer '" + s + "' in " + context);
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

// Writes to <path>.tmp and renames on commit, so readers never observe a
// partially written file.
class AtomicFile {
public:
    AtomicFile(const fs::path& path, bool binary)
        : final_(path), temp_(path.string() + ".tmp") {
        stream_.open(temp_, binary ? (std::ios::out | std::ios::binary) : std::ios::out);
        if (!stream_)
            throw IoError("cannot open '" + temp_.string() + "' for writing");
    }

    ~AtomicFile() {
        if (stream_.is_open()) {
            stream_.close();
            std::error_code ec;
            fs::remove(temp_, ec);
        }
    }

    std::ofstream& stream() { return stream_; }

    void commit() {
        stream_.flush();
        if (!stream_)
            throw IoError("failed writing '" + temp_.string() + "'");
        stream_.close();
        std::error_code ec;
        fs::rename(temp_, final_, ec);
        if (ec) {
            fs::remove(temp_, ec);
            throw IoError("cannot finalize '" + final_.string() + "'");
        }
    }

private:
    fs::path final_;
    fs::path temp_;
    std::ofstream stream_;
};

void check_header(const std::vector<std::string>& lines, const std::string& expected,
                  const fs::path& path) {
    if (lines.empty() || lines[0] != expected)
        throw IoError("'" + path.string() + "' must start with header '" + expected + "'");
}

const json& require_key(const json& j, const char* key, const fs::path& path) {
    const auto it = j.find(key);
    if (it == j.end())
        throw IoError("'" + path.string() + "' is missing key '" + key + "'");
    return *it;
}

double num_or(const json& j, const char* key, double fallback) {
    const auto it = j.find(key);
    return (it == j.end()) ? fallback : it->get<double>();
}

} // namespace

void write_cube(const DataCube& cube, const fs::path& header_path) {
    validate_cube(cube);
    require_id(cube.radar_id, "radar_id");
    for (const cd& v : cube.samples) {
        if (std::abs(v.real()) > FLT_MAX || std::abs(v.imag()) > FLT_MAX)
            throw NumericError("cube sample exceeds the float32 payload range");
    }

    const fs::path payload_name = header_path.stem().string() + ".rbin";
    const fs::path payload_path = header_path.parent_path() / payload_name;
    const std::uint64_t payload_bytes = static_cast<std::uint64_t>(cube.samples.size()) * 8;

    {
        AtomicFile payload(payload_path, true);
        std::vector<float> buffer;
        buffer.reserve(1 << 16);
        for (const cd& v : cube.samples) {
            buffer.push_back(static_cast<float>(v.real()));
            buffer.push_back(static_cast<float>(v.imag()));
            if (buffer.size() == (1 << 16)) {
                payload.stream().write(reinterpret_cast<const char*>(buffer.data()),
                                       static_cast<std::streamsize>(buffer.size() * 4));
                buffer.clear();
            }
        }
        if (!buffer.empty())
            payload.stream().write(reinterpret_cast<const char*>(buffer.data()),
                                   static_cast<std::streamsize>(buffer.size() * 4));
        payload.commit();
    }

    AtomicFile header(header_path, false);
    std::ofstream& out = header.stream();
    out << kCubeVersionKey << ' ' << kCubeVersion << '\n';
    out << "n_slow " << cube.n_slow << '\n';
    out << "n_range " << cube.n_range << '\n';
    out << "n_channels " << cube.config.n_channels << '\n';
    out << "fs_hz " << fmt_g17(cube.config.slow_time_fs_hz) << '\n';
    out << "range_bin_m " << fmt_g17(cube.config.range_bin_m) << '\n';
    out << "wavelength_m " << fmt_g17(cube.config.wavelength_m) << '\n';
    out << "radar_id " << cube.radar_id << '\n';
    out << "created_by radmotion-0.1.0\n";
    out << "payload_file " << payload_name.string() << '\n';
    out << "payload_bytes " << payload_bytes << '\n';
    header.commit();
}

DataCube read_cube(const fs::path& header_path) {
    std::map<std::string, std::string> kv;
    for (const std::string& line : read_lines(header_path)) {
        if (line.empty()) continue;
        const std::size_t sp = line.find(' ');
        if (sp == std::string::npos)
            throw IoError("malformed header line '" + line + "' in '" + header_path.string() + "'");
        kv[line.substr(0, sp)] = line.substr(sp + 1);
    }
    const auto get = [&](const char* key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw IoError("cube header '" + header_path.string() + "' is missing key '" +
                          key + "'");
        return it->second;
    };

    if (parse_int(get(kCubeVersionKey), "cube header") != kCubeVersion)
        throw IoError("unsupported cube format version in '" + header_path.string() + "'");

    DataCube cube;
    cube.n_slow = static_cast<std::size_t>(parse_int(get("n_slow"), "cube header"));
    cube.n_range = static_cast<std::size_t>(parse_int(get("n_range"), "cube header"));
    cube.config.n_channels = static_cast<int>(parse_int(get("n_channels"), "cube header"));
    cube.config.slow_time_fs_hz = parse_double(get("fs_hz"), "cube header");
    cube.config.range_bin_m = parse_double(get("range_bin_m"), "cube header");
    cube.config.wavelength_m = parse_double(get("wavelength_m"), "cube header");
    cube.radar_id = get("radar_id");
    require_id(cube.radar_id, "radar_id");
    const auto payload_bytes =
        static_cast<std::uint64_t>(parse_int(get("payload_bytes"), "cube header"));

    if (cube.n_slow < 1 || cube.n_range < 1 || cube.config.n_channels < 1)
        throw IoError("cube header '" + header_path.string() + "' has empty dimensions");

    const std::size_t n_samples = cube.n_slow * cube.n_range * cube.n_channels();
    if (payload_bytes != static_cast<std::uint64_t>(n_samples) * 8)
        throw IoError("cube header dimensions disagree with payload_bytes in '" +
                      header_path.string() + "'");

    const fs::path payload_path = header_path.parent_path() / get("payload_file");
    std::ifstream in(payload_path, std::ios::binary);
    if (!in)
        throw IoError("cannot open cube payload '" + payload_path.string() + "'");
    in.seekg(0, std::ios::end);
    const auto actual = static_cast<std::uint64_t>(in.tellg());
    if (actual != payload_bytes)
        throw IoError("cube payload '" + payload_path.string() + "' has " +
                      std::to_string(actual) + " bytes, expected " +
                      std::to_string(payload_bytes));
    in.seekg(0);

    cube.samples.resize(n_samples);
    std::vector<float> buffer(1 << 16);
    std::size_t written = 0;
    float pending_re = 0.0f;
    bool have_re = false;
    while (written < n_samples) {
        in.read(reinterpret_cast<char*>(buffer.data()),
                static_cast<std::streamsize>(buffer.size() * 4));
        const auto got = static_cast<std::size_t>(in.gcount()) / 4;
        if (got == 0)
            throw IoError("unexpected end of cube payload '" + payload_path.string() + "'");
        for (std::size_t i = 0; i < got && written < n_samples; ++i) {
            const float f = buffer[i];
            if (!std::isfinite(f))
                throw NumericError("cube payload contains non-finite samples");
            if (!have_re) {
                pending_re = f;
                have_re = true;
            } else {
                cube.samples[written++] = cd{static_cast<double>(pending_re),
                                             static_cast<double>(f)};
                have_re = false;
            }
        }
    }
    return cube;
}

std::vector<SeatRegion> read_regions(const fs::path& path) {
    const auto lines = read_lines(path);
    check_header(lines, "participant_id,r_min_m,r_max_m,theta_min_deg,theta_max_deg", path);

    std::vector<SeatRegion> regions;
    std::set<std::string> ids;
    struct DegRect {
        double r0, r1, t0, t1;
    };
    std::vector<DegRect> rects;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        if (f.size() != 5)
            throw IoError("region row " + std::to_string(i + 1) + " in '" + path.string() +
                          "' must have 5 fields");
        const std::string& id = f[0];
        require_id(id, "participant_id");
        const std::string ctx = "region '" + id + "'";
        const double r0 = parse_double(f[1], ctx);
        const double r1 = parse_double(f[2], ctx);
        const double t0 = parse_double(f[3], ctx);
        const double t1 = parse_double(f[4], ctx);
        if (!ids.insert(id).second)
            throw ConfigError("duplicate region id '" + id + "'");
        if (!(r0 >= 0.0))
            throw ConfigError(ctx + ": r_min must be nonnegative");
        if (!(r0 < r1))
            throw ConfigError(ctx + ": r_min must be below r_max");
        if (!(t0 < t1))
            throw ConfigError(ctx + ": theta_min must be below theta_max");
        if (!(t0 >= -90.0) || !(t1 <= 90.0))
            throw ConfigError(ctx + ": angles must lie within [-90, 90] degrees");
        for (std::size_t j = 0; j < rects.size(); ++j) {
            const DegRect& o = rects[j];
            if (r0 < o.r1 && o.r0 < r1 && t0 < o.t1 && o.t0 < t1)
                throw ConfigError("regions '" + regions[j].participant_id + "' and '" + id +
                                  "' overlap");
        }
        rects.push_back({r0, r1, t0, t1});
        constexpr double kDeg = 3.14159265358979323846 / 180.0;
        regions.push_back(SeatRegion{id, r0, r1, t0 * kDeg, t1 * kDeg});
    }
    if (regions.empty())
        throw ConfigError("region file '" + path.string() + "' contains no regions");
    return regions;
}

void write_regions(const std::vector<SeatRegion>& regions, const fs::path& path) {
    constexpr double kInvDeg = 180.0 / 3.14159265358979323846;
    AtomicFile out(path, false);
    out.stream() << "participant_id,r_min_m,r_max_m,theta_min_deg,theta_max_deg\n";
    for (const SeatRegion& r : regions) {
        require_id(r.participant_id, "participant_id");
        out.stream() << r.participant_id << ',' << fmt_g17(r.r_min_m) << ','
                     << fmt_g17(r.r_max_m) << ',' << fmt_g17(r.theta_min_rad * kInvDeg) << ','
                     << fmt_g17(r.theta_max_rad * kInvDeg) << '\n';
    }
    out.commit();
}

ScoreTable read_scores(const fs::path& path) {
    const auto lines = read_lines(path);
    check_header(lines, "participant,experiment,evaluator,beta1,beta2", path);

    ScoreTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        if (f.size() != 5)
            throw IoError("score row " + std::to_string(i + 1) + " in '" + path.string() +
                          "' must have 5 fields");
        ScoreEntry e;
        e.participant = f[0];
        require_id(e.participant, "participant");
        e.experiment = static_cast<int>(parse_int(f[1], "score table"));
        e.evaluator = f[2];
        require_id(e.evaluator, "evaluator");
        e.beta1 = static_cast<int>(parse_int(f[3], "score table"));
        e.beta2 = static_cast<int>(parse_int(f[4], "score table"));
        if (e.beta1 < 0 || e.beta1 > 2 || e.beta2 < 0 || e.beta2 > 2)
            throw ConfigError("score items must lie in {0, 1, 2} (row " +
                              std::to_string(i + 1) + ")");
        table.entries.push_back(std::move(e));
    }
    if (table.entries.empty())
        throw ConfigError("score file '" + path.string() + "' contains no rows");

    // Completeness/duplicate checks over the observed participant x experiment
    // x evaluator grid.
    std::set<std::string> pset;
    std::set<int> jset;
    std::set<std::string> kset;
    std::set<std::string> seen;
    for (const ScoreEntry& e : table.entries) {
        pset.insert(e.participant);
        jset.insert(e.experiment);
        kset.insert(e.evaluator);
        const std::string key =
            e.participant + "\x1f" + std::to_string(e.experiment) + "\x1f" + e.evaluator;
        if (!seen.insert(key).second)
            throw ConfigError("duplicate score row for participant '" + e.participant + "'");
    }
    if (seen.size() != pset.size() * jset.size() * kset.size())
        throw ConfigError("score table is missing participant/experiment/evaluator rows");
    return table;
}

void write_scores(const ScoreTable& table, const fs::path& path) {
    AtomicFile out(path, false);
    out.stream() << "participant,experiment,evaluator,beta1,beta2\n";
    for (const ScoreEntry& e : table.entries) {
        require_id(e.participant, "participant");
        require_id(e.evaluator, "evaluator");
        out.stream() << e.participant << ',' << e.experiment << ',' << e.evaluator << ','
                     << e.beta1 << ',' << e.beta2 << '\n';
    }
    out.commit();
}

namespace {

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

WaveformSpec waveform_from_json(const json& j, const fs::path& path) {
    WaveformSpec spec;
    const std::string kind = require_key(j, "kind", path).get<std::string>();
    if (kind == "sinusoid") {
        spec.kind = WaveformKind::kSinusoid;
        spec.amplitude_m = require_key(j, "amplitude_m", path).get<double>();
        spec.freq_hz = require_key(j, "freq_hz", path).get<double>();
        spec.phase_rad = num_or(j, "phase_rad", 0.0);
    } else if (kind == "multi_sine") {
        spec.kind = WaveformKind::kMultiSine;
        spec.multi_amps_m = require_key(j, "amplitudes_m", path).get<std::vector<double>>();
        spec.multi_freqs_hz = require_key(j, "freqs_hz", path).get<std::vector<double>>();
        spec.multi_phases_rad = require_key(j, "phases_rad", path).get<std::vector<double>>();
    } else if (kind == "band_noise") {
        spec.kind = WaveformKind::kBandNoise;
        spec.amplitude_m = require_key(j, "sigma_m", path).get<double>();
        spec.cutoff_hz = require_key(j, "cutoff_hz", path).get<double>();
    } else if (kind == "burst") {
        spec.kind = WaveformKind::kBurst;
        spec.amplitude_m = require_key(j, "amplitude_m", path).get<double>();
        spec.freq_hz = require_key(j, "freq_hz", path).get<double>();
        spec.center_s = require_key(j, "center_s", path).get<double>();
        spec.width_s = require_key(j, "width_s", path).get<double>();
    } else if (kind == "step") {
        spec.kind = WaveformKind::kStep;
        spec.amplitude_m = require_key(j, "amplitude_m", path).get<double>();
        spec.step_time_s = require_key(j, "step_time_s", path).get<double>();
    } else {
        throw IoError("unknown waveform kind '" + kind + "' in '" + path.string() + "'");
    }
    return spec;
}

json waveform_to_json(const WaveformSpec& spec) {
    json j;
    switch (spec.kind) {
    case WaveformKind::kSinusoid:
        j["kind"] = "sinusoid";
        j["amplitude_m"] = spec.amplitude_m;
        j["freq_hz"] = spec.freq_hz;
        j["phase_rad"] = spec.phase_rad;
        break;
    case WaveformKind::kMultiSine:
        j["kind"] = "multi_sine";
        j["amplitudes_m"] = spec.multi_amps_m;
        j["freqs_hz"] = spec.multi_freqs_hz;
        j["phases_rad"] = spec.multi_phases_rad;
        break;
    case WaveformKind::kBandNoise:
        j["kind"] = "band_noise";
        j["sigma_m"] = spec.amplitude_m;
        j["cutoff_hz"] = spec.cutoff_hz;
        break;
    case WaveformKind::kBurst:
        j["kind"] = "burst";
        j["amplitude_m"] = spec.amplitude_m;
        j["freq_hz"] = spec.freq_hz;
        j["center_s"] = spec.center_s;
        j["width_s"] = spec.width_s;
        break;
    case WaveformKind::kStep:
        j["kind"] = "step";
        j["amplitude_m"] = spec.amplitude_m;
        j["step_time_s"] = spec.step_time_s;
        break;
    }
    return j;
}

} // namespace

SceneSpec read_scene(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse scene '" + path.string() + "': " + e.what());
    }
    try {
        SceneSpec scene;
        scene.duration_s = require_key(j, "duration_s", path).get<double>();
        scene.noise_power = num_or(j, "noise_power", 0.0);
        scene.seed = j.value("seed", std::uint64_t{0});
        scene.range_extent_m = num_or(j, "range_extent_m", 0.0);
        for (const json& rj : require_key(j, "radars", path)) {
            RadarPose pose;
            pose.radar_id = require_key(rj, "id", path).get<std::string>();
            require_id(pose.radar_id, "radar id");
            pose.x_m = require_key(rj, "x_m", path).get<double>();
            pose.y_m = require_key(rj, "y_m", path).get<double>();
            pose.boresight_rad = require_key(rj, "boresight_deg", path).get<double>() * kDegToRad;
            scene.radars.push_back(std::move(pose));
        }
        for (const json& sj : require_key(j, "scatterers", path)) {
            Scatterer sc;
            sc.x_m = require_key(sj, "x_m", path).get<double>();
            sc.y_m = require_key(sj, "y_m", path).get<double>();
            sc.reflectivity = cd{num_or(sj, "reflectivity_re", 1.0),
                                 num_or(sj, "reflectivity_im", 0.0)};
            sc.is_static = sj.value("static", false);
            if (!sc.is_static) {
                sc.direction_x = require_key(sj, "direction_x", path).get<double>();
                sc.direction_y = require_key(sj, "direction_y", path).get<double>();
                sc.motion = waveform_from_json(require_key(sj, "waveform", path), path);
            }
            scene.scatterers.push_back(std::move(sc));
        }
        return scene;
    } catch (const json::exception& e) {
        throw IoError("invalid scene '" + path.string() + "': " + e.what());
    }
}

void write_scene(const SceneSpec& scene, const fs::path& path) {
    json j;
    j["duration_s"] = scene.duration_s;
    j["noise_power"] = scene.noise_power;
    j["seed"] = scene.seed;
    j["range_extent_m"] = scene.range_extent_m;
    j["radars"] = json::array();
    for (const RadarPose& pose : scene.radars) {
        json rj;
        rj["id"] = pose.radar_id;
        rj["x_m"] = pose.x_m;
        rj["y_m"] = pose.y_m;
        rj["boresight_deg"] = pose.boresight_rad / kDegToRad;
        j["radars"].push_back(std::move(rj));
    }
    j["scatterers"] = json::array();
    for (const Scatterer& sc : scene.scatterers) {
        json sj;
        sj["x_m"] = sc.x_m;
        sj["y_m"] = sc.y_m;
        sj["reflectivity_re"] = sc.reflectivity.real();
        sj["reflectivity_im"] = sc.reflectivity.imag();
        sj["static"] = sc.is_static;
        if (!sc.is_static) {
            sj["direction_x"] = sc.direction_x;
            sj["direction_y"] = sc.direction_y;
            sj["waveform"] = waveform_to_json(sc.motion);
        }
        j["scatterers"].push_back(std::move(sj));
    }
    AtomicFile out(path, false);
    out.stream() << j.dump(2) << '\n';
    out.commit();
}

AnalysisRun read_run(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("cannot parse run '" + path.string() + "': " + e.what());
    }
    const fs::path base = path.parent_path();
    const auto resolve = [&](const std::string& p) -> fs::path {
        const fs::path fp(p);
        return fp.is_absolute() ? fp : base / fp;
    };
    try {
        AnalysisRun run;
        run.t_rho_s = num_or(j, "t_rho_s", run.config.corr_segment_s);
        run.experiment = static_cast<int>(j.value("experiment", 1));
        run.emit_plots = j.value("emit_plots", false);
        run.out_dir = resolve(require_key(j, "out_dir", path).get<std::string>());
        for (const json& rj : require_key(j, "radars", path)) {
            RadarInputSpec spec;
            spec.cube = resolve(require_key(rj, "cube", path).get<std::string>());
            spec.regions = resolve(require_key(rj, "regions", path).get<std::string>());
            run.radars.push_back(std::move(spec));
        }
        if (run.radars.empty())
            throw IoError("run '" + path.string() + "' lists no radars");
        if (j.contains("scores"))
            run.scores = resolve(j["scores"].get<std::string>());
        if (j.contains("config")) {
            const json& c = j["config"];
            RadarConfig& cfg = run.config;
            cfg.wavelength_m = num_or(c, "wavelength_m", cfg.wavelength_m);
            cfg.n_channels = static_cast<int>(num_or(c, "n_channels", cfg.n_channels));
            cfg.slow_time_fs_hz = num_or(c, "slow_time_fs_hz", cfg.slow_time_fs_hz);
            cfg.range_bin_m = num_or(c, "range_bin_m", cfg.range_bin_m);
            cfg.clutter_segment_s = num_or(c, "clutter_segment_s", cfg.clutter_segment_s);
            cfg.movement_window_s = num_or(c, "movement_window_s", cfg.movement_window_s);
            cfg.corr_segment_s = num_or(c, "corr_segment_s", cfg.corr_segment_s);
            cfg.taylor_sidelobe_db = num_or(c, "taylor_sidelobe_db", cfg.taylor_sidelobe_db);
            cfg.taylor_nbar = static_cast<int>(num_or(c, "taylor_nbar", cfg.taylor_nbar));
            cfg.angle_grid.min_deg = num_or(c, "angle_min_deg", cfg.angle_grid.min_deg);
            cfg.angle_grid.max_deg = num_or(c, "angle_max_deg", cfg.angle_grid.max_deg);
            cfg.angle_grid.step_deg = num_or(c, "angle_step_deg", cfg.angle_grid.step_deg);
        }
        return run;
    } catch (const json::exception& e) {
        throw IoError("invalid run '" + path.string() + "': " + e.what());
    }
}

void write_trace_csv(const std::vector<std::string>& ids,
                     const std::vector<const std::vector<double>*>& columns, double fs_hz,
                     const fs::path& path) {
    if (ids.size() != columns.size() || ids.empty())
        throw ConfigError("trace table requires one id per column");
    const std::size_t n = columns[0]->size();
    for (const auto* col : columns) {
        if (col->size() != n)
            throw ConfigError("trace columns must have equal length");
    }
    AtomicFile out(path, false);
    std::string line = "time_s";
    for (const std::string& id : ids) {
        require_id(id, "trace column id");
        line += ',';
        line += id;
    }
    out.stream() << line << '\n';
    for (std::size_t t = 0; t < n; ++t) {
        line = fmt_g17(static_cast<double>(t) / fs_hz);
        for (const auto* col : columns) {
            line += ',';
            line += fmt_g17((*col)[t]);
        }
        out.stream() << line << '\n';
    }
    out.commit();
}

TraceTable read_trace_csv(const fs::path& path) {
    const auto lines = read_lines(path);
    if (lines.empty())
        throw IoError("trace file '" + path.string() + "' is empty");
    const auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "time_s")
        throw IoError("trace file '" + path.string() + "' must start with 'time_s,<id>,...'");

    TraceTable table;
    for (std::size_t c = 1; c < header.size(); ++c) {
        require_id(header[c], "trace column id");
        table.ids.push_back(header[c]);
    }
    table.columns.assign(table.ids.size(), {});
    std::vector<double> times;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        if (f.size() != header.size())
            throw IoError("trace row " + std::to_string(i + 1) + " in '" + path.string() +
                          "' has wrong field count");
        times.push_back(parse_double(f[0], "trace table"));
        for (std::size_t c = 1; c < f.size(); ++c)
            table.columns[c - 1].push_back(parse_double(f[c], "trace table"));
    }
    if (times.size() < 2)
        throw IoError("trace file '" + path.string() + "' needs at least 2 rows");
    const double dt = times[1] - times[0];
    if (!(dt > 0.0))
        throw IoError("trace file '" + path.string() + "' time axis must increase");
    double fs = 1.0 / dt;
    const double snapped = std::round(fs);
    if (std::abs(fs - snapped) < 1e-6 * std::max(1.0, snapped)) fs = snapped;
    table.fs_hz = fs;
    return table;
}

void write_correlation_csv(const CorrelationMatrixSequence& corr, const fs::path& path) {
    AtomicFile out(path, false);
    out.stream() << "segment,participant_row,participant_col,rho\n";
    const std::size_t m_count = corr.n_participants();
    for (std::size_t ell = 0; ell < corr.n_segments(); ++ell) {
        for (std::size_t m = 0; m < m_count; ++m) {
            for (std::size_t mp = 0; mp < m_count; ++mp) {
                out.stream() << ell << ',' << corr.participants[m] << ','
                             << corr.participants[mp] << ',' << fmt_g17(corr.rho(ell, m, mp))
                             << '\n';
            }
        }
    }
    out.commit();
}

CorrelationMatrixSequence read_correlation_csv(const fs::path& path, double t_rho_s) {
    const auto lines = read_lines(path);
    check_header(lines, "segment,participant_row,participant_col,rho", path);

    CorrelationMatrixSequence corr;
    corr.t_rho_s = t_rho_s;
    std::map<std::string, std::size_t> index;
    struct Row {
        std::size_t ell, m, mp;
        double rho;
    };
    std::vector<Row> rows;
    std::size_t max_ell = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = split_csv_line(lines[i]);
        if (f.size() != 4)
            throw IoError("correlation row " + std::to_string(i + 1) + " in '" +
                          path.string() + "' must have 4 fields");
        const auto ell = static_cast<std::size_t>(parse_int(f[0], "correlation table"));
        for (const std::string& id : {f[1], f[2]}) {
            require_id(id, "participant");
            if (index.find(id) == index.end()) {
                index[id] = corr.participants.size();
                corr.participants.push_back(id);
            }
        }
        rows.push_back({ell, index[f[1]], index[f[2]], parse_double(f[3], "correlation table")});
        max_ell = std::max(max_ell, ell);
    }
    const std::size_t m_count = corr.participants.size();
    if (m_count == 0)
        throw IoError("correlation file '" + path.string() + "' contains no rows");
    const double nan = std::nan("");
    corr.matrices.assign(max_ell + 1, std::vector<double>(m_count * m_count, nan));
    std::vector<std::vector<std::uint8_t>> seen(
        max_ell + 1, std::vector<std::uint8_t>(m_count * m_count, 0));
    for (const Row& row : rows) {
        if (seen[row.ell][row.m * m_count + row.mp])
            throw IoError("duplicate correlation entry in '" + path.string() + "'");
        seen[row.ell][row.m * m_count + row.mp] = 1;
        corr.matrices[row.ell][row.m * m_count + row.mp] = row.rho;
    }
    for (const auto& s : seen) {
        for (const std::uint8_t got : s) {
            if (!got)
                throw IoError("correlation file '" + path.string() +
                              "' does not cover the full participant grid");
        }
    }
    return corr;
}

void write_association_csv(const AssociationReport& report, const fs::path& path) {
    AtomicFile out(path, false);
    out.stream() << "participant,segment,p_hat\n";
    for (std::size_t m = 0; m < report.participants.size(); ++m) {
        for (std::size_t ell = 0; ell < report.p_hat.size(); ++ell) {
            out.stream() << report.participants[m] << ',' << ell << ','
                         << static_cast<int>(report.p_hat[ell][m]) << '\n';
        }
    }
    out.commit();
}

void write_tracks_csv(const std::vector<TargetTrack>& tracks, const fs::path& path) {
    constexpr double kInvDeg = 180.0 / 3.14159265358979323846;
    AtomicFile out(path, false);
    out.stream() << "participant_id,segment,range_m,theta_deg\n";
    for (const TargetTrack& track : tracks) {
        for (std::size_t ell = 0; ell < track.cells.size(); ++ell) {
            out.stream() << track.participant_id << ',' << ell << ','
                         << fmt_g17(track.cells[ell].range_m) << ','
                         << fmt_g17(track.cells[ell].theta_rad * kInvDeg) << '\n';
        }
    }
    out.commit();
}

void write_objective_csv(const std::vector<ObjectiveIndexEntry>& entries, const fs::path& path) {
    AtomicFile out(path, false);
    out.stream() << "participant,experiment,b_mps\n";
    for (const ObjectiveIndexEntry& e : entries)
        out.stream() << e.participant << ',' << e.experiment << ',' << fmt_g17(e.b_mps) << '\n';
    out.commit();
}

void write_normalized_scores_csv(const ScoreTable& table, const fs::path& path) {
    if (table.beta.empty())
        throw ConfigError("score table has no normalized values to write");
    AtomicFile out(path, false);
    out.stream() << "participant,experiment,beta\n";
    for (std::size_t m = 0; m < table.participants.size(); ++m) {
        for (std::size_t j = 0; j < table.experiments.size(); ++j) {
            out.stream() << table.participants[m] << ',' << table.experiments[j] << ','
                         << fmt_g17(table.beta_at(m, j)) << '\n';
        }
    }
    out.commit();
}

void write_summary_csv(const std::vector<std::pair<std::string, std::string>>& rows,
                       const fs::path& path) {
    AtomicFile out(path, false);
    out.stream() << "metric,value\n";
    for (const auto& [k, v] : rows) out.stream() << k << ',' << v << '\n';
    out.commit();
}

void write_truth_csv(const std::vector<std::vector<double>>& truth, double fs_hz,
                     const fs::path& path) {
    std::vector<std::string> ids;
    std::vector<const std::vector<double>*> cols;
    for (std::size_t k = 0; k < truth.size(); ++k) {
        ids.push_back("scatterer_" + std::to_string(k));
        cols.push_back(&truth[k]);
    }
    write_trace_csv(ids, cols, fs_hz, path);
}

} // namespace radmotion
