#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "radmotion/analytics.hpp"
#include "radmotion/errors.hpp"
#include "radmotion/io.hpp"
#include "radmotion/pipeline.hpp"
#include "radmotion/simulator.hpp"
#include "radmotion/svg_plot.hpp"

namespace {

namespace fs = std::filesystem;
using namespace radmotion;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitPartial = 10;

void add_config_options(CLI::App* cmd, RadarConfig& config) {
    cmd->add_option("--wavelength-m", config.wavelength_m, "Center wavelength [m]");
    cmd->add_option("--n-channels", config.n_channels, "Virtual channel count");
    cmd->add_option("--fs-hz", config.slow_time_fs_hz, "Slow-time sampling rate [Hz]");
    cmd->add_option("--range-bin-m", config.range_bin_m, "Range bin spacing [m]");
    cmd->add_option("--clutter-segment-s", config.clutter_segment_s,
                    "Clutter/localization segment length T [s]");
    cmd->add_option("--movement-window-s", config.movement_window_s,
                    "Movement index window T_b [s]");
    cmd->add_option("--corr-segment-s", config.corr_segment_s,
                    "Correlation segment length T_rho [s]");
    cmd->add_option("--taylor-sidelobe-db", config.taylor_sidelobe_db,
                    "Taylor taper sidelobe level [dB, negative]");
    cmd->add_option("--taylor-nbar", config.taylor_nbar, "Taylor taper nbar");
    cmd->add_option("--angle-min-deg", config.angle_grid.min_deg, "Angle grid start [deg]");
    cmd->add_option("--angle-max-deg", config.angle_grid.max_deg, "Angle grid end [deg]");
    cmd->add_option("--angle-step-deg", config.angle_grid.step_deg, "Angle grid step [deg]");
}

void show_config(const RadarConfig& c) {
    const auto line = [](const char* key, double v) {
        // Shortest representation that still parses back to the same double.
        char buf[64];
        for (int prec = 15; prec <= 17; ++prec) {
            std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
            if (std::strtod(buf, nullptr) == v) break;
        }
        std::printf("%s %s\n", key, buf);
    };
    line("wavelength_m", c.wavelength_m);
    std::printf("n_channels %d\n", c.n_channels);
    line("element_spacing_wavelengths", c.element_spacing_wavelengths);
    line("slow_time_fs_hz", c.slow_time_fs_hz);
    line("range_bin_m", c.range_bin_m);
    line("clutter_segment_s", c.clutter_segment_s);
    line("movement_window_s", c.movement_window_s);
    line("corr_segment_s", c.corr_segment_s);
    line("taylor_sidelobe_db", c.taylor_sidelobe_db);
    std::printf("taylor_nbar %d\n", c.taylor_nbar);
    line("angle_min_deg", c.angle_grid.min_deg);
    line("angle_max_deg", c.angle_grid.max_deg);
    line("angle_step_deg", c.angle_grid.step_deg);
}

int run_simulate(const fs::path& scene_path, const fs::path& out_dir,
                 const RadarConfig& config) {
    validate_config(config);
    const SceneSpec scene = read_scene(scene_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + out_dir.string() + "'");
    if (scene.radars.empty())
        throw ConfigError("scene must contain at least one radar");
    for (std::size_t i = 0; i < scene.radars.size(); ++i) {
        const RadarSimOutput out = simulate_radar(scene, config, i);
        const fs::path header = out_dir / (out.cube.radar_id + ".rcube");
        write_cube(out.cube, header);
        std::printf("wrote %s\n", header.string().c_str());
        if (!out.truth_toward_m.empty()) {
            const fs::path truth = out_dir / ("truth_" + out.cube.radar_id + ".csv");
            write_truth_csv(out.truth_toward_m, config.slow_time_fs_hz, truth);
            std::printf("wrote %s\n", truth.string().c_str());
        }
    }
    return kExitOk;
}

int run_process(const fs::path& cube_path, const fs::path& regions_path,
                const fs::path& out_dir, const RadarConfig& config, bool plots) {
    std::vector<SeatRegion> regions = read_regions(regions_path);
    std::sort(regions.begin(), regions.end(), [](const SeatRegion& a, const SeatRegion& b) {
        return a.participant_id < b.participant_id;
    });
    const DataCube cube = read_cube(cube_path);
    const RadarProcessResult result = process_cube(cube, regions, config);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + out_dir.string() + "'");
    std::vector<std::string> ids;
    std::vector<const std::vector<double>*> dcols;
    std::vector<const std::vector<double>*> bcols;
    for (std::size_t m = 0; m < regions.size(); ++m) {
        ids.push_back(regions[m].participant_id);
        dcols.push_back(&result.displacement[m].d_m);
        bcols.push_back(&result.movement[m].b_mps);
    }
    const double fs = cube.config.slow_time_fs_hz;
    const fs::path dpath = out_dir / ("displacement_" + result.radar_id + ".csv");
    const fs::path bpath = out_dir / ("movement_" + result.radar_id + ".csv");
    const fs::path tpath = out_dir / ("tracks_" + result.radar_id + ".csv");
    write_trace_csv(ids, dcols, fs, dpath);
    write_trace_csv(ids, bcols, fs, bpath);
    write_tracks_csv(result.tracks, tpath);
    std::printf("wrote %s\n", dpath.string().c_str());
    std::printf("wrote %s\n", bpath.string().c_str());
    std::printf("wrote %s\n", tpath.string().c_str());
    if (plots) {
        const fs::path ppath = out_dir / ("movement_" + result.radar_id + ".svg");
        write_movement_svg(result.movement, ppath);
        std::printf("wrote %s\n", ppath.string().c_str());
    }
    return kExitOk;
}

std::vector<MovementTrace> traces_from_table(const TraceTable& table,
                                             const std::string& radar_id) {
    std::vector<MovementTrace> traces;
    for (std::size_t c = 0; c < table.ids.size(); ++c) {
        MovementTrace tr;
        tr.participant_id = table.ids[c];
        tr.radar_id = radar_id;
        tr.fs_hz = table.fs_hz;
        tr.b_mps = table.columns[c];
        traces.push_back(std::move(tr));
    }
    std::sort(traces.begin(), traces.end(), [](const MovementTrace& a, const MovementTrace& b) {
        return a.participant_id < b.participant_id;
    });
    return traces;
}

int run_correlate(const std::vector<std::string>& movement_files, double t_rho,
                  const fs::path& out_path) {
    if (movement_files.size() != 2)
        throw ConfigError("correlate requires exactly two --movement files");
    const TraceTable t1 = read_trace_csv(movement_files[0]);
    const TraceTable t2 = read_trace_csv(movement_files[1]);
    if (t1.fs_hz != t2.fs_hz)
        throw ConfigError("movement tables must share a sampling rate");
    const std::vector<MovementTrace> a = traces_from_table(t1, "radar1");
    const std::vector<MovementTrace> b = traces_from_table(t2, "radar2");
    if (a.size() != b.size())
        throw ConfigError("movement tables must cover the same participants");
    for (std::size_t m = 0; m < a.size(); ++m) {
        if (a[m].participant_id != b[m].participant_id)
            throw ConfigError("movement tables must cover the same participant ids");
    }
    const CorrelationMatrixSequence corr = correlation_matrices(a, b, t_rho, t1.fs_hz);
    write_correlation_csv(corr, out_path);
    std::printf("wrote %s\n", out_path.string().c_str());
    return kExitOk;
}

int run_associate(const fs::path& corr_path, double t_rho, const fs::path& out_path) {
    const CorrelationMatrixSequence corr = read_correlation_csv(corr_path, t_rho);
    const AssociationReport report = association_accuracy(corr);
    write_association_csv(report, out_path);
    std::printf("wrote %s\n", out_path.string().c_str());
    std::printf("association_accuracy %.17g\n", report.accuracy);
    return kExitOk;
}

int run_scores(const fs::path& scores_path, const fs::path& out_path) {
    const ScoreTable table = normalize_scores(read_scores(scores_path));
    write_normalized_scores_csv(table, out_path);
    std::printf("wrote %s\n", out_path.string().c_str());
    return kExitOk;
}

int run_report(const fs::path& run_path) {
    const AnalysisRun run = read_run(run_path);
    const PipelineReport report = run_pipeline(run);
    for (const auto& f : report.files_written)
        std::printf("wrote %s\n", f.string().c_str());
    if (report.association_p)
        std::printf("association_accuracy %.17g\n", *report.association_p);
    if (report.pearson_b_beta)
        std::printf("pearson_b_beta %.17g\n", *report.pearson_b_beta);
    if (report.partial) {
        std::fprintf(stderr, "partial: %s\n", report.partial_reason.c_str());
        return kExitPartial;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"beamformed radar body-movement analytics"};
    app.require_subcommand(1);

    RadarConfig config;

    auto* cmd_config = app.add_subcommand("config", "Show configuration defaults");
    bool show = false;
    cmd_config->add_flag("--show", show, "Print every default as 'key value'");

    auto* cmd_sim = app.add_subcommand("simulate", "Render scene cubes with ground truth");
    std::string scene_path;
    std::string sim_out;
    cmd_sim->add_option("--scene", scene_path, "Scene JSON")->required();
    cmd_sim->add_option("--out-dir", sim_out, "Output directory")->required();
    add_config_options(cmd_sim, config);

    auto* cmd_proc = app.add_subcommand("process", "Cube to displacement/movement traces");
    std::string cube_path;
    std::string regions_path;
    std::string proc_out;
    bool plots = false;
    cmd_proc->add_option("--cube", cube_path, "Cube header file")->required();
    cmd_proc->add_option("--regions", regions_path, "Seat region CSV")->required();
    cmd_proc->add_option("--out-dir", proc_out, "Output directory")->required();
    cmd_proc->add_flag("--plots", plots, "Also write SVG movement plots");
    add_config_options(cmd_proc, config);

    auto* cmd_corr = app.add_subcommand("correlate", "Segmented cross-radar correlation");
    std::vector<std::string> movement_files;
    double t_rho = 60.0;
    std::string corr_out;
    cmd_corr->add_option("--movement", movement_files, "Movement CSV (give twice)")
        ->expected(1, 2);
    cmd_corr->add_option("--t-rho", t_rho, "Correlation segment length [s]");
    cmd_corr->add_option("--out", corr_out, "Output CSV")->required();

    auto* cmd_assoc = app.add_subcommand("associate", "Echo association from correlations");
    std::string corr_path;
    std::string assoc_out;
    cmd_assoc->add_option("--correlation", corr_path, "Correlation CSV")->required();
    cmd_assoc->add_option("--t-rho", t_rho, "Correlation segment length [s]");
    cmd_assoc->add_option("--out", assoc_out, "Output CSV")->required();

    auto* cmd_scores = app.add_subcommand("scores", "Normalize subjective scores");
    std::string scores_path;
    std::string scores_out;
    cmd_scores->add_option("--scores", scores_path, "Raw score CSV")->required();
    cmd_scores->add_option("--out", scores_out, "Output CSV")->required();

    auto* cmd_report = app.add_subcommand("report", "Full analysis run from a run file");
    std::string run_path;
    cmd_report->add_option("--run", run_path, "Run JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (cmd_config->parsed()) {
            if (show) show_config(config);
            return kExitOk;
        }
        if (cmd_sim->parsed()) return run_simulate(scene_path, sim_out, config);
        if (cmd_proc->parsed())
            return run_process(cube_path, regions_path, proc_out, config, plots);
        if (cmd_corr->parsed()) return run_correlate(movement_files, t_rho, corr_out);
        if (cmd_assoc->parsed()) return run_associate(corr_path, t_rho, assoc_out);
        if (cmd_scores->parsed()) return run_scores(scores_path, scores_out);
        if (cmd_report->parsed()) return run_report(run_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    }
    return kExitOk;
}
