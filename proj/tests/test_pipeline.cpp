#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "radmotion/analytics.hpp"
#include "radmotion/config.hpp"
#include "radmotion/errors.hpp"
#include "radmotion/imaging.hpp"
#include "radmotion/io.hpp"
#include "radmotion/localization.hpp"
#include "radmotion/motion.hpp"
#include "radmotion/pipeline.hpp"
#include "radmotion/simulator.hpp"

namespace rm = radmotion;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        std::mt19937_64 rng{std::random_device{}()};
        path = std::filesystem::temp_directory_path() /
               ("radmotion_pipe_" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
};

// Shorter segments and a coarser angle grid than the defaults so the tests run
// on seconds of simulated data instead of minutes.
rm::RadarConfig fast_config() {
    rm::RadarConfig cfg;
    cfg.slow_time_fs_hz = 20.0;
    cfg.clutter_segment_s = 2.0;
    cfg.movement_window_s = 0.5;
    cfg.corr_segment_s = 2.0;
    cfg.angle_grid.step_deg = 5.0;
    return cfg;
}

rm::Scatterer radial_scatterer(const rm::RadarPose& pose, double range_m, double azimuth_rad,
                               const rm::WaveformSpec& motion) {
    rm::Scatterer s;
    const double world = pose.boresight_rad + azimuth_rad;
    s.x_m = pose.x_m + range_m * std::cos(world);
    s.y_m = pose.y_m + range_m * std::sin(world);
    s.direction_x = (s.x_m - pose.x_m) / range_m;
    s.direction_y = (s.y_m - pose.y_m) / range_m;
    s.motion = motion;
    return s;
}

rm::SeatRegion region(const std::string& id, double r_min, double r_max, double th_min_deg,
                      double th_max_deg) {
    rm::SeatRegion reg;
    reg.participant_id = id;
    reg.r_min_m = r_min;
    reg.r_max_m = r_max;
    reg.theta_min_rad = th_min_deg * kPi / 180.0;
    reg.theta_max_rad = th_max_deg * kPi / 180.0;
    return reg;
}

rm::WaveformSpec sine_motion(double amp, double freq, double phase) {
    rm::WaveformSpec w;
    w.kind = rm::WaveformKind::kSinusoid;
    w.amplitude_m = amp;
    w.freq_hz = freq;
    w.phase_rad = phase;
    return w;
}

rm::WaveformSpec noise_motion(double sigma, double cutoff) {
    rm::WaveformSpec w;
    w.kind = rm::WaveformKind::kBandNoise;
    w.amplitude_m = sigma;
    w.cutoff_hz = cutoff;
    return w;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "cannot open ", p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("streaming processor matches the composed per-stage route") {
    const auto cfg = fast_config();

    rm::SceneSpec scene;
    rm::RadarPose pose{"r1", 0.0, 0.0, kPi / 2.0};
    scene.radars.push_back(pose);
    scene.scatterers.push_back(
        radial_scatterer(pose, 0.9, -10.0 * kPi / 180.0, sine_motion(6e-4, 1.0, 0.3)));
    scene.scatterers.push_back(
        radial_scatterer(pose, 1.6, 15.0 * kPi / 180.0, noise_motion(4e-4, 2.0)));
    scene.duration_s = 8.0;
    scene.noise_power = 4e-8;
    scene.seed = 77;

    const auto sim = rm::simulate_radar(scene, cfg, 0);
    const rm::DataCube& cube = sim.cube;

    const std::vector<rm::SeatRegion> regions = {
        region("p1", 0.6, 1.2, -30.0, 5.0),
        region("p2", 1.3, 1.9, 0.0, 30.0),
    };

    const auto streamed = rm::process_cube(cube, regions, cfg);

    REQUIRE(streamed.radar_id == "r1");
    REQUIRE(streamed.regions.size() == 2);
    CHECK(streamed.regions[0].participant_id == "p1");
    CHECK(streamed.regions[1].participant_id == "p2");
    REQUIRE(streamed.tracks.size() == 2);
    REQUIRE(streamed.displacement.size() == 2);
    REQUIRE(streamed.movement.size() == 2);

    // Composed route over the fully materialized image sequence.
    const auto window = rm::taylor_window(cfg.n_channels, cfg.taylor_sidelobe_db, cfg.taylor_nbar);
    const auto img = rm::beamform(cube, window, cfg.angle_grid);
    const auto suppressed = rm::suppress_clutter(img, cfg.clutter_segment_s);
    const auto tracks = rm::build_track(suppressed, regions, cfg.clutter_segment_s);
    REQUIRE(tracks.size() == 2);

    for (std::size_t m = 0; m < 2; ++m) {
        CAPTURE(m);
        const rm::TargetTrack& ref = tracks[m];
        const rm::TargetTrack& got = streamed.tracks[m];
        CHECK(got.participant_id == regions[m].participant_id);
        REQUIRE(ref.cells.size() == 4); // 8 s / 2 s segments
        REQUIRE(got.cells.size() == ref.cells.size());
        for (std::size_t ell = 0; ell < ref.cells.size(); ++ell) {
            CAPTURE(ell);
            CHECK(got.cells[ell].cell == ref.cells[ell].cell);
            CHECK(got.cells[ell].range_m == ref.cells[ell].range_m);
            CHECK(got.cells[ell].theta_rad == ref.cells[ell].theta_rad);
        }

        const auto d_ref = rm::extract_displacement(img, ref, cfg);
        const rm::DisplacementTrace& d_got = streamed.displacement[m];
        CHECK(d_got.participant_id == regions[m].participant_id);
        CHECK(d_got.radar_id == "r1");
        CHECK(d_got.fs_hz == d_ref.fs_hz);
        CHECK(d_got.segment_starts == d_ref.segment_starts);
        CHECK(d_got.sample_valid == d_ref.sample_valid);
        REQUIRE(d_got.d_m.size() == d_ref.d_m.size());
        for (std::size_t t = 0; t < d_ref.d_m.size(); ++t) {
            CAPTURE(t);
            CHECK(std::abs(d_got.d_m[t] - d_ref.d_m[t]) < 1e-9);
        }

        const auto b_ref = rm::movement_index(d_ref, cfg.movement_window_s, cfg.slow_time_fs_hz);
        const rm::MovementTrace& b_got = streamed.movement[m];
        CHECK(b_got.fs_hz == b_ref.fs_hz);
        REQUIRE(b_got.b_mps.size() == b_ref.b_mps.size());
        for (std::size_t t = 0; t < b_ref.b_mps.size(); ++t) {
            CAPTURE(t);
            CHECK(std::abs(b_got.b_mps[t] - b_ref.b_mps[t]) < 1e-8);
        }
    }

    // Both scatterers sit close to a grid cell center; the tracker must pin
    // them to the expected cells in every segment.
    const rm::CellIndex p1_cell{20, 10}; // 0.9 m / 0.0447, (-10 + 60) / 5
    const rm::CellIndex p2_cell{36, 15}; // 1.6 m / 0.0447, (15 + 60) / 5
    for (std::size_t ell = 0; ell < 4; ++ell) {
        CHECK(streamed.tracks[0].cells[ell].cell == p1_cell);
        CHECK(streamed.tracks[1].cells[ell].cell == p2_cell);
    }
}

TEST_CASE("processor input validation") {
    const auto cfg = fast_config();

    rm::SceneSpec scene;
    rm::RadarPose pose{"r1", 0.0, 0.0, kPi / 2.0};
    scene.radars.push_back(pose);
    scene.scatterers.push_back(radial_scatterer(pose, 0.9, 0.0, sine_motion(5e-4, 1.0, 0.0)));
    scene.duration_s = 1.0; // 20 samples < one 2 s clutter segment
    scene.seed = 5;
    const auto sim = rm::simulate_radar(scene, cfg, 0);

    const std::vector<rm::SeatRegion> regions = {region("p1", 0.6, 1.2, -30.0, 30.0)};
    CHECK_THROWS_WITH_AS(rm::process_cube(sim.cube, regions, cfg),
                         "cube is shorter than one clutter segment", rm::NumericError);
    CHECK_THROWS_WITH_AS(rm::process_cube(sim.cube, {}, cfg),
                         "at least one seat region is required", rm::ConfigError);
}

TEST_CASE("full analysis run over two radars") {
    TempDir tmp;
    const auto cfg = fast_config();

    // Two radars facing each other along the y axis, both participants on the
    // axis between them, moving along it (radial for both radars).
    rm::SceneSpec scene;
    scene.radars.push_back({"ra", 0.0, 0.0, kPi / 2.0});
    scene.radars.push_back({"rb", 0.0, 3.2, -kPi / 2.0});
    rm::Scatterer p1;
    p1.x_m = 0.0;
    p1.y_m = 1.0;
    p1.direction_x = 0.0;
    p1.direction_y = 1.0;
    p1.motion = sine_motion(8e-4, 1.0, 0.0);
    rm::Scatterer p2 = p1;
    p2.y_m = 2.2;
    p2.motion = noise_motion(5e-4, 2.0);
    scene.scatterers = {p1, p2};
    scene.duration_s = 16.0;
    scene.noise_power = 4e-8;
    scene.seed = 1234;

    const auto sim = rm::simulate(scene, cfg);
    REQUIRE(sim.radars.size() == 2);
    rm::write_cube(sim.radars[0].cube, tmp.path / "ra.rcube");
    rm::write_cube(sim.radars[1].cube, tmp.path / "rb.rcube");

    const std::vector<rm::SeatRegion> regions_ra = {
        region("p1", 0.8, 1.4, -20.0, 20.0),
        region("p2", 1.9, 2.5, -20.0, 20.0),
    };
    const std::vector<rm::SeatRegion> regions_rb = {
        region("p1", 1.9, 2.5, -20.0, 20.0),
        region("p2", 0.8, 1.4, -20.0, 20.0),
    };
    rm::write_regions(regions_ra, tmp.path / "regions_ra.csv");
    rm::write_regions(regions_rb, tmp.path / "regions_rb.csv");
    // Same regions listed in reverse row order, for the order-independence run.
    rm::write_regions({regions_ra[1], regions_ra[0]}, tmp.path / "regions_ra_rev.csv");
    rm::write_regions({regions_rb[1], regions_rb[0]}, tmp.path / "regions_rb_rev.csv");

    rm::ScoreTable scores;
    scores.entries = {
        {"p1", 1, "e1", 2, 2}, {"p1", 1, "e2", 2, 2},
        {"p2", 1, "e1", 1, 1}, {"p2", 1, "e2", 1, 1},
    };
    rm::write_scores(scores, tmp.path / "scores.csv");

    rm::AnalysisRun run;
    run.config = cfg;
    run.t_rho_s = 2.0;
    run.experiment = 1;
    run.radars = {{tmp.path / "ra.rcube", tmp.path / "regions_ra.csv"},
                  {tmp.path / "rb.rcube", tmp.path / "regions_rb.csv"}};
    run.scores = tmp.path / "scores.csv";
    run.out_dir = tmp.path / "out1";

    const auto rep = rm::run_pipeline(run);

    CHECK(rep.partial == false);
    CHECK(rep.partial_reason.empty());
    CHECK(rep.n_radars == 2);
    CHECK(rep.n_participants == 2);
    CHECK(rep.n_corr_segments == 8); // 16 s / 2 s
    REQUIRE(rep.association_p.has_value());
    CHECK(*rep.association_p >= 0.75);
    CHECK(*rep.association_p <= 1.0);
    REQUIRE(rep.pearson_b_beta.has_value());
    // Two participants with distinct movement indices: |rho| is exactly 1.
    CHECK(std::abs(*rep.pearson_b_beta) == doctest::Approx(1.0).epsilon(1e-9));

    REQUIRE(rep.objective.size() == 2);
    CHECK(rep.objective[0].participant == "p1");
    CHECK(rep.objective[1].participant == "p2");
    CHECK(rep.objective[0].experiment == 1);
    CHECK(rep.objective[0].b_mps > 0.0);
    CHECK(rep.objective[1].b_mps > 0.0);
    // Both radars observe the same |projected| motion, so the per-participant
    // index should sit near the analytic sinusoid RMS speed for p1.
    const double b1_expected = 8e-4 * 2.0 * kPi * 1.0 / std::sqrt(2.0);
    CHECK(rep.objective[0].b_mps == doctest::Approx(b1_expected).epsilon(0.05));

    const std::vector<std::string> expected_files = {
        "displacement_ra.csv", "movement_ra.csv", "tracks_ra.csv",
        "displacement_rb.csv", "movement_rb.csv", "tracks_rb.csv",
        "correlation_segments.csv", "association.csv", "objective_index.csv",
        "scores_normalized.csv", "summary.csv",
    };
    REQUIRE(rep.files_written.size() == expected_files.size());
    for (std::size_t i = 0; i < expected_files.size(); ++i) {
        CHECK(rep.files_written[i].filename().string() == expected_files[i]);
        CHECK(std::filesystem::exists(run.out_dir / expected_files[i]));
    }

    const std::string summary = slurp(run.out_dir / "summary.csv");
    CHECK(summary.find("association_accuracy") != std::string::npos);
    CHECK(summary.find("pearson_b_beta") != std::string::npos);
    CHECK(summary.find("partial") == std::string::npos);

    // The written traces agree with the in-memory processing of the same cube.
    const auto table = rm::read_trace_csv(run.out_dir / "movement_ra.csv");
    REQUIRE(table.ids == std::vector<std::string>{"p1", "p2"});
    CHECK(table.fs_hz == 20.0);
    const auto direct =
        rm::process_cube(rm::read_cube(tmp.path / "ra.rcube"),
                         {regions_ra[0], regions_ra[1]}, cfg);
    REQUIRE(table.columns[0].size() == direct.movement[0].b_mps.size());
    for (std::size_t t = 0; t < table.columns[0].size(); ++t) {
        CAPTURE(t);
        CHECK(table.columns[0][t] ==
              doctest::Approx(direct.movement[0].b_mps[t]).epsilon(1e-12));
    }

    SUBCASE("outputs do not depend on listing order") {
        rm::AnalysisRun shuffled = run;
        shuffled.radars = {{tmp.path / "rb.rcube", tmp.path / "regions_rb_rev.csv"},
                           {tmp.path / "ra.rcube", tmp.path / "regions_ra_rev.csv"}};
        shuffled.out_dir = tmp.path / "out2";
        const auto rep2 = rm::run_pipeline(shuffled);
        REQUIRE(rep2.files_written.size() == rep.files_written.size());
        for (std::size_t i = 0; i < rep.files_written.size(); ++i) {
            const auto name = rep.files_written[i].filename();
            CAPTURE(name.string());
            CHECK(rep2.files_written[i].filename() == name);
            CHECK(slurp(run.out_dir / name) == slurp(shuffled.out_dir / name));
        }
        CHECK(*rep2.association_p == *rep.association_p);
    }

    SUBCASE("missing score file degrades to a partial run") {
        rm::AnalysisRun partial = run;
        partial.scores = tmp.path / "missing_scores.csv";
        partial.out_dir = tmp.path / "out3";
        const auto rep3 = rm::run_pipeline(partial);
        CHECK(rep3.partial == true);
        CHECK(rep3.partial_reason.find("missing") != std::string::npos);
        CHECK(!rep3.pearson_b_beta.has_value());
        CHECK(rep3.association_p.has_value());
        CHECK(!std::filesystem::exists(partial.out_dir / "scores_normalized.csv"));
        CHECK(std::filesystem::exists(partial.out_dir / "objective_index.csv"));
        const std::string sum3 = slurp(partial.out_dir / "summary.csv");
        CHECK(sum3.find("partial") != std::string::npos);
    }

    SUBCASE("no score file skips the subjective stage without being partial") {
        rm::AnalysisRun objective_only = run;
        objective_only.scores.clear();
        objective_only.out_dir = tmp.path / "out4";
        const auto rep4 = rm::run_pipeline(objective_only);
        CHECK(rep4.partial == false);
        CHECK(!rep4.pearson_b_beta.has_value());
        CHECK(!std::filesystem::exists(objective_only.out_dir / "scores_normalized.csv"));
    }

    SUBCASE("duplicate radar ids are rejected") {
        rm::AnalysisRun dup = run;
        dup.radars = {{tmp.path / "ra.rcube", tmp.path / "regions_ra.csv"},
                      {tmp.path / "ra.rcube", tmp.path / "regions_ra.csv"}};
        dup.out_dir = tmp.path / "out5";
        CHECK_THROWS_WITH_AS(rm::run_pipeline(dup), "duplicate radar_id 'ra' across cubes",
                             rm::ConfigError);
    }

    SUBCASE("participant ids must match across radars") {
        rm::write_regions({region("p1", 1.9, 2.5, -20.0, 20.0),
                           region("p3", 0.8, 1.4, -20.0, 20.0)},
                          tmp.path / "regions_bad.csv");
        rm::AnalysisRun bad = run;
        bad.radars = {{tmp.path / "ra.rcube", tmp.path / "regions_ra.csv"},
                      {tmp.path / "rb.rcube", tmp.path / "regions_bad.csv"}};
        bad.out_dir = tmp.path / "out6";
        CHECK_THROWS_WITH_AS(rm::run_pipeline(bad),
                             "regions across radars must list the same participant ids",
                             rm::ConfigError);
    }

    SUBCASE("cubes must share a slow-time axis") {
        rm::SceneSpec short_scene = scene;
        short_scene.duration_s = 8.0;
        auto other = rm::simulate_radar(short_scene, cfg, 0);
        other.cube.radar_id = "rc";
        rm::write_cube(other.cube, tmp.path / "rc.rcube");
        rm::AnalysisRun bad = run;
        bad.radars = {{tmp.path / "ra.rcube", tmp.path / "regions_ra.csv"},
                      {tmp.path / "rc.rcube", tmp.path / "regions_ra.csv"}};
        bad.out_dir = tmp.path / "out7";
        CHECK_THROWS_WITH_AS(rm::run_pipeline(bad), "cubes must share a common slow-time axis",
                             rm::ConfigError);
    }

    SUBCASE("correlation segment longer than the run") {
        rm::AnalysisRun bad = run;
        bad.t_rho_s = 60.0;
        bad.out_dir = tmp.path / "out8";
        CHECK_THROWS_WITH_AS(rm::run_pipeline(bad), "run is shorter than one correlation segment",
                             rm::NumericError);
    }

    SUBCASE("plots are emitted on request") {
        rm::AnalysisRun plots = run;
        plots.emit_plots = true;
        plots.out_dir = tmp.path / "out9";
        const auto rep9 = rm::run_pipeline(plots);
        CHECK(std::filesystem::exists(plots.out_dir / "movement_ra.svg"));
        CHECK(std::filesystem::exists(plots.out_dir / "movement_rb.svg"));
        const std::string svg = slurp(plots.out_dir / "movement_ra.svg");
        CHECK(svg.find("<svg") != std::string::npos);
        CHECK(rep9.files_written.size() == rep.files_written.size() + 2);
    }
}

TEST_CASE("run validation before any processing") {
    TempDir tmp;
    rm::AnalysisRun run;
    run.config = fast_config();
    run.out_dir = tmp.path / "out";
    run.radars = {{tmp.path / "nope.rcube", tmp.path / "nope.csv"}};

    SUBCASE("t_rho must be positive") {
        run.t_rho_s = 0.0;
        CHECK_THROWS_WITH_AS(rm::run_pipeline(run), "t_rho_s must be positive", rm::ConfigError);
    }
    SUBCASE("at least one radar") {
        run.t_rho_s = 2.0;
        run.radars.clear();
        CHECK_THROWS_WITH_AS(rm::run_pipeline(run), "run lists no radars", rm::ConfigError);
    }
    SUBCASE("missing cube file") {
        run.t_rho_s = 2.0;
        CHECK_THROWS_AS(rm::run_pipeline(run), rm::IoError);
    }
}
