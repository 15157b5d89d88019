#include "radmotion/pipeline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "radmotion/analytics.hpp"
#include "radmotion/errors.hpp"
#include "radmotion/imaging.hpp"
#include "radmotion/localization.hpp"
#include "radmotion/motion.hpp"
#include "radmotion/svg_plot.hpp"

namespace radmotion {

namespace {

using MatrixXcdRM = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::size_t kChunkBudgetBytes = 48u << 20; // beamformed scratch per chunk

std::string fmt_metric(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

RadarProcessResult process_cube(const DataCube& cube, const std::vector<SeatRegion>& regions,
                                const RadarConfig& config) {
    if (regions.empty())
        throw ConfigError("at least one seat region is required");

    RadarConfig eff = config;
    eff.wavelength_m = cube.config.wavelength_m;
    eff.n_channels = cube.config.n_channels;
    eff.slow_time_fs_hz = cube.config.slow_time_fs_hz;
    eff.range_bin_m = cube.config.range_bin_m;
    validate_config(eff);

    const std::size_t n_ch = cube.n_channels();
    const std::size_t n_range = cube.n_range;
    const std::vector<double> angles = eff.angle_grid.angles_rad();
    const std::size_t n_angles = angles.size();
    const TaylorWindow window =
        taylor_window(eff.n_channels, eff.taylor_sidelobe_db, eff.taylor_nbar);

    Eigen::MatrixXcd weights(n_ch, n_angles);
    for (std::size_t k = 0; k < n_angles; ++k) {
        const std::vector<cd> sw = steering_weights(angles[k], static_cast<int>(n_ch));
        for (std::size_t n = 0; n < n_ch; ++n)
            weights(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                window.coefficients[n] * sw[n];
    }

    const auto segs =
        segment_bounds(cube.n_slow, eff.slow_time_fs_hz, eff.clutter_segment_s);
    if (segs.empty())
        throw NumericError("cube is shorter than one clutter segment");

    const std::size_t cells = n_range * n_angles;
    std::size_t chunk_t = kChunkBudgetBytes / (cells * sizeof(cd));
    chunk_t = std::max<std::size_t>(1, std::min(chunk_t, segs[0].size()));
    MatrixXcdRM scratch(static_cast<Eigen::Index>(chunk_t * n_range),
                        static_cast<Eigen::Index>(n_angles));

    // Stats pass: per segment, per cell, running sum and power sum of the
    // beamformed samples. Suppressed power is then E|z|^2 - |Ez|^2.
    std::vector<std::vector<TrackedCell>> cells_per_seg(segs.size());
    std::vector<cd> sum_z(cells);
    std::vector<double> sum_sq(cells);
    for (std::size_t ell = 0; ell < segs.size(); ++ell) {
        const SegmentSpan seg = segs[ell];
        std::fill(sum_z.begin(), sum_z.end(), cd{0.0, 0.0});
        std::fill(sum_sq.begin(), sum_sq.end(), 0.0);
        for (std::size_t t0 = seg.begin; t0 < seg.end; t0 += chunk_t) {
            const std::size_t len = std::min(chunk_t, seg.end - t0);
            const auto rows = static_cast<Eigen::Index>(len * n_range);
            Eigen::Map<const MatrixXcdRM> s(cube.samples.data() + t0 * n_range * n_ch, rows,
                                            static_cast<Eigen::Index>(n_ch));
            scratch.topRows(rows).noalias() = s * weights;
            const cd* g = scratch.data();
            for (std::size_t row = 0; row < len * n_range; ++row) {
                const std::size_t base = (row % n_range) * n_angles;
                for (std::size_t k = 0; k < n_angles; ++k) {
                    const cd z = g[row * n_angles + k];
                    sum_z[base + k] += z;
                    sum_sq[base + k] += std::norm(z);
                }
            }
        }
        PowerImage image;
        image.n_range = n_range;
        image.angles_rad = angles;
        image.range_bin_m = eff.range_bin_m;
        image.segment_index = ell;
        image.values.resize(cells);
        const double inv = 1.0 / static_cast<double>(seg.size());
        for (std::size_t c = 0; c < cells; ++c) {
            const double p = sum_sq[c] * inv - std::norm(sum_z[c] * inv);
            image.values[c] = std::max(0.0, p);
        }
        cells_per_seg[ell] = locate_in_regions(image, regions);
    }

    RadarProcessResult result;
    result.radar_id = cube.radar_id;
    result.regions = regions;
    result.tracks.resize(regions.size());
    for (std::size_t m = 0; m < regions.size(); ++m) {
        result.tracks[m].participant_id = regions[m].participant_id;
        for (std::size_t ell = 0; ell < segs.size(); ++ell)
            result.tracks[m].cells.push_back(cells_per_seg[ell][m]);
    }

    // Phase pass: re-beamform only the tracked cell of each participant from
    // the raw (unsuppressed) cube; mean subtraction would distort the phase of
    // a strongly modulated echo, and localization no longer needs it.
    const std::size_t covered = segs.back().end;
    std::vector<cd> wcol(n_ch);
    for (std::size_t m = 0; m < regions.size(); ++m) {
        ComplexImageSequence cell_seq;
        cell_seq.n_slow = covered;
        cell_seq.n_range = 1;
        cell_seq.angles_rad = {0.0};
        cell_seq.fs_hz = eff.slow_time_fs_hz;
        cell_seq.range_bin_m = eff.range_bin_m;
        cell_seq.wavelength_m = eff.wavelength_m;
        cell_seq.radar_id = cube.radar_id;
        cell_seq.values.resize(covered);

        TargetTrack cell_track;
        cell_track.participant_id = regions[m].participant_id;
        for (std::size_t ell = 0; ell < segs.size(); ++ell) {
            const TrackedCell& tc = cells_per_seg[ell][m];
            cell_track.cells.push_back(TrackedCell{CellIndex{0, 0}, tc.range_m, tc.theta_rad});
            for (std::size_t n = 0; n < n_ch; ++n)
                wcol[n] = weights(static_cast<Eigen::Index>(n),
                                  static_cast<Eigen::Index>(tc.cell.angle_idx));
            const SegmentSpan seg = segs[ell];
            for (std::size_t t = seg.begin; t < seg.end; ++t) {
                const cd* row = cube.samples.data() + (t * n_range + tc.cell.range_idx) * n_ch;
                cd acc{0.0, 0.0};
                for (std::size_t n = 0; n < n_ch; ++n) acc += row[n] * wcol[n];
                cell_seq.values[t] = acc;
            }
        }

        DisplacementTrace d = extract_displacement(cell_seq, cell_track, eff);
        MovementTrace b = movement_index(d, eff.movement_window_s, eff.slow_time_fs_hz);
        result.displacement.push_back(std::move(d));
        result.movement.push_back(std::move(b));
    }
    return result;
}

PipelineReport run_pipeline(const AnalysisRun& run) {
    validate_config(run.config);
    if (!(run.t_rho_s > 0.0))
        throw ConfigError("t_rho_s must be positive");
    if (run.radars.empty())
        throw ConfigError("run lists no radars");

    std::error_code ec;
    std::filesystem::create_directories(run.out_dir, ec);
    if (ec)
        throw IoError("cannot create output directory '" + run.out_dir.string() + "'");

    PipelineReport report;
    std::vector<RadarProcessResult> radars;
    for (const RadarInputSpec& input : run.radars) {
        std::vector<SeatRegion> regions = read_regions(input.regions);
        std::sort(regions.begin(), regions.end(),
                  [](const SeatRegion& a, const SeatRegion& b) {
                      return a.participant_id < b.participant_id;
                  });
        const DataCube cube = read_cube(input.cube);
        radars.push_back(process_cube(cube, regions, run.config));
    }
    std::sort(radars.begin(), radars.end(),
              [](const RadarProcessResult& a, const RadarProcessResult& b) {
                  return a.radar_id < b.radar_id;
              });
    for (std::size_t i = 1; i < radars.size(); ++i) {
        if (radars[i].radar_id == radars[i - 1].radar_id)
            throw ConfigError("duplicate radar_id '" + radars[i].radar_id + "' across cubes");
    }

    const std::size_t n_participants = radars[0].regions.size();
    for (const RadarProcessResult& r : radars) {
        if (r.regions.size() != n_participants)
            throw ConfigError("all radars must cover the same participants");
        for (std::size_t m = 0; m < n_participants; ++m) {
            if (r.regions[m].participant_id != radars[0].regions[m].participant_id)
                throw ConfigError("regions across radars must list the same participant ids");
        }
    }
    const std::size_t n_samples = radars[0].movement[0].b_mps.size();
    const double fs = radars[0].movement[0].fs_hz;
    for (const RadarProcessResult& r : radars) {
        for (const MovementTrace& tr : r.movement) {
            if (tr.b_mps.size() != n_samples || tr.fs_hz != fs)
                throw ConfigError("cubes must share a common slow-time axis");
        }
    }

    report.n_radars = radars.size();
    report.n_participants = n_participants;

    std::vector<std::string> ids;
    for (const SeatRegion& region : radars[0].regions) ids.push_back(region.participant_id);

    const auto emit = [&report](const std::filesystem::path& p) { report.files_written.push_back(p); };
    for (const RadarProcessResult& r : radars) {
        std::vector<const std::vector<double>*> dcols;
        std::vector<const std::vector<double>*> bcols;
        for (std::size_t m = 0; m < n_participants; ++m) {
            dcols.push_back(&r.displacement[m].d_m);
            bcols.push_back(&r.movement[m].b_mps);
        }
        const auto dpath = run.out_dir / ("displacement_" + r.radar_id + ".csv");
        const auto bpath = run.out_dir / ("movement_" + r.radar_id + ".csv");
        const auto tpath = run.out_dir / ("tracks_" + r.radar_id + ".csv");
        write_trace_csv(ids, dcols, fs, dpath);
        write_trace_csv(ids, bcols, fs, bpath);
        write_tracks_csv(r.tracks, tpath);
        emit(dpath);
        emit(bpath);
        emit(tpath);
        if (run.emit_plots) {
            const auto ppath = run.out_dir / ("movement_" + r.radar_id + ".svg");
            write_movement_svg(r.movement, ppath);
            emit(ppath);
        }
    }

    const auto corr_segs = segment_bounds(n_samples, fs, run.t_rho_s);
    if (corr_segs.empty())
        throw NumericError("run is shorter than one correlation segment");
    report.n_corr_segments = corr_segs.size();

    if (radars.size() >= 2) {
        const CorrelationMatrixSequence corr =
            correlation_matrices(radars[0].movement, radars[1].movement, run.t_rho_s, fs);
        const auto cpath = run.out_dir / "correlation_segments.csv";
        write_correlation_csv(corr, cpath);
        emit(cpath);
        const AssociationReport assoc = association_accuracy(corr);
        const auto apath = run.out_dir / "association.csv";
        write_association_csv(assoc, apath);
        emit(apath);
        report.association_p = assoc.accuracy;
    }

    for (std::size_t m = 0; m < n_participants; ++m) {
        std::vector<MovementTrace> traces;
        for (const RadarProcessResult& r : radars) traces.push_back(r.movement[m]);
        report.objective.push_back(ObjectiveIndexEntry{
            ids[m], run.experiment,
            objective_index(traces, run.t_rho_s, corr_segs.size())});
    }
    const auto opath = run.out_dir / "objective_index.csv";
    write_objective_csv(report.objective, opath);
    emit(opath);

    if (!run.scores.empty()) {
        if (!std::filesystem::exists(run.scores)) {
            report.partial = true;
            report.partial_reason =
                "score file '" + run.scores.string() + "' is missing; subjective analytics skipped";
        } else {
            const ScoreTable table = normalize_scores(read_scores(run.scores));
            const auto spath = run.out_dir / "scores_normalized.csv";
            write_normalized_scores_csv(table, spath);
            emit(spath);

            const auto jit = std::find(table.experiments.begin(), table.experiments.end(),
                                       run.experiment);
            if (jit == table.experiments.end())
                throw ConfigError("score table has no rows for experiment " +
                                  std::to_string(run.experiment));
            const auto j = static_cast<std::size_t>(jit - table.experiments.begin());
            std::vector<double> b_values;
            std::vector<double> beta_values;
            for (std::size_t m = 0; m < n_participants; ++m) {
                const auto pit = std::find(table.participants.begin(),
                                           table.participants.end(), ids[m]);
                if (pit == table.participants.end())
                    throw ConfigError("score table has no rows for participant '" + ids[m] +
                                      "'");
                const auto pm = static_cast<std::size_t>(pit - table.participants.begin());
                b_values.push_back(report.objective[m].b_mps);
                beta_values.push_back(table.beta_at(pm, j));
            }
            try {
                report.pearson_b_beta = pearson(b_values, beta_values);
            } catch (const NumericError&) {
                report.pearson_b_beta = std::numeric_limits<double>::quiet_NaN();
            }
        }
    }

    std::vector<std::pair<std::string, std::string>> summary;
    summary.emplace_back("n_radars", std::to_string(report.n_radars));
    summary.emplace_back("n_participants", std::to_string(report.n_participants));
    summary.emplace_back("n_corr_segments", std::to_string(report.n_corr_segments));
    summary.emplace_back("experiment", std::to_string(run.experiment));
    if (report.association_p)
        summary.emplace_back("association_accuracy", fmt_metric(*report.association_p));
    if (report.pearson_b_beta)
        summary.emplace_back("pearson_b_beta", fmt_metric(*report.pearson_b_beta));
    if (report.partial)
        summary.emplace_back("partial", report.partial_reason);
    const auto spath = run.out_dir / "summary.csv";
    write_summary_csv(summary, spath);
    emit(spath);
    return report;
}

} // namespace radmotion
