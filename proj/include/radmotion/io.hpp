#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "radmotion/analytics.hpp"
#include "radmotion/simulator.hpp"
#include "radmotion/types.hpp"

namespace radmotion {

// Cube files: a UTF-8 key-value header (one "key value" pair per line) next to
// a little-endian binary payload of float32 (real, imag) pairs, channel-fastest:
// byte offset of sample (t, r, n) = ((t*n_range + r)*n_channels + n) * 8.
// The payload file sits beside the header, named in its payload_file key.
void write_cube(const DataCube& cube, const std::filesystem::path& header_path);
DataCube read_cube(const std::filesystem::path& header_path);

// CSV with header: participant_id,r_min_m,r_max_m,theta_min_deg,theta_max_deg.
// Angles are degrees in files, radians in memory.
std::vector<SeatRegion> read_regions(const std::filesystem::path& path);
void write_regions(const std::vector<SeatRegion>& regions, const std::filesystem::path& path);

// CSV with header: participant,experiment,evaluator,beta1,beta2.
ScoreTable read_scores(const std::filesystem::path& path);
void write_scores(const ScoreTable& table, const std::filesystem::path& path);

// Scene description, JSON.
SceneSpec read_scene(const std::filesystem::path& path);
void write_scene(const SceneSpec& scene, const std::filesystem::path& path);

struct RadarInputSpec {
    std::filesystem::path cube;
    std::filesystem::path regions;
};

struct AnalysisRun {
    RadarConfig config;
    double t_rho_s = 60.0;
    int experiment = 1;
    bool emit_plots = false;
    std::vector<RadarInputSpec> radars;
    std::filesystem::path scores;  // empty: no subjective scores
    std::filesystem::path out_dir;
};

// Run description, JSON; relative paths resolve against the run file's directory.
AnalysisRun read_run(const std::filesystem::path& path);

// Trace tables: header "time_s,<id>,,..."; one row per slow-time sample.
struct TraceTable {
    std::vector<std::string> ids;
    double fs_hz = 0.0;
    std::vector<std::vector<double>> columns; // one per id
};
void write_trace_csv(const std::vector<std::string>& ids,
                     const std::vector<const std::vector<double>*>& columns, double fs_hz,
                     const std::filesystem::path& path);
TraceTable read_trace_csv(const std::filesystem::path& path);

// Correlation rows: segment,participant_row,participant_col,rho (nan allowed).
void write_correlation_csv(const CorrelationMatrixSequence& corr,
                           const std::filesystem::path& path);
CorrelationMatrixSequence read_correlation_csv(const std::filesystem::path& path,
                                               double t_rho_s);

// Association grid rows: participant,segment,p_hat.
void write_association_csv(const AssociationReport& report, const std::filesystem::path& path);

// Track rows: participant_id,segment,range_m,theta_deg.
void write_tracks_csv(const std::vector<TargetTrack>& tracks, const std::filesystem::path& path);

// Objective index rows: participant,experiment,b_mps.
void write_objective_csv(const std::vector<ObjectiveIndexEntry>& entries,
                         const std::filesystem::path& path);

// Normalized score rows: participant,experiment,beta.
void write_normalized_scores_csv(const ScoreTable& table, const std::filesystem::path& path);

// Key-value summary rows: metric,value.
void write_summary_csv(const std::vector<std::pair<std::string, std::string>>& rows,
                       const std::filesystem::path& path);

// Ground-truth trace export for simulated scenes (one column per scatterer).
void write_truth_csv(const std::vector<std::vector<double>>& truth, double fs_hz,
                     const std::filesystem::path& path);

} // namespace radmotion
