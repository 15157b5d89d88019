#pragma once

#include <optional>
#include <string>
#include <vector>

#include "radmotion/io.hpp"
#include "radmotion/types.hpp"

namespace radmotion {

struct RadarProcessResult {
    std::string radar_id;
    std::vector<SeatRegion> regions; // sorted by participant id
    std::vector<TargetTrack> tracks;
    std::vector<DisplacementTrace> displacement;
    std::vector<MovementTrace> movement;
};

// Streaming equivalent of beamform -> suppress_clutter -> power_image ->
// locate_in_regions (per segment) -> extract_displacement -> movement_index,
// evaluated per segment so the full image sequence is never materialized.
// Physical parameters (wavelength, channel count, fs, range bin) come from the
// cube; processing parameters come from config. Regions are processed in the
// order given.
RadarProcessResult process_cube(const DataCube& cube, const std::vector<SeatRegion>& regions,
                                const RadarConfig& config);

struct PipelineReport {
    std::vector<std::filesystem::path> files_written;
    bool partial = false;
    std::string partial_reason;
    std::size_t n_radars = 0;
    std::size_t n_participants = 0;
    std::size_t n_corr_segments = 0;
    std::optional<double> association_p;
    std::optional<double> pearson_b_beta;
    std::vector<ObjectiveIndexEntry> objective;
};

// Full simulate-independent analysis: cubes -> traces -> correlation ->
// association -> objective index -> subjective comparison, with all report
// files written to run.out_dir. Radar roles and participant order are sorted
// by id, so outputs do not depend on listing order in the run file.
PipelineReport run_pipeline(const AnalysisRun& run);

} // namespace radmotion
