#pragma once

#include <optional>
#include <vector>

#include "radmotion/types.hpp"

namespace radmotion {

// Argmax over all cells; ties broken by lowest range index, then lowest angle
// index. An all-zero image carries no target: returns nullopt.
std::optional<CellIndex> locate_global(const PowerImage& image);

// Per-region restricted argmax (same tie rule). A cell belongs to a region when
// its (range, angle) center lies in the closed rectangle. Result is parallel to
// `regions`. Throws ConfigError for a region containing no grid cell.
std::vector<TrackedCell> locate_in_regions(const PowerImage& image,
                                           const std::vector<SeatRegion>& regions);

// Per-segment localization over segments of seg_len_s; one TargetTrack per
// region. No full segment -> tracks with empty cell lists.
std::vector<TargetTrack> build_track(const ComplexImageSequence& seq,
                                     const std::vector<SeatRegion>& regions,
                                     double seg_len_s);

} // namespace radmotion
