#include "radmotion/localization.hpp"

#include "radmotion/errors.hpp"
#include "radmotion/imaging.hpp"

namespace radmotion {

std::optional<CellIndex> locate_global(const PowerImage& image) {
    if (image.values.empty())
        throw NumericError("power image is empty");
    double best = 0.0;
    std::optional<CellIndex> best_cell;
    for (std::size_t r = 0; r < image.n_range; ++r) {
        for (std::size_t k = 0; k < image.n_angles(); ++k) {
            const double v = image.at(r, k);
            if (v > best) {
                best = v;
                best_cell = CellIndex{r, k};
            }
        }
    }
    return best_cell; // nullopt iff the image is identically zero
}

std::vector<TrackedCell> locate_in_regions(const PowerImage& image,
                                           const std::vector<SeatRegion>& regions) {
    std::vector<TrackedCell> chosen;
    chosen.reserve(regions.size());
    for (const SeatRegion& region : regions) {
        bool found = false;
        double best = 0.0;
        TrackedCell cell;
        for (std::size_t r = 0; r < image.n_range; ++r) {
            const double range_m = static_cast<double>(r) * image.range_bin_m;
            if (range_m < region.r_min_m || range_m > region.r_max_m) continue;
            for (std::size_t k = 0; k < image.n_angles(); ++k) {
                const double theta = image.angles_rad[k];
                if (theta < region.theta_min_rad || theta > region.theta_max_rad) continue;
                const double v = image.at(r, k);
                if (!found || v > best) {
                    found = true;
                    best = v;
                    cell = TrackedCell{CellIndex{r, k}, range_m, theta};
                }
            }
        }
        if (!found)
            throw ConfigError("seat region '" + region.participant_id +
                              "' contains no grid cell");
        chosen.push_back(cell);
    }
    return chosen;
}

std::vector<TargetTrack> build_track(const ComplexImageSequence& seq,
                                     const std::vector<SeatRegion>& regions,
                                     double seg_len_s) {
    std::vector<TargetTrack> tracks(regions.size());
    for (std::size_t i = 0; i < regions.size(); ++i)
        tracks[i].participant_id = regions[i].participant_id;

    const auto segs = segment_bounds(seq.n_slow, seq.fs_hz, seg_len_s);
    for (std::size_t ell = 0; ell < segs.size(); ++ell) {
        const PowerImage image = power_image(seq, ell, seg_len_s);
        const std::vector<TrackedCell> cells = locate_in_regions(image, regions);
        for (std::size_t i = 0; i < regions.size(); ++i)
            tracks[i].cells.push_back(cells[i]);
    }
    return tracks;
}

} // namespace radmotion
