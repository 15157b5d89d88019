#pragma once

#include <filesystem>
#include <vector>

#include "radmotion/types.hpp"

namespace radmotion {

// Stacked line plots of b(t), one panel per participant, as a self-contained
// SVG document. Traces longer than the pixel budget are max-decimated so
// movement peaks survive.
void write_movement_svg(const std::vector<MovementTrace>& traces,
                        const std::filesystem::path& path);

} // namespace radmotion
