#include "radmotion/types.hpp"

#include <cmath>

#include "radmotion/errors.hpp"

namespace radmotion {

void validate_cube(const DataCube& cube) {
    const std::size_t expected = cube.n_slow * cube.n_range * cube.n_channels();
    if (cube.samples.size() != expected)
        throw NumericError("data cube sample count does not match dimensions");
    for (const cd& v : cube.samples) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw NumericError("data cube contains non-finite samples");
    }
}

} // namespace radmotion
