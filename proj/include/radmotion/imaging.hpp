#pragma once

#include <vector>

#include "radmotion/types.hpp"

namespace radmotion {

struct TaylorWindow {
    std::vector<double> coefficients; // symmetric, max coefficient = 1
    double sidelobe_db = 0.0;
    int nbar = 0;
};

// Classical Taylor taper synthesis; coefficients normalized to unit maximum.
TaylorWindow taylor_window(int n, double sidelobe_db, int nbar);

// w_n = e^{j pi n sin(theta)}, n = 0..N-1 (half-wavelength element spacing).
std::vector<cd> steering_weights(double theta_rad, int n);

// I'(t,r,theta) = sum_n alpha_n w_n(theta) s_n(t,r) for every listed angle.
ComplexImageSequence beamform(const DataCube& cube, const TaylorWindow& window,
                              const std::vector<double>& angles_rad);
ComplexImageSequence beamform(const DataCube& cube, const TaylorWindow& window,
                              const AngleGrid& grid);

// Per-segment mean subtraction over segments of seg_len_s seconds; output is
// truncated to the covered prefix (trailing partial segment dropped).
ComplexImageSequence suppress_clutter(const ComplexImageSequence& seq, double seg_len_s);

// Per-cell time average of |I|^2 over segment ell.
PowerImage power_image(const ComplexImageSequence& seq, std::size_t ell, double seg_len_s);

} // namespace radmotion
