#include "radmotion/imaging.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace {
constexpr double kPi = std::numbers::pi;

using MatrixXcdRM = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

TaylorWindow taylor_window(int n, double sidelobe_db, int nbar) {
    if (n < 1)
        throw ConfigError("taylor window length must be at least 1");
    if (!(sidelobe_db < 0.0))
        throw ConfigError("taylor sidelobe level must be negative (dB)");
    if (n == 1)
        return TaylorWindow{{1.0}, sidelobe_db, nbar}; // nbar constraint is vacuous for one element
    if (nbar < 1 || 2 * nbar > n)
        throw ConfigError("taylor nbar must satisfy 1 <= nbar <= N/2");

    const double b = std::pow(10.0, -sidelobe_db / 20.0);
    const double a = std::acosh(b) / kPi;
    const double s2 = static_cast<double>(nbar) * nbar / (a * a + (nbar - 0.5) * (nbar - 0.5));

    std::vector<double> f(static_cast<std::size_t>(nbar - 1));
    for (int m = 1; m < nbar; ++m) {
        double num = (m % 2 == 1) ? 1.0 : -1.0;
        for (int i = 1; i < nbar; ++i)
            num *= 1.0 - static_cast<double>(m) * m / (s2 * (a * a + (i - 0.5) * (i - 0.5)));
        double den = 2.0;
        for (int i = 1; i < nbar; ++i)
            if (i != m) den *= 1.0 - static_cast<double>(m) * m / (static_cast<double>(i) * i);
        f[static_cast<std::size_t>(m - 1)] = num / den;
    }

    std::vector<double> w(static_cast<std::size_t>(n));
    const double center = (n - 1) / 2.0;
    // Evaluate the first half only and mirror, so symmetry holds bit-exactly.
    for (int i = 0; i * 2 <= n - 1; ++i) {
        double acc = 1.0;
        for (int m = 1; m < nbar; ++m)
            acc += 2.0 * f[static_cast<std::size_t>(m - 1)] *
                   std::cos(2.0 * kPi * m * (i - center) / n);
        w[static_cast<std::size_t>(i)] = acc;
        w[static_cast<std::size_t>(n - 1 - i)] = acc;
    }
    const double peak = *std::max_element(w.begin(), w.end());
    for (double& v : w) v /= peak;
    return TaylorWindow{std::move(w), sidelobe_db, nbar};
}

std::vector<cd> steering_weights(double theta_rad, int n) {
    std::vector<cd> w(static_cast<std::size_t>(n));
    const double phase_step = kPi * std::sin(theta_rad);
    for (int i = 0; i < n; ++i)
        w[static_cast<std::size_t>(i)] = std::polar(1.0, phase_step * i);
    return w;
}

ComplexImageSequence beamform(const DataCube& cube, const TaylorWindow& window,
                              const std::vector<double>& angles_rad) {
    const std::size_t n_ch = cube.n_channels();
    if (window.coefficients.size() != n_ch)
        throw ConfigError("taylor window length must match cube channel count");
    const std::size_t n_angles = angles_rad.size();
    if (n_angles == 0)
        throw ConfigError("angle grid is empty");

    ComplexImageSequence seq;
    seq.n_slow = cube.n_slow;
    seq.n_range = cube.n_range;
    seq.angles_rad = angles_rad;
    seq.fs_hz = cube.config.slow_time_fs_hz;
    seq.range_bin_m = cube.config.range_bin_m;
    seq.wavelength_m = cube.config.wavelength_m;
    seq.radar_id = cube.radar_id;
    seq.values.resize(cube.n_slow * cube.n_range * n_angles);

    Eigen::MatrixXcd weights(n_ch, n_angles); // column k = alpha .* w(theta_k)
    for (std::size_t k = 0; k < n_angles; ++k) {
        const std::vector<cd> sw = steering_weights(seq.angles_rad[k], static_cast<int>(n_ch));
        for (std::size_t n = 0; n < n_ch; ++n)
            weights(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k)) =
                window.coefficients[n] * sw[n];
    }

    const auto rows = static_cast<Eigen::Index>(cube.n_slow * cube.n_range);
    Eigen::Map<const MatrixXcdRM> s(cube.samples.data(), rows, static_cast<Eigen::Index>(n_ch));
    Eigen::Map<MatrixXcdRM> out(seq.values.data(), rows, static_cast<Eigen::Index>(n_angles));
    out.noalias() = s * weights;
    return seq;
}

ComplexImageSequence beamform(const DataCube& cube, const TaylorWindow& window,
                              const AngleGrid& grid) {
    return beamform(cube, window, grid.angles_rad());
}

ComplexImageSequence suppress_clutter(const ComplexImageSequence& seq, double seg_len_s) {
    const auto segs = segment_bounds(seq.n_slow, seq.fs_hz, seg_len_s);
    if (segs.empty())
        throw NumericError("no full clutter segment fits in the sequence");

    ComplexImageSequence out;
    out.n_slow = segs.back().end;
    out.n_range = seq.n_range;
    out.angles_rad = seq.angles_rad;
    out.fs_hz = seq.fs_hz;
    out.range_bin_m = seq.range_bin_m;
    out.wavelength_m = seq.wavelength_m;
    out.radar_id = seq.radar_id;
    out.values.resize(out.n_slow * out.n_range * out.n_angles());

    const std::size_t cells = seq.n_range * seq.n_angles();
    std::vector<cd> mean(cells);
    for (const SegmentSpan& seg : segs) {
        std::fill(mean.begin(), mean.end(), cd{0.0, 0.0});
        for (std::size_t t = seg.begin; t < seg.end; ++t) {
            const cd* row = seq.values.data() + t * cells;
            for (std::size_t c = 0; c < cells; ++c) mean[c] += row[c];
        }
        const double inv = 1.0 / static_cast<double>(seg.size());
        for (std::size_t c = 0; c < cells; ++c) mean[c] *= inv;
        for (std::size_t t = seg.begin; t < seg.end; ++t) {
            const cd* row = seq.values.data() + t * cells;
            cd* orow = out.values.data() + t * cells;
            for (std::size_t c = 0; c < cells; ++c) orow[c] = row[c] - mean[c];
        }
    }
    return out;
}

PowerImage power_image(const ComplexImageSequence& seq, std::size_t ell, double seg_len_s) {
    const auto segs = segment_bounds(seq.n_slow, seq.fs_hz, seg_len_s);
    if (ell >= segs.size())
        throw NumericError("power image segment index out of range");
    const SegmentSpan seg = segs[ell];

    PowerImage image;
    image.n_range = seq.n_range;
    image.angles_rad = seq.angles_rad;
    image.range_bin_m = seq.range_bin_m;
    image.segment_index = ell;
    const std::size_t cells = seq.n_range * seq.n_angles();
    image.values.assign(cells, 0.0);

    for (std::size_t t = seg.begin; t < seg.end; ++t) {
        const cd* row = seq.values.data() + t * cells;
        for (std::size_t c = 0; c < cells; ++c) image.values[c] += std::norm(row[c]);
    }
    const double inv = 1.0 / static_cast<double>(seg.size());
    for (std::size_t c = 0; c < cells; ++c) image.values[c] *= inv;
    return image;
}

} // namespace radmotion
