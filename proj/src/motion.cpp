#include "radmotion/motion.hpp"

#include <cmath>
#include <numbers>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::vector<double> unwrap_phase(std::span<const double> phases) {
    if (phases.empty())
        throw NumericError("phase sequence is empty");
    std::vector<double> out(phases.size());
    out[0] = phases[0];
    long long k = 0; // accumulated multiples of 2*pi
    for (std::size_t i = 1; i < phases.size(); ++i) {
        const double diff = phases[i] - phases[i - 1];
        k -= static_cast<long long>(std::ceil((diff - kPi) / (2.0 * kPi)));
        out[i] = phases[i] + 2.0 * kPi * static_cast<double>(k);
    }
    return out;
}

DisplacementTrace extract_displacement(const ComplexImageSequence& seq,
                                       const TargetTrack& track,
                                       const RadarConfig& config) {
    const auto segs = segment_bounds(seq.n_slow, seq.fs_hz, config.clutter_segment_s);
    if (segs.empty())
        throw NumericError("no full segment fits in the sequence");
    if (track.cells.size() < segs.size())
        throw ConfigError("track does not cover all segments of the sequence");

    DisplacementTrace trace;
    trace.participant_id = track.participant_id;
    trace.radar_id = seq.radar_id;
    trace.fs_hz = seq.fs_hz;
    const std::size_t n = segs.back().end;
    trace.d_m.resize(n);
    trace.sample_valid.assign(n, 1);
    trace.segment_starts.reserve(segs.size());

    const double scale = seq.wavelength_m / (4.0 * kPi);
    double prev_last_d = 0.0;
    double prev_last_ph = 0.0;
    CellIndex prev_cell{};
    std::vector<double> ph;
    for (std::size_t ell = 0; ell < segs.size(); ++ell) {
        const SegmentSpan seg = segs[ell];
        trace.segment_starts.push_back(seg.begin);
        const CellIndex cell = track.cells[ell].cell;

        ph.resize(seg.size());
        std::size_t first_valid = seg.size();
        for (std::size_t i = 0; i < seg.size(); ++i) {
            const cd z = seq.at(seg.begin + i, cell.range_idx, cell.angle_idx);
            if (z == cd{0.0, 0.0}) {
                trace.sample_valid[seg.begin + i] = 0;
                ph[i] = (i > 0) ? ph[i - 1] : 0.0;
            } else {
                ph[i] = std::arg(z);
                if (first_valid == seg.size()) first_valid = i;
            }
        }
        // Leading invalid samples bridge forward from the first valid phase.
        for (std::size_t i = 0; i < first_valid && i < seg.size(); ++i)
            ph[i] = (first_valid < seg.size()) ? ph[first_valid] : 0.0;

        const std::vector<double> unwrapped = unwrap_phase(ph);
        // Anchor the segment. While the tracked cell is unchanged the phase
        // sequence is continuous across the boundary, so the unwrap continues
        // through it and the boundary step is kept as real motion. A cell
        // switch changes the absolute phase reference arbitrarily, so there
        // the segment is pinned to the previous segment's last sample and the
        // retargeting jump is discarded.
        double offset = 0.0;
        if (ell > 0) {
            offset = prev_last_d - scale * unwrapped[0];
            if (cell == prev_cell) {
                const double diff = ph[0] - prev_last_ph;
                const double step = diff - 2.0 * kPi * std::ceil((diff - kPi) / (2.0 * kPi));
                offset += scale * step;
            }
        }
        for (std::size_t i = 0; i < seg.size(); ++i)
            trace.d_m[seg.begin + i] = scale * unwrapped[i] + offset;
        prev_last_d = trace.d_m[seg.end - 1];
        prev_last_ph = ph[seg.size() - 1];
        prev_cell = cell;
    }
    return trace;
}

MovementTrace movement_index(const DisplacementTrace& trace, double window_s, double fs_hz) {
    const std::size_t n = trace.d_m.size();
    if (n < 2)
        throw NumericError("displacement trace must have at least 2 samples");
    if (!(window_s > 0.0) || !(fs_hz > 0.0) || !(window_s * fs_hz >= 2.0))
        throw NumericError("movement window must span at least 2 samples");

    const std::vector<double>& d = trace.d_m;
    std::vector<double> v2(n);      // squared Doppler velocity
    std::vector<double> weight(n, 1.0);
    {
        double v = (d[1] - d[0]) * fs_hz;
        v2[0] = v * v;
        v = (d[n - 1] - d[n - 2]) * fs_hz;
        v2[n - 1] = v * v;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double v = (d[i + 1] - d[i - 1]) * fs_hz * 0.5;
        v2[i] = v * v;
    }
    // Derivative samples straddling a stitch mix two independently offset
    // segments; they carry no weight.
    for (std::size_t s = 1; s < trace.segment_starts.size(); ++s) {
        const std::size_t e = trace.segment_starts[s];
        if (e < n) weight[e] = 0.0;
        if (e >= 1) weight[e - 1] = 0.0;
    }

    MovementTrace out;
    out.participant_id = trace.participant_id;
    out.radar_id = trace.radar_id;
    out.fs_hz = fs_hz;
    out.b_mps.resize(n);

    const auto h = static_cast<std::size_t>(std::llround(window_s * fs_hz / 2.0));
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t lo = (t >= h) ? t - h : 0;
        const std::size_t hi = (t + h < n) ? t + h : n - 1;
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i = lo; i <= hi; ++i) {
            const double cw = (i == lo || i == hi) ? 0.5 : 1.0;
            const double w = cw * weight[i];
            num += w * v2[i];
            den += w;
        }
        out.b_mps[t] = (den > 0.0) ? std::sqrt(num / den) : 0.0;
    }
    return out;
}

} // namespace radmotion
