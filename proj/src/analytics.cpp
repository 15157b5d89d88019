#include "radmotion/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "radmotion/errors.hpp"

namespace radmotion {

namespace {

double pearson_or_nan(const double* x, const double* y, std::size_t n) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        return std::numeric_limits<double>::quiet_NaN();
    const double rho = sxy / std::sqrt(sxx * syy);
    return std::clamp(rho, -1.0, 1.0);
}

} // namespace

std::vector<double> segment_correlation(const MovementTrace& b1, const MovementTrace& b2,
                                        double t_rho_s, double fs_hz) {
    if (b1.b_mps.size() != b2.b_mps.size())
        throw NumericError("correlation traces must have equal length");
    const auto segs = segment_bounds(b1.b_mps.size(), fs_hz, t_rho_s);
    if (segs.empty())
        throw NumericError("no full correlation segment fits in the traces");
    std::vector<double> rho(segs.size());
    for (std::size_t ell = 0; ell < segs.size(); ++ell) {
        const SegmentSpan seg = segs[ell];
        rho[ell] = pearson_or_nan(b1.b_mps.data() + seg.begin, b2.b_mps.data() + seg.begin,
                                  seg.size());
    }
    return rho;
}

CorrelationMatrixSequence correlation_matrices(const std::vector<MovementTrace>& radar1,
                                               const std::vector<MovementTrace>& radar2,
                                               double t_rho_s, double fs_hz) {
    if (radar1.size() != radar2.size())
        throw ConfigError("correlation requires the same participant count per radar");
    const std::size_t m_count = radar1.size();
    if (m_count == 0)
        throw ConfigError("correlation requires at least one participant");

    CorrelationMatrixSequence out;
    out.t_rho_s = t_rho_s;
    out.participants.reserve(m_count);
    for (const MovementTrace& tr : radar1) out.participants.push_back(tr.participant_id);

    for (std::size_t m = 0; m < m_count; ++m) {
        for (std::size_t mp = 0; mp < m_count; ++mp) {
            const std::vector<double> rho =
                segment_correlation(radar1[m], radar2[mp], t_rho_s, fs_hz);
            if (out.matrices.empty())
                out.matrices.assign(rho.size(), std::vector<double>(m_count * m_count, 0.0));
            for (std::size_t ell = 0; ell < rho.size(); ++ell)
                out.matrices[ell][m * m_count + mp] = rho[ell];
        }
    }
    return out;
}

AssociationReport association_accuracy(const CorrelationMatrixSequence& corr) {
    const std::size_t m_count = corr.n_participants();
    const std::size_t l_count = corr.n_segments();
    AssociationReport report;
    report.participants = corr.participants;
    report.p_hat.assign(l_count, std::vector<std::uint8_t>(m_count, 0));

    std::size_t hits = 0;
    for (std::size_t ell = 0; ell < l_count; ++ell) {
        for (std::size_t m = 0; m < m_count; ++m) {
            const double diag = corr.rho(ell, m, m);
            if (std::isnan(diag)) continue; // a frozen trace never associates
            bool ok = true;
            for (std::size_t mp = 0; mp < m_count && ok; ++mp) {
                if (mp == m) continue;
                const double off = corr.rho(ell, m, mp);
                if (!std::isnan(off) && off > diag) ok = false;
            }
            if (ok) {
                report.p_hat[ell][m] = 1;
                ++hits;
            }
        }
    }
    report.accuracy =
        (m_count && l_count)
            ? static_cast<double>(hits) / static_cast<double>(m_count * l_count)
            : 0.0;
    return report;
}

std::vector<double> normalize_score_sums(const std::vector<double>& sums, std::size_t n_m,
                                         std::size_t n_j, std::size_t n_k) {
    if (sums.size() != n_m * n_j * n_k || n_m == 0 || n_j == 0 || n_k == 0)
        throw ConfigError("score sum array does not match its dimensions");
    std::vector<double> grand(n_k, 0.0);
    for (std::size_t m = 0; m < n_m; ++m)
        for (std::size_t j = 0; j < n_j; ++j)
            for (std::size_t k = 0; k < n_k; ++k) grand[k] += sums[(m * n_j + j) * n_k + k];
    for (std::size_t k = 0; k < n_k; ++k) {
        grand[k] /= static_cast<double>(n_m * n_j);
        if (!(grand[k] > 0.0))
            throw NumericError("evaluator grand mean is zero; scores cannot be normalized");
    }
    std::vector<double> beta(n_m * n_j, 0.0);
    for (std::size_t m = 0; m < n_m; ++m) {
        for (std::size_t j = 0; j < n_j; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n_k; ++k)
                acc += sums[(m * n_j + j) * n_k + k] / grand[k];
            beta[m * n_j + j] = acc / static_cast<double>(n_k);
        }
    }
    return beta;
}

ScoreTable normalize_scores(const ScoreTable& raw) {
    if (raw.entries.empty())
        throw ConfigError("score table is empty");

    ScoreTable out = raw;
    std::set<std::string> pset;
    std::set<int> jset;
    std::set<std::string> kset;
    for (const ScoreEntry& e : raw.entries) {
        if (e.beta1 < 0 || e.beta1 > 2 || e.beta2 < 0 || e.beta2 > 2)
            throw ConfigError("raw item scores must lie in {0, 1, 2}");
        pset.insert(e.participant);
        jset.insert(e.experiment);
        kset.insert(e.evaluator);
    }
    out.participants.assign(pset.begin(), pset.end());
    out.experiments.assign(jset.begin(), jset.end());
    out.evaluators.assign(kset.begin(), kset.end());
    const std::size_t n_m = out.participants.size();
    const std::size_t n_j = out.experiments.size();
    const std::size_t n_k = out.evaluators.size();

    std::vector<double> sums(n_m * n_j * n_k, 0.0);
    std::vector<std::uint8_t> seen(n_m * n_j * n_k, 0);
    for (const ScoreEntry& e : raw.entries) {
        const auto m = static_cast<std::size_t>(
            std::lower_bound(out.participants.begin(), out.participants.end(), e.participant) -
            out.participants.begin());
        const auto j = static_cast<std::size_t>(
            std::lower_bound(out.experiments.begin(), out.experiments.end(), e.experiment) -
            out.experiments.begin());
        const auto k = static_cast<std::size_t>(
            std::lower_bound(out.evaluators.begin(), out.evaluators.end(), e.evaluator) -
            out.evaluators.begin());
        const std::size_t idx = (m * n_j + j) * n_k + k;
        if (seen[idx])
            throw ConfigError("duplicate score row for participant '" + e.participant + "'");
        seen[idx] = 1;
        sums[idx] = static_cast<double>(e.beta1 + e.beta2);
    }
    for (std::size_t idx = 0; idx < seen.size(); ++idx) {
        if (!seen[idx])
            throw ConfigError("score table is missing participant/experiment/evaluator rows");
    }
    out.beta = normalize_score_sums(sums, n_m, n_j, n_k);
    return out;
}

double objective_index(const std::vector<MovementTrace>& traces_per_radar, double t_rho_s,
                       std::size_t n_segments) {
    if (traces_per_radar.empty())
        throw ConfigError("objective index requires at least one trace");
    if (!(t_rho_s > 0.0) || n_segments == 0)
        throw ConfigError("objective index requires a positive segment span");

    double acc = 0.0;
    for (const MovementTrace& trace : traces_per_radar) {
        const auto need = static_cast<std::size_t>(
            std::llround(t_rho_s * trace.fs_hz)) * n_segments;
        if (need == 0 || trace.b_mps.size() < need)
            throw NumericError("movement trace shorter than L*T_rho");
        double mean = 0.0;
        for (std::size_t i = 0; i < need; ++i) mean += trace.b_mps[i];
        mean /= static_cast<double>(need);
        double ss = 0.0;
        for (std::size_t i = 0; i < need; ++i) {
            const double d = trace.b_mps[i] - mean;
            ss += d * d;
        }
        acc += std::sqrt(ss / static_cast<double>(need));
    }
    return acc / static_cast<double>(traces_per_radar.size());
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw NumericError("pearson inputs must have equal length");
    if (x.size() < 2)
        throw NumericError("pearson requires at least 2 samples");
    const double rho = pearson_or_nan(x.data(), y.data(), x.size());
    if (std::isnan(rho))
        throw NumericError("pearson is undefined for constant input");
    return rho;
}

} // namespace radmotion
