#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "radmotion/types.hpp"

namespace radmotion {

// Per correlation segment ell: an M x M matrix rho[m][m'] between radar-1
// trace m and radar-2 trace m'. Entries are in [-1, 1], NaN where a trace is
// constant over the segment.
struct CorrelationMatrixSequence {
    std::vector<std::string> participants; // shared row/column order
    double t_rho_s = 0.0;
    std::vector<std::vector<double>> matrices; // L entries, each M*M row-major

    std::size_t n_participants() const { return participants.size(); }
    std::size_t n_segments() const { return matrices.size(); }
    double rho(std::size_t ell, std::size_t m, std::size_t mp) const {
        return matrices[ell][m * participants.size() + mp];
    }
};

struct AssociationReport {
    std::vector<std::string> participants;
    std::vector<std::vector<std::uint8_t>> p_hat; // [ell][m]
    double accuracy = 0.0;                        // p
};

struct ScoreEntry {
    std::string participant;
    int experiment = 0;
    std::string evaluator;
    int beta1 = 0; // each item in {0, 1, 2}
    int beta2 = 0;
};

struct ScoreTable {
    std::vector<ScoreEntry> entries;
    // Filled by normalize_scores:
    std::vector<std::string> participants; // sorted unique
    std::vector<int> experiments;          // sorted unique
    std::vector<std::string> evaluators;   // sorted unique
    std::vector<double> beta;              // participants.size() * experiments.size(), [m][j]

    double beta_at(std::size_t m, std::size_t j) const { return beta[m * experiments.size() + j]; }
};

struct ObjectiveIndexEntry {
    std::string participant;
    int experiment = 0;
    double b_mps = 0.0;
};

// Per-segment Pearson correlation of the two traces over T_rho segments
// (means removed per segment). Constant segment -> NaN.
std::vector<double> segment_correlation(const MovementTrace& b1, const MovementTrace& b2,
                                        double t_rho_s, double fs_hz);

// All-pairs segment correlations between two equally sized trace sets that
// share participant order.
CorrelationMatrixSequence correlation_matrices(const std::vector<MovementTrace>& radar1,
                                               const std::vector<MovementTrace>& radar2,
                                               double t_rho_s, double fs_hz);

// p_hat[m][ell] = 1 iff the diagonal weakly dominates its row (NaN never
// dominates and is never dominated by); p = mean of p_hat.
AssociationReport association_accuracy(const CorrelationMatrixSequence& corr);

// beta(m,j) = (1/K') sum_k sum_score(m,j,k) / grand_mean(evaluator k).
ScoreTable normalize_scores(const ScoreTable& raw);

// Sums-level core of normalize_scores: sums laid out (m*J + j)*Kp + k.
// Exposed separately because the per-evaluator scale invariance only makes
// sense on real-valued sums, not on {0,1,2} item scores.
std::vector<double> normalize_score_sums(const std::vector<double>& sums, std::size_t n_m,
                                         std::size_t n_j, std::size_t n_k);

// Mean over radars of the RMS of the mean-removed trace over [0, L*T_rho].
double objective_index(const std::vector<MovementTrace>& traces_per_radar, double t_rho_s,
                       std::size_t n_segments);

// Standard sample Pearson correlation; throws NumericError on constant input.
double pearson(std::span<const double> x, std::span<const double> y);

} // namespace radmotion
