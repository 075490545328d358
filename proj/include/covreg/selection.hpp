#pragma once

#include <cstdint>
#include <vector>

#include "covreg/estimators.hpp"

namespace covreg {

/// Random-split scheme for the resampling risk: each of n_splits splits
/// permutes the rows (seeded), fits on the first n1 rows and validates
/// against the remaining n2.
struct SplitScheme {
    int n1 = 0;
    int n2 = 0;
    int n_splits = 10;
    uint64_t seed = 0;

    /// Default rule: n2 = max(1, round(n / ln n)), n1 = n - n2.
    static SplitScheme defaults(int n, int n_splits = 10, uint64_t seed = 0);

    void validate(int n) const;
};

enum class GridKind { threshold, bandwidth };

enum class Regularizer { threshold, band };

/// Candidate tuning parameters, strictly increasing. Threshold grids
/// start at 0 (no regularization); bandwidth grids are the integers
/// 0..min(j_max, p-1).
struct TuningGrid {
    std::vector<double> points;
    GridKind kind = GridKind::threshold;
};

struct RiskPoint {
    double point = 0.0;
    double risk = 0.0;
};

struct SelectionResult {
    GridKind kind = GridKind::threshold;
    double chosen = 0.0;
    std::vector<RiskPoint> risk_curve;
    SplitScheme scheme;
};

/// Threshold grid {j * sqrt(ln p / n) : 0 <= j <= j_max} or bandwidth
/// grid {0, ..., min(j_max, p-1)}.
TuningGrid make_grid(int p, int n, int j_max, GridKind kind);

/// Smallest j_max whose top grid point reaches max_ij |sigma_hat_ij|
/// (beyond which the risk curve is constant), capped at 200.
int default_threshold_j_max(const SymMatrix& sigma_hat, int p, int n);

/// The resampling risk over the grid:
/// R(s) = (1/N) sum_v || regularize(Sigma1_v, s) - Sigma2_v ||_F^2,
/// with both half-sample covariances computed with divisor = rows.
/// Requires complete data and both halves >= 2 rows.
std::vector<RiskPoint> cv_risk(const ObsMatrix& x, const TuningGrid& grid,
                               const SplitScheme& scheme, Regularizer reg);

/// Minimizes the resampling risk over the grid; ties break toward the
/// largest point (the sparser estimate). Grid points below lower_cutoff
/// are excluded from the argmin (but stay in the risk curve).
SelectionResult select(const ObsMatrix& x, const TuningGrid& grid, const SplitScheme& scheme,
                       Regularizer reg, double lower_cutoff = 0.0);

/// Grid point minimizing || regularize(sigma_hat, s) - sigma_true ||_F^2
/// -- the oracle choice, available only when the truth is known.
SelectionResult oracle_select(const SymMatrix& sigma_hat, const SymMatrix& sigma_true,
                              const TuningGrid& grid, Regularizer reg);

/// Argmin with the shared tie rule (ties toward the largest point).
int argmin_risk(const std::vector<RiskPoint>& curve, double lower_cutoff = 0.0);

SymMatrix apply_regularizer(const SymMatrix& m, Regularizer reg, double point);

}  // namespace covreg
