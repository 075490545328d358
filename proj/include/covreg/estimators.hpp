#pragma once

#include "covreg/matcore.hpp"
#include "covreg/obs_matrix.hpp"

namespace covreg {

/// Hard-threshold level. keep_diagonal=false applies the operator
/// literally to every entry; keep_diagonal=true exempts the diagonal
/// (practitioners usually want variances preserved).
struct ThresholdSpec {
    double s = 0.0;
    bool keep_diagonal = false;
};

/// Parameters of the polynomial-tail threshold: the data have finite
/// moments of order 2(1+gamma), and scale_m multiplies the rate.
struct HeavyTailParams {
    double gamma = 1.0;
    double scale_m = 1.0;
};

/// Sample covariance with divisor n (not n-1). Requires complete data
/// and n >= 2.
SymMatrix sample_covariance(const ObsMatrix& x);

/// Covariance entry (i,j) computed over the rows where both columns are
/// present, with means recomputed over that same row subset. Symmetric
/// but not guaranteed positive semidefinite. Each column pair needs at
/// least 2 jointly present rows.
SymMatrix pairwise_covariance(const ObsMatrix& x);

/// Zeroes entries with |m_ij| < s; equality is kept.
SymMatrix threshold(const SymMatrix& m, const ThresholdSpec& spec);
inline SymMatrix threshold(const SymMatrix& m, double s) { return threshold(m, ThresholdSpec{s}); }

/// Zeroes entries with |i-j| > k.
SymMatrix band(const SymMatrix& m, int k);

/// t = m_prime * sqrt(ln(p) / n), the Gaussian-tail threshold level.
double gaussian_threshold(int p, int n, double m_prime);

/// t = scale_m * p^{2/(1+gamma)} / sqrt(n), for data with only
/// 2(1+gamma) finite moments.
double heavy_tail_threshold(int p, int n, const HeavyTailParams& params);

/// Shrinkage toward a scaled identity with the standard data-driven
/// intensity: rho* = min(1, b^2/d^2), mu = tr(S)/p,
/// d^2 = ||S - mu I||_F^2 / p,
/// b^2 = min(d^2, (1/(n^2 p)) sum_k ||xc_k xc_k^T - S||_F^2).
/// The result shares eigenvectors with the sample covariance.
SymMatrix ledoit_wolf(const ObsMatrix& x);

/// Sufficient condition for the thresholded matrix to stay positive
/// definite: ||thresholded - original|| < lambda_min(original). Returns
/// false when the margin is not met even if the result happens to be PD.
bool pd_margin_check(const SymMatrix& original, const SymMatrix& thresholded);

/// Inverse via Cholesky. Requires min_eigenvalue(m) > 1e-10.
SymMatrix inverse_estimate(const SymMatrix& m);

}  // namespace covreg
