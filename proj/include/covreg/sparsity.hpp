#pragma once

#include "covreg/matcore.hpp"

namespace covreg {

/// Diagnostics for the permutation-invariant sparsity class: matrices
/// with bounded diagonal and row-wise l_q "norm" of entries at most c0.
/// q = 0 counts nonzeros per row (0^0 := 0).
struct SparsityProfile {
    double q = 0.0;
    double c0_hat = 0.0;           // max row q-norm
    double m_hat = 0.0;            // max diagonal entry
    double min_eig = 0.0;
    double lambda_max_bound = 0.0;  // m_hat^{1-q} * c0_hat
};

/// Parameters of the polynomial-decay class: |sigma_ij| <= big_c *
/// |i-j|^{-(alpha+1)} off the diagonal, spectrum within [eps0, 1/eps0].
struct DecayClassParams {
    double alpha = 1.0;
    double big_c = 1.0;
    double eps0 = 0.1;
};

struct DecayCheckResult {
    enum class Violation { none, entry, min_eigenvalue, max_eigenvalue };

    bool ok = true;
    Violation violation = Violation::none;
    int i = -1;  // first violating entry when violation == entry
    int j = -1;
    double value = 0.0;  // offending value
    double bound = 0.0;  // bound it broke
};

/// Max over rows of sum_j |m_ij|^q, with 0^0 := 0. Throws InvalidQError
/// unless 0 <= q < 1.
double sparsity_radius(const SymMatrix& m, double q);

/// Assembles the sparsity diagnostics and verifies the norm-chain bound
/// lambda_max <= m_hat^{1-q} * c0_hat (+1e-9 slack); the bound holds for
/// covariance (PSD) input and a violation throws NumericError.
SparsityProfile profile(const SymMatrix& m, double q);

DecayCheckResult decay_class_check(const SymMatrix& m, const DecayClassParams& params);

/// c0 * (ln p / n)^{(1-q)/2} - the operator-norm convergence rate of the
/// thresholded estimator.
double operator_rate(double q, double c0, int p, int n);

/// c0 * (ln p / n)^{1-q/2} - the per-coordinate squared-Frobenius rate.
double frobenius_rate(double q, double c0, int p, int n);

/// c0 * (p^{2/(1+gamma)} / sqrt(n))^{1-q} - the rate under polynomial
/// tails with 2(1+gamma) moments.
double heavy_tail_rate(double q, double c0, int p, int n, double gamma);

}  // namespace covreg
