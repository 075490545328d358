#include "covreg/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace covreg {

SymMatrix sample_covariance(const ObsMatrix& x) {
    const int n = x.rows();
    const int p = x.cols();
    if (n < 2) throw TooFewSamplesError("sample covariance needs n >= 2");
    if (x.has_missing()) {
        throw MissingDataError("sample covariance requires complete data; use pairwise_covariance");
    }

    std::vector<double> mean(p, 0.0);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < p; ++j) mean[j] += x(k, j);
    }
    for (int j = 0; j < p; ++j) mean[j] /= n;

    std::vector<double> centered(static_cast<size_t>(n) * p);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < p; ++j) {
            centered[static_cast<size_t>(k) * p + j] = x(k, j) - mean[j];
        }
    }

    SymMatrix sigma(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += centered[static_cast<size_t>(k) * p + i] *
                     centered[static_cast<size_t>(k) * p + j];
            }
            sigma.set(i, j, s / n);
        }
    }
    return sigma;
}

SymMatrix pairwise_covariance(const ObsMatrix& x) {
    const int n = x.rows();
    const int p = x.cols();
    if (n < 2) throw TooFewSamplesError("pairwise covariance needs n >= 2");

    SymMatrix sigma(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            int m = 0;
            double mi = 0.0;
            double mj = 0.0;
            for (int k = 0; k < n; ++k) {
                if (x.missing(k, i) || x.missing(k, j)) continue;
                ++m;
                mi += x(k, i);
                mj += x(k, j);
            }
            if (m < 2) throw InsufficientOverlapError(i, j);
            mi /= m;
            mj /= m;
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                if (x.missing(k, i) || x.missing(k, j)) continue;
                s += (x(k, i) - mi) * (x(k, j) - mj);
            }
            sigma.set(i, j, s / m);
        }
    }
    return sigma;
}

SymMatrix threshold(const SymMatrix& m, const ThresholdSpec& spec) {
    const int p = m.dim();
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double v = m(i, j);
            const bool keep = std::abs(v) >= spec.s || (spec.keep_diagonal && i == j);
            out.set(i, j, keep ? v : 0.0);
        }
    }
    return out;
}

SymMatrix band(const SymMatrix& m, int k) {
    const int p = m.dim();
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            out.set(i, j, (j - i) <= k ? m(i, j) : 0.0);
        }
    }
    return out;
}

double gaussian_threshold(int p, int n, double m_prime) {
    if (p < 2) throw DimensionTooSmallError("gaussian_threshold needs p >= 2");
    if (n < 1) throw InputError("gaussian_threshold needs n >= 1");
    return m_prime * std::sqrt(std::log(static_cast<double>(p)) / n);
}

double heavy_tail_threshold(int p, int n, const HeavyTailParams& params) {
    if (p < 1 || n < 1) throw InputError("heavy_tail_threshold needs p >= 1, n >= 1");
    return params.scale_m * std::pow(static_cast<double>(p), 2.0 / (1.0 + params.gamma)) /
           std::sqrt(static_cast<double>(n));
}

SymMatrix ledoit_wolf(const ObsMatrix& x) {
    const int n = x.rows();
    const int p = x.cols();
    const SymMatrix sigma = sample_covariance(x);  // validates completeness and n >= 2

    const double mu = sigma.trace() / p;
    double d2 = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const double t = sigma(i, j) - (i == j ? mu : 0.0);
            d2 += t * t;
        }
    }
    d2 /= p;

    std::vector<double> mean(p, 0.0);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < p; ++j) mean[j] += x(k, j);
    }
    for (int j = 0; j < p; ++j) mean[j] /= n;

    double b2 = 0.0;
    std::vector<double> xc(p);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < p; ++j) xc[j] = x(k, j) - mean[j];
        for (int i = 0; i < p; ++i) {
            for (int j = 0; j < p; ++j) {
                const double t = xc[i] * xc[j] - sigma(i, j);
                b2 += t * t;
            }
        }
    }
    b2 /= static_cast<double>(n) * n * p;
    b2 = std::min(b2, d2);

    const double rho = d2 > 0.0 ? std::min(1.0, b2 / d2) : 0.0;

    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double target = (i == j) ? mu : 0.0;
            out.set(i, j, rho * target + (1.0 - rho) * sigma(i, j));
        }
    }
    return out;
}

bool pd_margin_check(const SymMatrix& original, const SymMatrix& thresholded) {
    if (original.dim() != thresholded.dim()) {
        throw DimensionMismatchError("pd_margin_check dimensions differ");
    }
    const double eps = operator_norm(thresholded - original);
    const bool ok = eps < min_eigenvalue(original);
    if (ok && !(min_eigenvalue(thresholded) > 0.0)) {
        // The margin condition implies positive definiteness; reaching
        // this line means the eigensolver is broken.
        throw NumericError("pd_margin_check passed but thresholded matrix is not PD");
    }
    return ok;
}

SymMatrix inverse_estimate(const SymMatrix& m) {
    if (!(min_eigenvalue(m) > 1e-10)) {
        throw NotPositiveDefiniteError("inverse_estimate requires min eigenvalue > 1e-10");
    }
    const int p = m.dim();
    const CholeskyFactor f = cholesky(m);
    SymMatrix inv(p);
    std::vector<double> col(p);
    for (int j = 0; j < p; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        f.forward_solve(col);
        f.backward_solve(col);
        for (int i = j; i < p; ++i) inv.set(i, j, col[i]);
    }
    return inv;
}

}  // namespace covreg
