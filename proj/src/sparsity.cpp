#include "covreg/sparsity.hpp"

#include <algorithm>
#include <cmath>

namespace covreg {

namespace {

void require_valid_q(double q) {
    if (!(q >= 0.0 && q < 1.0)) {
        throw InvalidQError("q must lie in [0, 1)");
    }
}

double q_power(double v, double q) {
    const double a = std::abs(v);
    if (q == 0.0) return a == 0.0 ? 0.0 : 1.0;
    return std::pow(a, q);
}

}  // namespace

double sparsity_radius(const SymMatrix& m, double q) {
    require_valid_q(q);
    const int p = m.dim();
    double best = 0.0;
    for (int i = 0; i < p; ++i) {
        double s = 0.0;
        for (int j = 0; j < p; ++j) s += q_power(m(i, j), q);
        best = std::max(best, s);
    }
    return best;
}

SparsityProfile profile(const SymMatrix& m, double q) {
    require_valid_q(q);
    SparsityProfile out;
    out.q = q;
    out.c0_hat = sparsity_radius(m, q);
    out.m_hat = m(0, 0);
    for (int i = 1; i < m.dim(); ++i) out.m_hat = std::max(out.m_hat, m(i, i));

    const EigenDecomp d = sym_eigen(m);
    out.min_eig = d.values.back();
    out.lambda_max_bound = std::pow(out.m_hat, 1.0 - q) * out.c0_hat;

    if (d.values.front() > out.lambda_max_bound + 1e-9) {
        throw NumericError(
            "sparsity profile bound violated: lambda_max exceeds m_hat^{1-q} * c0_hat "
            "(input is not a covariance matrix?)");
    }
    return out;
}

DecayCheckResult decay_class_check(const SymMatrix& m, const DecayClassParams& params) {
    const int p = m.dim();
    DecayCheckResult r;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double bound = params.big_c * std::pow(static_cast<double>(j - i),
                                                         -(params.alpha + 1.0));
            if (std::abs(m(i, j)) > bound) {
                r.ok = false;
                r.violation = DecayCheckResult::Violation::entry;
                r.i = i;
                r.j = j;
                r.value = m(i, j);
                r.bound = bound;
                return r;
            }
        }
    }
    const EigenDecomp d = sym_eigen(m);
    if (d.values.back() < params.eps0) {
        r.ok = false;
        r.violation = DecayCheckResult::Violation::min_eigenvalue;
        r.value = d.values.back();
        r.bound = params.eps0;
        return r;
    }
    if (d.values.front() > 1.0 / params.eps0) {
        r.ok = false;
        r.violation = DecayCheckResult::Violation::max_eigenvalue;
        r.value = d.values.front();
        r.bound = 1.0 / params.eps0;
        return r;
    }
    return r;
}

double operator_rate(double q, double c0, int p, int n) {
    return c0 * std::pow(std::log(static_cast<double>(p)) / n, (1.0 - q) / 2.0);
}

double frobenius_rate(double q, double c0, int p, int n) {
    return c0 * std::pow(std::log(static_cast<double>(p)) / n, 1.0 - q / 2.0);
}

double heavy_tail_rate(double q, double c0, int p, int n, double gamma) {
    const double base = std::pow(static_cast<double>(p), 2.0 / (1.0 + gamma)) /
                        std::sqrt(static_cast<double>(n));
    return c0 * std::pow(base, 1.0 - q);
}

}  // namespace covreg
