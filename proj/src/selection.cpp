#include "covreg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "covreg/rng.hpp"

namespace covreg {

SplitScheme SplitScheme::defaults(int n, int n_splits, uint64_t seed) {
    SplitScheme s;
    s.n2 = std::max(1, static_cast<int>(std::floor(n / std::log(static_cast<double>(n)) + 0.5)));
    s.n1 = n - s.n2;
    s.n_splits = n_splits;
    s.seed = seed;
    s.validate(n);
    return s;
}

void SplitScheme::validate(int n) const {
    if (n1 + n2 != n) throw InputError("split sizes must satisfy n1 + n2 == n");
    if (n1 < 2 || n2 < 1) throw TooFewSamplesError("split needs n1 >= 2 and n2 >= 1");
    if (n_splits < 1) throw InputError("n_splits must be positive");
}

TuningGrid make_grid(int p, int n, int j_max, GridKind kind) {
    if (p < 2) throw DimensionTooSmallError("make_grid needs p >= 2");
    if (j_max < 0) throw InputError("j_max must be nonnegative");
    TuningGrid g;
    g.kind = kind;
    if (kind == GridKind::threshold) {
        const double step = std::sqrt(std::log(static_cast<double>(p)) / n);
        for (int j = 0; j <= j_max; ++j) g.points.push_back(j * step);
    } else {
        const int top = std::min(j_max, p - 1);
        for (int k = 0; k <= top; ++k) g.points.push_back(static_cast<double>(k));
    }
    return g;
}

int default_threshold_j_max(const SymMatrix& sigma_hat, int p, int n) {
    const double step = std::sqrt(std::log(static_cast<double>(p)) / n);
    const double top = sigma_hat.max_abs_entry();
    int j = 1;
    while (j < 200 && j * step < top) ++j;
    return j;
}

SymMatrix apply_regularizer(const SymMatrix& m, Regularizer reg, double point) {
    if (reg == Regularizer::threshold) return threshold(m, point);
    return band(m, static_cast<int>(point));
}

namespace {

double squared_frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
    const auto da = a.data();
    const auto db = b.data();
    double s = 0.0;
    for (size_t k = 0; k < da.size(); ++k) {
        const double d = da[k] - db[k];
        s += d * d;
    }
    return s;
}

}  // namespace

std::vector<RiskPoint> cv_risk(const ObsMatrix& x, const TuningGrid& grid,
                               const SplitScheme& scheme, Regularizer reg) {
    const int n = x.rows();
    scheme.validate(n);
    if (scheme.n1 < 2 || scheme.n2 < 2) {
        throw TooFewSamplesError("cv_risk needs n1 >= 2 and n2 >= 2");
    }
    if (x.has_missing()) throw MissingDataError("cv_risk requires complete data");

    std::vector<double> total(grid.points.size(), 0.0);
    std::vector<int> order(n);
    for (int v = 0; v < scheme.n_splits; ++v) {
        std::iota(order.begin(), order.end(), 0);
        SplitMix64 rng = SplitMix64::substream(scheme.seed, static_cast<uint64_t>(v));
        shuffle(order.data(), n, rng);
        const SymMatrix sigma1 = sample_covariance(x.select_rows(order, 0, scheme.n1));
        const SymMatrix sigma2 = sample_covariance(x.select_rows(order, scheme.n1, scheme.n2));
        for (size_t g = 0; g < grid.points.size(); ++g) {
            total[g] += squared_frobenius_distance(
                apply_regularizer(sigma1, reg, grid.points[g]), sigma2);
        }
    }

    std::vector<RiskPoint> curve(grid.points.size());
    for (size_t g = 0; g < grid.points.size(); ++g) {
        curve[g] = RiskPoint{grid.points[g], total[g] / scheme.n_splits};
    }
    return curve;
}

int argmin_risk(const std::vector<RiskPoint>& curve, double lower_cutoff) {
    int best = -1;
    for (size_t g = 0; g < curve.size(); ++g) {
        if (curve[g].point < lower_cutoff) continue;
        // <= so that equal risk moves the choice to the larger point
        if (best < 0 || curve[g].risk <= curve[best].risk) best = static_cast<int>(g);
    }
    if (best < 0) throw InputError("no grid points at or above the lower cutoff");
    return best;
}

SelectionResult select(const ObsMatrix& x, const TuningGrid& grid, const SplitScheme& scheme,
                       Regularizer reg, double lower_cutoff) {
    SelectionResult r;
    r.kind = grid.kind;
    r.scheme = scheme;
    r.risk_curve = cv_risk(x, grid, scheme, reg);
    r.chosen = r.risk_curve[argmin_risk(r.risk_curve, lower_cutoff)].point;
    return r;
}

SelectionResult oracle_select(const SymMatrix& sigma_hat, const SymMatrix& sigma_true,
                              const TuningGrid& grid, Regularizer reg) {
    if (sigma_hat.dim() != sigma_true.dim()) {
        throw DimensionMismatchError("oracle_select dimensions differ");
    }
    SelectionResult r;
    r.kind = grid.kind;
    r.risk_curve.reserve(grid.points.size());
    for (double point : grid.points) {
        r.risk_curve.push_back(RiskPoint{
            point, squared_frobenius_distance(apply_regularizer(sigma_hat, reg, point),
                                              sigma_true)});
    }
    r.chosen = r.risk_curve[argmin_risk(r.risk_curve)].point;
    return r;
}

}  // namespace covreg
