#include "covreg/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "covreg/rng.hpp"

namespace covreg {

namespace {

// Runs fn(i) for i in [0, count) over the requested number of threads.
// Work is indexed, so results land in preallocated slots and the output
// is independent of scheduling.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mutex;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
}

// Standard error = sample standard deviation / sqrt(reps).
double se_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1)) / std::sqrt(static_cast<double>(v.size()));
}

// Type-7 percentile (linear interpolation of order statistics).
double percentile(std::vector<double> v, double prob) {
    std::sort(v.begin(), v.end());
    const double h = prob * (v.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(h));
    const size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - lo) * (v[hi] - v[lo]);
}

double frobenius_distance(const SymMatrix& a, const SymMatrix& b) {
    return frobenius_norm(a - b);
}

uint64_t run_seed(uint64_t seed, uint64_t a, uint64_t b) {
    return SplitMix64::mix(seed ^ SplitMix64::mix(a * 0x100000001b3ULL + b));
}

}  // namespace

LossRecord compute_losses(const SymMatrix& estimate, const SymMatrix& truth,
                          const std::string& label, std::optional<double> chosen_param) {
    if (estimate.dim() != truth.dim()) {
        throw DimensionMismatchError("compute_losses dimensions differ");
    }
    const SymMatrix diff = estimate - truth;
    const EigenDecomp de = sym_eigen(estimate);
    const EigenDecomp dt = sym_eigen(truth);

    LossRecord r;
    r.estimator = label;
    r.one_norm_loss = one_norm(diff);
    r.op_norm_loss = operator_norm(diff);
    r.frob_loss = frobenius_norm(diff);
    r.lambda_max_abs_err = std::abs(de.values.front() - dt.values.front());
    double dot = 0.0;
    const auto ve = de.vector(0);
    const auto vt = dt.vector(0);
    for (int i = 0; i < estimate.dim(); ++i) dot += ve[i] * vt[i];
    r.pc1_abs_cos = std::min(1.0, std::abs(dot));
    r.chosen_param = chosen_param;
    return r;
}

SplitScheme CvSettings::scheme_for(int n, uint64_t seed) const {
    SplitScheme s;
    s.n1 = std::max(2, static_cast<int>(std::floor(fit_fraction * n + 0.5)));
    s.n2 = n - s.n1;
    s.n_splits = n_splits;
    s.seed = seed;
    s.validate(n);
    return s;
}

const SummaryRow* SummaryTable::find(int p, const std::string& estimator,
                                     const std::string& measure) const {
    for (const auto& row : rows) {
        if (row.p == p && row.estimator == estimator && row.measure == measure) return &row;
    }
    return nullptr;
}

namespace {

std::vector<LossRecord> table1_replication_on(const Table1Config& config, int p, int rep,
                                              const SymMatrix& truth) {
    SampleSpec ss;
    ss.n = config.n;
    ss.seed = run_seed(config.seed, static_cast<uint64_t>(p), static_cast<uint64_t>(rep));
    const ObsMatrix x = sample(truth, ss);
    const SymMatrix sigma = sample_covariance(x);

    std::vector<LossRecord> records;
    records.push_back(compute_losses(sigma, truth, "sample"));
    records.push_back(compute_losses(ledoit_wolf(x), truth, "ledoit_wolf"));

    const uint64_t cv_seed = run_seed(ss.seed, 0xc5, 0);
    const SplitScheme scheme = config.cv.scheme_for(config.n, cv_seed);

    {
        const TuningGrid grid = make_grid(p, config.n, p - 1, GridKind::bandwidth);
        const SelectionResult sel = select(x, grid, scheme, Regularizer::band);
        records.push_back(compute_losses(band(sigma, static_cast<int>(sel.chosen)), truth,
                                         "banding", sel.chosen));
    }
    {
        auto [xp, perm] = permute_variables(x, run_seed(ss.seed, 0x9e, 1));
        const SymMatrix truth_p = permute_matrix(truth, perm);
        const TuningGrid grid = make_grid(p, config.n, p - 1, GridKind::bandwidth);
        const SelectionResult sel = select(xp, grid, scheme, Regularizer::band);
        records.push_back(compute_losses(band(sample_covariance(xp), static_cast<int>(sel.chosen)),
                                         truth_p, "banding_perm", sel.chosen));
    }
    {
        const TuningGrid grid =
            make_grid(p, config.n, default_threshold_j_max(sigma, p, config.n),
                      GridKind::threshold);
        const SelectionResult sel = select(x, grid, scheme, Regularizer::threshold);
        records.push_back(
            compute_losses(threshold(sigma, sel.chosen), truth, "thresholding", sel.chosen));
    }
    return records;
}

}  // namespace

std::vector<LossRecord> table1_replication(const Table1Config& config, int p, int rep) {
    return table1_replication_on(config, p, rep,
                                 build_covariance(ModelSpec::ar1(p, config.rho)));
}

SummaryTable run_table1(const Table1Config& config) {
    if (config.replications < 2) throw InputError("run_table1 needs replications >= 2");

    SummaryTable table;
    for (int p : config.p_list) {
        const SymMatrix truth = build_covariance(ModelSpec::ar1(p, config.rho));
        std::vector<std::vector<LossRecord>> per_rep(config.replications);
        parallel_for(config.replications, config.threads, [&](int rep) {
            per_rep[rep] = table1_replication_on(config, p, rep, truth);
        });

        const auto& first = per_rep.front();
        for (size_t e = 0; e < first.size(); ++e) {
            const std::string& name = first[e].estimator;
            auto collect = [&](auto&& get) {
                std::vector<double> v(config.replications);
                for (int r = 0; r < config.replications; ++r) v[r] = get(per_rep[r][e]);
                return v;
            };
            const std::vector<std::pair<std::string, std::vector<double>>> measures = {
                {"one_norm", collect([](const LossRecord& r) { return r.one_norm_loss; })},
                {"operator_norm", collect([](const LossRecord& r) { return r.op_norm_loss; })},
                {"frobenius", collect([](const LossRecord& r) { return r.frob_loss; })},
                {"lambda_max_abs_err",
                 collect([](const LossRecord& r) { return r.lambda_max_abs_err; })},
                {"pc1_abs_cos", collect([](const LossRecord& r) { return r.pc1_abs_cos; })},
            };
            for (const auto& [measure, values] : measures) {
                table.rows.push_back(SummaryRow{p, name, measure, mean_of(values), se_of(values),
                                                config.replications});
            }
            if (first[e].chosen_param.has_value()) {
                const auto values =
                    collect([](const LossRecord& r) { return *r.chosen_param; });
                table.rows.push_back(SummaryRow{p, name, "chosen_param", mean_of(values),
                                                se_of(values), config.replications});
            }
        }
    }
    return table;
}

const ScreeRow* ScreeData::find(const std::string& estimator, int index) const {
    for (const auto& row : rows) {
        if (row.estimator == estimator && row.index == index) return &row;
    }
    return nullptr;
}

ScreeData scree(const ScreeConfig& config) {
    if (config.replications < 1) throw InputError("scree needs replications >= 1");
    const SymMatrix truth = build_covariance(ModelSpec::ar1(config.p, config.rho));
    const EigenDecomp truth_eig = sym_eigen(truth);

    const int n_est = static_cast<int>(config.estimators.size());
    // spectra[e][rep] = eigenvalues (descending)
    std::vector<std::vector<std::vector<double>>> spectra(
        n_est, std::vector<std::vector<double>>(config.replications));

    parallel_for(config.replications, config.threads, [&](int rep) {
        SampleSpec ss;
        ss.n = config.n;
        ss.seed = run_seed(config.seed, static_cast<uint64_t>(config.p),
                           static_cast<uint64_t>(rep));
        const ObsMatrix x = sample(truth, ss);
        const SymMatrix sigma = sample_covariance(x);
        const uint64_t cv_seed = run_seed(ss.seed, 0xc5, 0);

        for (int e = 0; e < n_est; ++e) {
            const std::string& name = config.estimators[e];
            SymMatrix est(1);
            if (name == "sample") {
                est = sigma;
            } else if (name == "ledoit_wolf") {
                est = ledoit_wolf(x);
            } else if (name == "banding") {
                const TuningGrid grid =
                    make_grid(config.p, config.n, config.p - 1, GridKind::bandwidth);
                const SelectionResult sel =
                    select(x, grid, config.cv.scheme_for(config.n, cv_seed), Regularizer::band);
                est = band(sigma, static_cast<int>(sel.chosen));
            } else if (name == "thresholding") {
                const TuningGrid grid =
                    make_grid(config.p, config.n,
                              default_threshold_j_max(sigma, config.p, config.n),
                              GridKind::threshold);
                const SelectionResult sel = select(
                    x, grid, config.cv.scheme_for(config.n, cv_seed), Regularizer::threshold);
                est = threshold(sigma, sel.chosen);
            } else {
                throw InputError("unknown scree estimator: " + name);
            }
            spectra[e][rep] = sym_eigen(est).values;
        }
    });

    ScreeData data;
    for (int e = 0; e < n_est; ++e) {
        for (int i = 0; i < config.p; ++i) {
            std::vector<double> v(config.replications);
            for (int r = 0; r < config.replications; ++r) v[r] = spectra[e][r][i];
            ScreeRow row;
            row.estimator = config.estimators[e];
            row.index = i;
            row.truth = truth_eig.values[i];
            row.mean = mean_of(v);
            row.p2_5 = percentile(v, 0.025);
            row.p97_5 = percentile(v, 0.975);
            data.rows.push_back(row);
        }
    }
    return data;
}

namespace {

SymMatrix rate_truth(const RateConfig& config, int p) {
    if (config.truth_kind == ModelSpec::Kind::ar1) {
        return build_covariance(ModelSpec::ar1(p, config.rho));
    }
    return SymMatrix::identity(p);
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0;
    double sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) throw LadderDegenerateError("ladder has no variation in ln p / n");
    return sxy / sxx;
}

}  // namespace

RateResult rate_study(const RateConfig& config) {
    if (config.ladder.size() < 2) {
        throw LadderDegenerateError("rate ladder needs at least 2 points");
    }
    if (config.replications < 1) throw InputError("rate_study needs replications >= 1");

    // Degeneracy is decided by the x-coordinates alone, before any
    // simulation runs.
    std::vector<double> xs;
    for (const auto& pt : config.ladder) {
        if (pt.p < 2 || pt.n < 2) throw InputError("ladder points need p >= 2, n >= 2");
        xs.push_back(std::log(std::log(static_cast<double>(pt.p)) / pt.n));
    }
    {
        const double x0 = xs.front();
        bool varies = false;
        for (double x : xs) varies = varies || x != x0;
        if (!varies) throw LadderDegenerateError("ladder has no variation in ln p / n");
    }

    // Calibrate M' once, at the first rung, by an oracle fit.
    RateResult result;
    {
        const auto& rung = config.ladder.front();
        const SymMatrix truth = rate_truth(config, rung.p);
        SampleSpec ss;
        ss.n = rung.n;
        ss.seed = run_seed(config.seed, 0xca11, 0);
        const SymMatrix sigma = sample_covariance(sample(truth, ss));
        const TuningGrid grid = make_grid(
            rung.p, rung.n, default_threshold_j_max(sigma, rung.p, rung.n), GridKind::threshold);
        const SelectionResult oracle =
            oracle_select(sigma, truth, grid, Regularizer::threshold);
        result.m_prime = oracle.chosen / std::sqrt(std::log(static_cast<double>(rung.p)) / rung.n);
    }

    const int rungs = static_cast<int>(config.ladder.size());
    std::vector<std::vector<double>> losses(rungs,
                                            std::vector<double>(config.replications, 0.0));
    for (int r = 0; r < rungs; ++r) {
        const auto& rung = config.ladder[r];
        const SymMatrix truth = rate_truth(config, rung.p);
        const double t_n = gaussian_threshold(rung.p, rung.n, result.m_prime);
        parallel_for(config.replications, config.threads, [&, r](int rep) {
            SampleSpec ss;
            ss.n = rung.n;
            ss.seed = run_seed(config.seed, static_cast<uint64_t>(r) + 1,
                               static_cast<uint64_t>(rep));
            const SymMatrix sigma = sample_covariance(sample(truth, ss));
            losses[r][rep] = operator_norm(threshold(sigma, t_n) - truth);
        });
        RatePoint point;
        point.p = rung.p;
        point.n = rung.n;
        point.log_ratio = xs[r];
        point.threshold = t_n;
        point.mean_loss = mean_of(losses[r]);
        result.points.push_back(point);
    }

    std::vector<double> ys;
    for (const auto& pt : result.points) ys.push_back(std::log(pt.mean_loss));
    result.slope = ls_slope(xs, ys);

    // Bootstrap the replications within each rung to get a slope SE.
    std::vector<double> boot_slopes;
    SplitMix64 boot = SplitMix64::substream(config.seed, 0xb007);
    for (int b = 0; b < config.bootstrap; ++b) {
        std::vector<double> by(rungs);
        for (int r = 0; r < rungs; ++r) {
            double s = 0.0;
            for (int i = 0; i < config.replications; ++i) {
                s += losses[r][boot.next_below(static_cast<uint64_t>(config.replications))];
            }
            by[r] = std::log(s / config.replications);
        }
        boot_slopes.push_back(ls_slope(xs, by));
    }
    if (!boot_slopes.empty()) {
        const double m = mean_of(boot_slopes);
        double s = 0.0;
        for (double v : boot_slopes) s += (v - m) * (v - m);
        result.slope_se = std::sqrt(s / std::max<size_t>(1, boot_slopes.size() - 1));
    }
    return result;
}

CvOracleResult cv_vs_oracle(const CvOracleConfig& config) {
    if (config.replications < 1) throw InputError("cv_vs_oracle needs replications >= 1");
    const SymMatrix truth = build_covariance(ModelSpec::ar1(config.p, config.rho));

    CvOracleResult result;
    result.ratios.resize(config.replications);
    parallel_for(config.replications, config.threads, [&](int rep) {
        SampleSpec ss;
        ss.n = config.n;
        ss.seed = run_seed(config.seed, static_cast<uint64_t>(config.p),
                           static_cast<uint64_t>(rep));
        const ObsMatrix x = sample(truth, ss);
        const SymMatrix sigma = sample_covariance(x);
        const TuningGrid grid =
            make_grid(config.p, config.n, default_threshold_j_max(sigma, config.p, config.n),
                      GridKind::threshold);
        const SelectionResult cv = select(
            x, grid, config.cv.scheme_for(config.n, run_seed(ss.seed, 0xc5, 0)),
            Regularizer::threshold);
        const SelectionResult oracle = oracle_select(sigma, truth, grid, Regularizer::threshold);

        const double num = frobenius_distance(threshold(sigma, cv.chosen), truth);
        const double den = frobenius_distance(threshold(sigma, oracle.chosen), truth);
        const double ratio = den > 0.0 ? num / den : (num > 0.0 ? HUGE_VAL : 1.0);
        if (!(ratio >= 1.0 - 1e-12)) {
            throw NumericError("cv/oracle ratio fell below 1; oracle is not the grid minimum");
        }
        result.ratios[rep] = ratio;
    });

    result.mean_ratio = mean_of(result.ratios);
    result.max_ratio = *std::max_element(result.ratios.begin(), result.ratios.end());
    std::vector<double> sorted = result.ratios;
    std::sort(sorted.begin(), sorted.end());
    result.median_ratio = percentile(sorted, 0.5);
    return result;
}

namespace {

// Eq.-27-style risk with pairwise-complete covariances on each half;
// used by the EOF pipeline when entries are missing.
std::vector<RiskPoint> pairwise_cv_risk(const ObsMatrix& x, const TuningGrid& grid,
                                        const SplitScheme& scheme) {
    const int n = x.rows();
    scheme.validate(n);
    std::vector<double> total(grid.points.size(), 0.0);
    std::vector<int> order(n);
    for (int v = 0; v < scheme.n_splits; ++v) {
        std::iota(order.begin(), order.end(), 0);
        SplitMix64 rng = SplitMix64::substream(scheme.seed, static_cast<uint64_t>(v));
        shuffle(order.data(), n, rng);
        const SymMatrix sigma1 = pairwise_covariance(x.select_rows(order, 0, scheme.n1));
        const SymMatrix sigma2 = pairwise_covariance(x.select_rows(order, scheme.n1, scheme.n2));
        for (size_t g = 0; g < grid.points.size(); ++g) {
            const SymMatrix t = threshold(sigma1, grid.points[g]);
            total[g] += frobenius_distance(t, sigma2) * frobenius_distance(t, sigma2);
        }
    }
    std::vector<RiskPoint> curve(grid.points.size());
    for (size_t g = 0; g < grid.points.size(); ++g) {
        curve[g] = RiskPoint{grid.points[g], total[g] / scheme.n_splits};
    }
    return curve;
}

}  // namespace

double dominant_block_mass(const std::vector<double>& component, const std::vector<int>& block) {
    double m0 = 0.0;
    double m1 = 0.0;
    double total = 0.0;
    for (size_t i = 0; i < component.size(); ++i) {
        const double sq = component[i] * component[i];
        total += sq;
        (block[i] == 0 ? m0 : m1) += sq;
    }
    return total > 0.0 ? std::max(m0, m1) / total : 0.0;
}

EofResult eof_pipeline(const EofConfig& config) {
    const SpatialField field = synthetic_spatial_field(config.field);
    const int p = field.truth.dim();
    const int n = field.observations.rows();
    const SymMatrix sigma = pairwise_covariance(field.observations);

    double s = config.fixed_s;
    if (config.mode == ThresholdMode::cv) {
        const TuningGrid grid =
            make_grid(p, n, default_threshold_j_max(sigma, p, n), GridKind::threshold);
        const SplitScheme scheme =
            config.cv.scheme_for(n, run_seed(config.field.seed, 0xc5, 0));
        if (field.observations.has_missing()) {
            const auto curve = pairwise_cv_risk(field.observations, grid, scheme);
            s = curve[argmin_risk(curve)].point;
        } else {
            s = select(field.observations, grid, scheme, Regularizer::threshold).chosen;
        }
    } else if (config.mode == ThresholdMode::oracle) {
        const TuningGrid grid =
            make_grid(p, n, default_threshold_j_max(sigma, p, n), GridKind::threshold);
        s = oracle_select(sigma, field.truth, grid, Regularizer::threshold).chosen;
    }

    const SymMatrix regularized = threshold(sigma, s);
    const EigenDecomp eig = sym_eigen(regularized);

    EofResult result;
    result.grid_rows = field.grid_rows;
    result.grid_cols = field.grid_cols;
    result.block = field.block;
    result.chosen_s = s;
    result.eigenvalues = eig.values;

    double abs_mass = 0.0;
    double neg_mass = 0.0;
    for (double v : eig.values) {
        abs_mass += std::abs(v);
        if (v < 0.0) neg_mass += -v;
    }
    result.negative_mass_fraction = abs_mass > 0.0 ? neg_mass / abs_mass : 0.0;

    const int k = std::min(config.top_k, p);
    for (int c = 0; c < k; ++c) {
        const auto v = eig.vector(c);
        result.components.emplace_back(v.begin(), v.end());
        result.variance_fractions.push_back(abs_mass > 0.0 ? eig.values[c] / abs_mass : 0.0);
    }
    return result;
}

}  // namespace covreg
