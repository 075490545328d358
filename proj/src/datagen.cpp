#include "covreg/datagen.hpp"

#include <cmath>
#include <numeric>

#include "covreg/rng.hpp"

namespace covreg {

ModelSpec ModelSpec::ar1(int p, double rho) {
    ModelSpec s;
    s.kind = Kind::ar1;
    s.p = p;
    s.rho = rho;
    return s;
}

ModelSpec ModelSpec::polynomial_decay(int p, double alpha, double eps) {
    ModelSpec s;
    s.kind = Kind::polynomial_decay;
    s.p = p;
    s.alpha = alpha;
    s.eps = eps;
    return s;
}

ModelSpec ModelSpec::diagonal(std::vector<double> values) {
    ModelSpec s;
    s.kind = Kind::diagonal;
    s.p = static_cast<int>(values.size());
    s.values = std::move(values);
    return s;
}

std::vector<int> Permutation::inverse() const {
    std::vector<int> inv(perm.size());
    for (size_t j = 0; j < perm.size(); ++j) inv[perm[j]] = static_cast<int>(j);
    return inv;
}

SymMatrix build_covariance(const ModelSpec& spec) {
    if (spec.p < 1) throw InputError("model dimension must be positive");
    SymMatrix sigma(spec.p);
    switch (spec.kind) {
        case ModelSpec::Kind::ar1: {
            if (!(std::abs(spec.rho) < 1.0)) throw InputError("ar1 needs |rho| < 1");
            for (int i = 0; i < spec.p; ++i) {
                for (int j = i; j < spec.p; ++j) {
                    sigma.set(i, j, std::pow(spec.rho, j - i));
                }
            }
            break;
        }
        case ModelSpec::Kind::polynomial_decay: {
            if (!(spec.alpha > 0.0) || !(spec.eps >= 0.0)) {
                throw InputError("polynomial_decay needs alpha > 0 and eps >= 0");
            }
            for (int i = 0; i < spec.p; ++i) {
                sigma.set(i, i, 1.0);
                for (int j = i + 1; j < spec.p; ++j) {
                    sigma.set(i, j, spec.eps * std::pow(static_cast<double>(j - i),
                                                        -(spec.alpha + 1.0)));
                }
            }
            break;
        }
        case ModelSpec::Kind::diagonal: {
            if (static_cast<int>(spec.values.size()) != spec.p) {
                throw InputError("diagonal model needs p values");
            }
            for (int i = 0; i < spec.p; ++i) sigma.set(i, i, spec.values[i]);
            break;
        }
    }
    if (!(min_eigenvalue(sigma) > 0.0)) {
        throw NotPositiveDefiniteError("model covariance is not positive definite");
    }
    return sigma;
}

namespace {

double draw_noise(SplitMix64& rng, const SampleSpec& spec) {
    if (spec.noise == NoiseKind::gaussian) return rng.next_gaussian();
    // t(dof) = Z / sqrt(V/dof), V chi-square(dof); scaled to unit variance.
    const double z = rng.next_gaussian();
    double v = 0.0;
    for (int i = 0; i < spec.dof; ++i) {
        const double g = rng.next_gaussian();
        v += g * g;
    }
    const double t = z / std::sqrt(v / spec.dof);
    return t * std::sqrt((spec.dof - 2.0) / spec.dof);
}

}  // namespace

ObsMatrix sample(const SymMatrix& sigma, const SampleSpec& spec) {
    if (spec.n < 2) throw TooFewSamplesError("sample needs n >= 2");
    if (spec.noise == NoiseKind::scaled_student_t && spec.dof <= 2) {
        throw InputError("scaled_student_t needs dof > 2");
    }
    const int p = sigma.dim();
    const CholeskyFactor l = cholesky(sigma);

    ObsMatrix x(spec.n, p);
    std::vector<double> z(p);
    std::vector<double> row(p);
    for (int k = 0; k < spec.n; ++k) {
        SplitMix64 rng = SplitMix64::substream(spec.seed, static_cast<uint64_t>(k));
        for (int j = 0; j < p; ++j) z[j] = draw_noise(rng, spec);
        l.multiply(z, row);
        for (int j = 0; j < p; ++j) x.set(k, j, row[j]);
    }
    return x;
}

std::pair<ObsMatrix, Permutation> permute_variables(const ObsMatrix& x, uint64_t seed) {
    Permutation perm;
    perm.perm.resize(x.cols());
    std::iota(perm.perm.begin(), perm.perm.end(), 0);
    SplitMix64 rng(SplitMix64::mix(seed));
    shuffle(perm.perm.data(), x.cols(), rng);
    return {x.reorder_columns(perm.perm), perm};
}

SymMatrix permute_matrix(const SymMatrix& m, const Permutation& perm) {
    const int p = m.dim();
    if (static_cast<int>(perm.perm.size()) != p) {
        throw DimensionMismatchError("permutation length does not match matrix dimension");
    }
    SymMatrix out(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            out.set(i, j, m(perm.perm[i], perm.perm[j]));
        }
    }
    return out;
}

SpatialField synthetic_spatial_field(const SpatialFieldSpec& spec) {
    if (spec.grid_rows < 1 || spec.grid_cols < 2) {
        throw InputError("spatial field needs at least a 1x2 grid");
    }
    if (!(spec.missing_rate >= 0.0 && spec.missing_rate < 0.5)) {
        throw InputError("missing_rate must lie in [0, 0.5)");
    }
    if (!(spec.length_scale > 0.0)) throw InputError("length_scale must be positive");

    const int p = spec.grid_rows * spec.grid_cols;
    const int split_col = (2 * spec.grid_cols + 2) / 3;  // ceil(2c/3)

    SpatialField field{ObsMatrix(1, 1), SymMatrix(p), {}, spec.grid_rows, spec.grid_cols};
    field.block.resize(p);
    for (int i = 0; i < p; ++i) {
        field.block[i] = (i % spec.grid_cols) < split_col ? 0 : 1;
    }

    for (int i = 0; i < p; ++i) {
        const double ri = i / spec.grid_cols;
        const double ci = i % spec.grid_cols;
        for (int j = i; j < p; ++j) {
            if (field.block[i] != field.block[j]) continue;
            const double rj = j / spec.grid_cols;
            const double cj = j % spec.grid_cols;
            const double d = std::hypot(ri - rj, ci - cj);
            field.truth.set(i, j, std::exp(-d / spec.length_scale));
        }
    }

    SampleSpec ss;
    ss.n = spec.n_years;
    ss.seed = spec.seed;
    field.observations = sample(field.truth, ss);

    // Mask entries independently; stream is separate from the sampler's
    // row streams so changing the missing rate never changes the values.
    SplitMix64 mask = SplitMix64::substream(spec.seed, 0x6d61736bULL);
    for (int k = 0; k < spec.n_years; ++k) {
        for (int j = 0; j < p; ++j) {
            if (mask.next_uniform() < spec.missing_rate) field.observations.set_missing(k, j);
        }
    }
    return field;
}

}  // namespace covreg
