#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "covreg/matcore.hpp"
#include "covreg/obs_matrix.hpp"

namespace covreg {

/// Ground-truth covariance models. ar1 is the Toeplitz matrix
/// rho^{|i-j|}; polynomial_decay has unit diagonal and off-diagonal
/// entries eps * |i-j|^{-(alpha+1)}; diagonal is diag(values).
struct ModelSpec {
    enum class Kind { ar1, polynomial_decay, diagonal };

    Kind kind = Kind::ar1;
    int p = 0;
    double rho = 0.0;                // ar1
    double alpha = 1.0;              // polynomial_decay
    double eps = 0.0;                // polynomial_decay
    std::vector<double> values;      // diagonal

    static ModelSpec ar1(int p, double rho);
    static ModelSpec polynomial_decay(int p, double alpha, double eps);
    static ModelSpec diagonal(std::vector<double> values);
};

enum class NoiseKind { gaussian, scaled_student_t };

/// Sampling recipe: n rows, a seed feeding per-row substreams, and the
/// noise family. scaled_student_t draws t(dof) scaled to unit variance
/// (dof > 2 so the covariance exists).
struct SampleSpec {
    int n = 0;
    uint64_t seed = 0;
    NoiseKind noise = NoiseKind::gaussian;
    int dof = 5;
};

/// Column permutation: output column j holds input column perm[j].
struct Permutation {
    std::vector<int> perm;

    std::vector<int> inverse() const;
};

/// Builds the model covariance and verifies it is positive definite.
SymMatrix build_covariance(const ModelSpec& spec);

/// Rows X_k = L z_k with L the Cholesky factor of sigma and z_k i.i.d.
/// unit-variance noise. Row k draws from substream (seed, k), so samples
/// are identical however rows are scheduled.
ObsMatrix sample(const SymMatrix& sigma, const SampleSpec& spec);

/// Randomly relabels variables; the permutation is returned so the
/// caller can map estimates back (or permute the truth to match).
std::pair<ObsMatrix, Permutation> permute_variables(const ObsMatrix& x, uint64_t seed);

/// P M P^T for the permutation P defined by perm (entry (i,j) of the
/// result is M(perm[i], perm[j])), matching permute_variables output.
SymMatrix permute_matrix(const SymMatrix& m, const Permutation& perm);

/// Synthetic stand-in for station temperature data: two spatial clusters
/// on a grid_rows x grid_cols lattice with exponential within-block
/// correlation exp(-d / length_scale) and exactly zero correlation
/// across blocks. The first block takes ceil(2/3) of the columns (the
/// blocks must differ in size or the leading eigenvalues tie and the
/// first component mixes the blocks).
struct SpatialFieldSpec {
    int grid_rows = 6;
    int grid_cols = 12;
    double length_scale = 2.0;
    int n_years = 200;
    double missing_rate = 0.1;
    uint64_t seed = 0;
};

struct SpatialField {
    ObsMatrix observations;
    SymMatrix truth;
    std::vector<int> block;  // 0 or 1 per grid point (row-major)
    int grid_rows = 0;
    int grid_cols = 0;
};

SpatialField synthetic_spatial_field(const SpatialFieldSpec& spec);

}  // namespace covreg
