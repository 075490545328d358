#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "covreg/errors.hpp"

namespace covreg {

/// Dense symmetric p x p matrix of finite reals. Symmetry is a hard
/// invariant: every mutation writes both (i,j) and (j,i), so stored
/// entries are bit-identical across the diagonal.
class SymMatrix {
public:
    explicit SymMatrix(int p);

    /// Builds from a row-major dense buffer. Requires bit-exact symmetry
    /// and finite entries; throws InputError otherwise.
    static SymMatrix from_dense(int p, std::span<const double> data);

    /// Builds from a row-major buffer that is symmetric only up to `tol`
    /// (relative to the largest absolute entry); the result is the exact
    /// average of the two triangles. Used by CSV and numpy ingestion.
    static SymMatrix from_dense_symmetrize(int p, std::span<const double> data,
                                           double tol = 1e-9);

    static SymMatrix identity(int p);
    static SymMatrix diagonal(std::span<const double> values);

    int dim() const { return p_; }

    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * p_ + j]; }

    /// Sets both (i,j) and (j,i). Throws InputError on non-finite values.
    void set(int i, int j, double v);

    std::span<const double> data() const { return a_; }

    double trace() const;
    double max_abs_entry() const;

    friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b);
    friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b);

    bool operator==(const SymMatrix&) const = default;

private:
    int p_;
    std::vector<double> a_;  // row-major, exactly symmetric
};

/// Eigendecomposition of a SymMatrix: values sorted descending, vectors
/// orthonormal, column j paired with values[j]. Sign convention: the
/// largest-magnitude component of each vector is positive (ties broken
/// toward the lowest index), so decompositions are deterministic.
struct EigenDecomp {
    int p = 0;
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // column-major: vectors[j*p + i]

    std::span<const double> vector(int j) const {
        return std::span<const double>(vectors).subspan(static_cast<size_t>(j) * p, p);
    }
};

/// Lower-triangular Cholesky factor L with L L^T = M.
struct CholeskyFactor {
    int p = 0;
    std::vector<double> l;  // row-major, upper triangle zero

    double operator()(int i, int j) const { return l[static_cast<size_t>(i) * p + j]; }

    /// y = L x (used to color i.i.d. noise into correlated samples).
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// Solves L x = b in place.
    void forward_solve(std::span<double> b) const;
    /// Solves L^T x = b in place.
    void backward_solve(std::span<double> b) const;
};

/// Maximum absolute column sum (the matrix (1,1)-norm). For symmetric
/// input this coincides with the (inf,inf)-norm and upper-bounds the
/// operator norm.
double one_norm(const SymMatrix& m);

/// sqrt of the sum of squared entries.
double frobenius_norm(const SymMatrix& m);

/// Cyclic Jacobi eigensolver. Converges when the off-diagonal Frobenius
/// mass drops below 1e-12 * ||M||_F; throws NotConvergedError after 100
/// sweeps (does not happen for well-scaled symmetric input).
EigenDecomp sym_eigen(const SymMatrix& m);

/// Largest absolute eigenvalue (matrix 2-norm for symmetric input).
double operator_norm(const SymMatrix& m);

double min_eigenvalue(const SymMatrix& m);

bool is_positive_definite(const SymMatrix& m);

/// Throws NotPositiveDefiniteError if any pivot is <= 0.
CholeskyFactor cholesky(const SymMatrix& m);

}  // namespace covreg
