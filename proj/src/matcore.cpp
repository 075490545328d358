#include "covreg/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace covreg {

namespace {

void require_finite(double v) {
    if (!std::isfinite(v)) {
        throw InputError("SymMatrix entries must be finite");
    }
}

}  // namespace

SymMatrix::SymMatrix(int p) : p_(p), a_(static_cast<size_t>(p) * p, 0.0) {
    if (p < 1) {
        throw InputError("SymMatrix dimension must be positive");
    }
}

SymMatrix SymMatrix::from_dense(int p, std::span<const double> data) {
    if (static_cast<size_t>(p) * p != data.size()) {
        throw DimensionMismatchError("dense buffer size does not match p*p");
    }
    SymMatrix m(p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const double v = data[static_cast<size_t>(i) * p + j];
            require_finite(v);
            if (v != data[static_cast<size_t>(j) * p + i]) {
                throw InputError("matrix is not symmetric");
            }
            m.a_[static_cast<size_t>(i) * p + j] = v;
        }
    }
    return m;
}

SymMatrix SymMatrix::from_dense_symmetrize(int p, std::span<const double> data, double tol) {
    if (static_cast<size_t>(p) * p != data.size()) {
        throw DimensionMismatchError("dense buffer size does not match p*p");
    }
    double scale = 0.0;
    for (double v : data) {
        require_finite(v);
        scale = std::max(scale, std::abs(v));
    }
    SymMatrix m(p);
    for (int i = 0; i < p; ++i) {
        for (int j = i; j < p; ++j) {
            const double vij = data[static_cast<size_t>(i) * p + j];
            const double vji = data[static_cast<size_t>(j) * p + i];
            if (std::abs(vij - vji) > tol * std::max(1.0, scale)) {
                throw InputError("matrix is not symmetric within tolerance");
            }
            m.set(i, j, 0.5 * (vij + vji));
        }
    }
    return m;
}

SymMatrix SymMatrix::identity(int p) {
    SymMatrix m(p);
    for (int i = 0; i < p; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::diagonal(std::span<const double> values) {
    SymMatrix m(static_cast<int>(values.size()));
    for (int i = 0; i < m.dim(); ++i) m.set(i, i, values[i]);
    return m;
}

void SymMatrix::set(int i, int j, double v) {
    require_finite(v);
    a_[static_cast<size_t>(i) * p_ + j] = v;
    a_[static_cast<size_t>(j) * p_ + i] = v;
}

double SymMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < p_; ++i) t += (*this)(i, i);
    return t;
}

double SymMatrix::max_abs_entry() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    if (a.p_ != b.p_) throw DimensionMismatchError("SymMatrix dimensions differ");
    SymMatrix r(a.p_);
    for (size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
    return r;
}

SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    if (a.p_ != b.p_) throw DimensionMismatchError("SymMatrix dimensions differ");
    SymMatrix r(a.p_);
    for (size_t k = 0; k < a.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
    return r;
}

double one_norm(const SymMatrix& m) {
    const int p = m.dim();
    double best = 0.0;
    for (int j = 0; j < p; ++j) {
        double s = 0.0;
        for (int i = 0; i < p; ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double frobenius_norm(const SymMatrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return std::sqrt(s);
}

namespace {

double off_diagonal_frobenius(const std::vector<double>& a, int p) {
    double s = 0.0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            const double v = a[static_cast<size_t>(i) * p + j];
            s += 2.0 * v * v;
        }
    }
    return std::sqrt(s);
}

}  // namespace

EigenDecomp sym_eigen(const SymMatrix& m) {
    const int p = m.dim();
    std::vector<double> a(m.data().begin(), m.data().end());
    std::vector<double> v(static_cast<size_t>(p) * p, 0.0);  // row-major accumulator of rotations
    for (int i = 0; i < p; ++i) v[static_cast<size_t>(i) * p + i] = 1.0;

    const double norm = frobenius_norm(m);
    const double target = 1e-12 * std::max(norm, 1e-300);
    // Rotations on entries below target/p cannot lift the off-diagonal
    // mass above the convergence target, so they are skipped.
    const double skip = target / p;

    constexpr int kMaxSweeps = 100;
    bool converged = (p == 1) || off_diagonal_frobenius(a, p) <= target;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        for (int i = 0; i < p - 1; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double aij = a[static_cast<size_t>(i) * p + j];
                if (std::abs(aij) <= skip) continue;
                const double aii = a[static_cast<size_t>(i) * p + i];
                const double ajj = a[static_cast<size_t>(j) * p + j];
                const double theta = (ajj - aii) / (2.0 * aij);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (int k = 0; k < p; ++k) {
                    const size_t ik = static_cast<size_t>(i) * p + k;
                    const size_t jk = static_cast<size_t>(j) * p + k;
                    const double aik = a[ik];
                    const double ajk = a[jk];
                    a[ik] = c * aik - s * ajk;
                    a[jk] = s * aik + c * ajk;
                }
                for (int k = 0; k < p; ++k) {
                    const size_t ki = static_cast<size_t>(k) * p + i;
                    const size_t kj = static_cast<size_t>(k) * p + j;
                    const double aki = a[ki];
                    const double akj = a[kj];
                    a[ki] = c * aki - s * akj;
                    a[kj] = s * aki + c * akj;
                }
                for (int k = 0; k < p; ++k) {
                    const size_t ki = static_cast<size_t>(k) * p + i;
                    const size_t kj = static_cast<size_t>(k) * p + j;
                    const double vki = v[ki];
                    const double vkj = v[kj];
                    v[ki] = c * vki - s * vkj;
                    v[kj] = s * vki + c * vkj;
                }
            }
        }
        converged = off_diagonal_frobenius(a, p) <= target;
    }
    if (!converged) {
        throw NotConvergedError("Jacobi eigensolver did not converge in 100 sweeps");
    }

    std::vector<int> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return a[static_cast<size_t>(x) * p + x] > a[static_cast<size_t>(y) * p + y];
    });

    EigenDecomp d;
    d.p = p;
    d.values.resize(p);
    d.vectors.resize(static_cast<size_t>(p) * p);
    for (int j = 0; j < p; ++j) {
        const int src = order[j];
        d.values[j] = a[static_cast<size_t>(src) * p + src];
        int arg = 0;
        double best = -1.0;
        for (int i = 0; i < p; ++i) {
            const double mag = std::abs(v[static_cast<size_t>(i) * p + src]);
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        const double flip = v[static_cast<size_t>(arg) * p + src] < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < p; ++i) {
            d.vectors[static_cast<size_t>(j) * p + i] = flip * v[static_cast<size_t>(i) * p + src];
        }
    }
    return d;
}

double operator_norm(const SymMatrix& m) {
    const EigenDecomp d = sym_eigen(m);
    return std::max(std::abs(d.values.front()), std::abs(d.values.back()));
}

double min_eigenvalue(const SymMatrix& m) { return sym_eigen(m).values.back(); }

bool is_positive_definite(const SymMatrix& m) { return min_eigenvalue(m) > 0.0; }

CholeskyFactor cholesky(const SymMatrix& m) {
    const int p = m.dim();
    CholeskyFactor f;
    f.p = p;
    f.l.assign(static_cast<size_t>(p) * p, 0.0);
    for (int j = 0; j < p; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= f(j, k) * f(j, k);
        if (d <= 0.0) {
            throw NotPositiveDefiniteError("Cholesky pivot <= 0 at index " + std::to_string(j));
        }
        const double ljj = std::sqrt(d);
        f.l[static_cast<size_t>(j) * p + j] = ljj;
        for (int i = j + 1; i < p; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= f(i, k) * f(j, k);
            f.l[static_cast<size_t>(i) * p + j] = s / ljj;
        }
    }
    return f;
}

void CholeskyFactor::multiply(std::span<const double> x, std::span<double> y) const {
    for (int i = p - 1; i >= 0; --i) {
        double s = 0.0;
        for (int j = 0; j <= i; ++j) s += (*this)(i, j) * x[j];
        y[i] = s;
    }
}

void CholeskyFactor::forward_solve(std::span<double> b) const {
    for (int i = 0; i < p; ++i) {
        double s = b[i];
        for (int j = 0; j < i; ++j) s -= (*this)(i, j) * b[j];
        b[i] = s / (*this)(i, i);
    }
}

void CholeskyFactor::backward_solve(std::span<double> b) const {
    for (int i = p - 1; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < p; ++j) s -= (*this)(j, i) * b[j];
        b[i] = s / (*this)(i, i);
    }
}

}  // namespace covreg
