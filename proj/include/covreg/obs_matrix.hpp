#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "covreg/errors.hpp"

namespace covreg {

/// n x p observation matrix; rows are i.i.d. samples. Entries may be
/// missing, encoded internally as NaN. Present entries must be finite.
class ObsMatrix {
public:
    ObsMatrix(int n, int p);

    /// Row-major buffer; NaN marks a missing entry, infinities are rejected.
    static ObsMatrix from_dense(int n, int p, std::span<const double> data);

    int rows() const { return n_; }
    int cols() const { return p_; }

    double operator()(int k, int j) const { return x_[static_cast<size_t>(k) * p_ + j]; }

    bool missing(int k, int j) const { return std::isnan((*this)(k, j)); }

    bool has_missing() const;

    void set(int k, int j, double v);
    void set_missing(int k, int j);

    std::span<const double> data() const { return x_; }

    /// New matrix with rows in the given order (used by CV splits).
    ObsMatrix select_rows(std::span<const int> order, int begin, int count) const;

    /// New matrix with column j taken from column perm[j] of this one.
    ObsMatrix reorder_columns(std::span<const int> perm) const;

private:
    int n_;
    int p_;
    std::vector<double> x_;
};

}  // namespace covreg
