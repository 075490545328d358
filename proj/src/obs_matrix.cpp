#include "covreg/obs_matrix.hpp"

namespace covreg {

ObsMatrix::ObsMatrix(int n, int p) : n_(n), p_(p), x_(static_cast<size_t>(n) * p, 0.0) {
    if (n < 1 || p < 1) {
        throw InputError("ObsMatrix dimensions must be positive");
    }
}

ObsMatrix ObsMatrix::from_dense(int n, int p, std::span<const double> data) {
    if (static_cast<size_t>(n) * p != data.size()) {
        throw DimensionMismatchError("dense buffer size does not match n*p");
    }
    ObsMatrix m(n, p);
    for (size_t k = 0; k < data.size(); ++k) {
        if (std::isinf(data[k])) {
            throw InputError("ObsMatrix entries must be finite or missing");
        }
        m.x_[k] = data[k];
    }
    return m;
}

bool ObsMatrix::has_missing() const {
    for (double v : x_) {
        if (std::isnan(v)) return true;
    }
    return false;
}

void ObsMatrix::set(int k, int j, double v) {
    if (!std::isfinite(v)) {
        throw InputError("ObsMatrix entries must be finite; use set_missing");
    }
    x_[static_cast<size_t>(k) * p_ + j] = v;
}

void ObsMatrix::set_missing(int k, int j) {
    x_[static_cast<size_t>(k) * p_ + j] = std::nan("");
}

ObsMatrix ObsMatrix::select_rows(std::span<const int> order, int begin, int count) const {
    ObsMatrix out(count, p_);
    for (int r = 0; r < count; ++r) {
        const int src = order[begin + r];
        for (int j = 0; j < p_; ++j) {
            out.x_[static_cast<size_t>(r) * p_ + j] = x_[static_cast<size_t>(src) * p_ + j];
        }
    }
    return out;
}

ObsMatrix ObsMatrix::reorder_columns(std::span<const int> perm) const {
    ObsMatrix out(n_, p_);
    for (int k = 0; k < n_; ++k) {
        for (int j = 0; j < p_; ++j) {
            out.x_[static_cast<size_t>(k) * p_ + j] = x_[static_cast<size_t>(k) * p_ + perm[j]];
        }
    }
    return out;
}

}  // namespace covreg
