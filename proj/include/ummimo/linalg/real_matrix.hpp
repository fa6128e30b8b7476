#ifndef UMMIMO_LINALG_REAL_MATRIX_HPP
#define UMMIMO_LINALG_REAL_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "ummimo/errors.hpp"

namespace ummimo::linalg {

// Dense row-major real matrix. Rows are batch samples in the network code.
class RealMatrix {
  public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double *row(std::size_t r) { return &data_[r * cols_]; }
    const double *row(std::size_t r) const { return &data_[r * cols_]; }

    std::vector<double> &data() { return data_; }
    const std::vector<double> &data() const { return data_; }

    bool is_finite() const {
        for (double v : data_)
            if (!std::isfinite(v))
                return false;
        return true;
    }

    RealMatrix &operator+=(const RealMatrix &o) {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ValidationError("RealMatrix +=: shape mismatch");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }

    RealMatrix &operator*=(double s) {
        for (double &v : data_)
            v *= s;
        return *this;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// C = A * B
RealMatrix matmul_nn(const RealMatrix &a, const RealMatrix &b);
// C = A * B^T  (contiguous dot products; the dense-layer forward shape)
RealMatrix matmul_nt(const RealMatrix &a, const RealMatrix &b);
// C = A^T * B  (weight-gradient shape)
RealMatrix matmul_tn(const RealMatrix &a, const RealMatrix &b);

// concatenate along columns: [a | b]
RealMatrix hcat(const RealMatrix &a, const RealMatrix &b);
void hsplit(const RealMatrix &ab, std::size_t a_cols, RealMatrix &a, RealMatrix &b);

// order-fixed pairwise (tree) summation; worker-count invariant by design
double pairwise_sum(const double *x, std::size_t n);
double pairwise_sum(const std::vector<double> &x);

} // namespace ummimo::linalg

#endif
