#ifndef UMMIMO_LINALG_COMPLEX_MATRIX_HPP
#define UMMIMO_LINALG_COMPLEX_MATRIX_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "ummimo/errors.hpp"

namespace ummimo::linalg {

using cx = std::complex<double>;

// Dense row-major complex matrix. The lingua franca of every module:
// channels, precoders, combiners all live here.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols, cx fill = cx{0.0, 0.0})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = cx{1.0, 0.0};
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    cx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<cx> &data() { return data_; }
    const std::vector<cx> &data() const { return data_; }

    bool is_finite() const {
        for (const cx &z : data_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                return false;
        return true;
    }

    ComplexMatrix hermitian() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    ComplexMatrix columns(std::size_t first, std::size_t count) const {
        if (first + count > cols_)
            throw ValidationError("columns: slice out of range");
        ComplexMatrix out(rows_, count);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < count; ++c)
                out(r, c) = (*this)(r, first + c);
        return out;
    }

    ComplexMatrix &operator*=(cx s) {
        for (cx &z : data_)
            z *= s;
        return *this;
    }

    ComplexMatrix &operator+=(const ComplexMatrix &o) {
        check_same_shape(o, "operator+=");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] += o.data_[i];
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &o) {
        check_same_shape(o, "operator-=");
        for (std::size_t i = 0; i < data_.size(); ++i)
            data_[i] -= o.data_[i];
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cx s) { return a *= s; }
    friend ComplexMatrix operator*(cx s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
        if (a.cols_ != b.rows_)
            throw ValidationError("matmul: inner dimensions disagree");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cx aik = a(i, k);
                if (aik == cx{0.0, 0.0})
                    continue;
                const cx *brow = &b.data_[k * b.cols_];
                cx *crow = &c.data_[i * b.cols_];
                for (std::size_t j = 0; j < b.cols_; ++j)
                    crow[j] += aik * brow[j];
            }
        }
        return c;
    }

  private:
    void check_same_shape(const ComplexMatrix &o, const char *op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw ValidationError(std::string(op) + ": shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cx> data_;
};

inline double frobenius_norm(const ComplexMatrix &a) {
    double s = 0.0;
    for (const cx &z : a.data())
        s += std::norm(z);
    return std::sqrt(s);
}

// Entrywise z/|z|; a zero entry maps to 1+0j so the result is always a valid
// unit-modulus matrix (the alternating-minimization inner step relies on it).
inline ComplexMatrix phase_extract(const ComplexMatrix &a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const cx z = a.data()[i];
        const double m = std::abs(z);
        out.data()[i] = (m > 0.0) ? z / m : cx{1.0, 0.0};
    }
    return out;
}

} // namespace ummimo::linalg

#endif
