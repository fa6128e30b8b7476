#include "ummimo/linalg/real_matrix.hpp"

namespace ummimo::linalg {

RealMatrix matmul_nn(const RealMatrix &a, const RealMatrix &b) {
    if (a.cols() != b.rows())
        throw ValidationError("matmul_nn: inner dimensions disagree");
    RealMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double *arow = a.row(i);
        double *crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0)
                continue;
            const double *brow = b.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                crow[j] += aik * brow[j];
        }
    }
    return c;
}

RealMatrix matmul_nt(const RealMatrix &a, const RealMatrix &b) {
    if (a.cols() != b.cols())
        throw ValidationError("matmul_nt: inner dimensions disagree");
    RealMatrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double *arow = a.row(i);
        double *crow = c.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            const double *brow = b.row(j);
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc += arow[k] * brow[k];
            crow[j] = acc;
        }
    }
    return c;
}

RealMatrix matmul_tn(const RealMatrix &a, const RealMatrix &b) {
    if (a.rows() != b.rows())
        throw ValidationError("matmul_tn: inner dimensions disagree");
    RealMatrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double *arow = a.row(i);
        const double *brow = b.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = arow[k];
            if (aik == 0.0)
                continue;
            double *crow = c.row(k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                crow[j] += aik * brow[j];
        }
    }
    return c;
}

RealMatrix hcat(const RealMatrix &a, const RealMatrix &b) {
    if (a.rows() != b.rows())
        throw ValidationError("hcat: row counts disagree");
    RealMatrix c(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double *crow = c.row(i);
        const double *arow = a.row(i);
        const double *brow = b.row(i);
        for (std::size_t j = 0; j < a.cols(); ++j)
            crow[j] = arow[j];
        for (std::size_t j = 0; j < b.cols(); ++j)
            crow[a.cols() + j] = brow[j];
    }
    return c;
}

void hsplit(const RealMatrix &ab, std::size_t a_cols, RealMatrix &a, RealMatrix &b) {
    if (a_cols > ab.cols())
        throw ValidationError("hsplit: split point out of range");
    a = RealMatrix(ab.rows(), a_cols);
    b = RealMatrix(ab.rows(), ab.cols() - a_cols);
    for (std::size_t i = 0; i < ab.rows(); ++i) {
        const double *src = ab.row(i);
        for (std::size_t j = 0; j < a_cols; ++j)
            a(i, j) = src[j];
        for (std::size_t j = a_cols; j < ab.cols(); ++j)
            b(i, j - a_cols) = src[j];
    }
}

double pairwise_sum(const double *x, std::size_t n) {
    if (n == 0)
        return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_sum(const std::vector<double> &x) { return pairwise_sum(x.data(), x.size()); }

} // namespace ummimo::linalg
