#include "ummimo/linalg/pca.hpp"

#include "ummimo/linalg/svd.hpp"

namespace ummimo::linalg {

PcaResult pca_project(const RealMatrix &x, std::size_t k) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n < 2)
        throw ValidationError("pca_project: need at least 2 samples");
    if (k < 1 || k > std::min(n, d))
        throw ValidationError("pca_project: k out of range");
    if (!x.is_finite())
        throw ValidationError("pca_project: input has non-finite entries");

    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            mean[j] += x(i, j);
    for (double &m : mean)
        m /= static_cast<double>(n);

    ComplexMatrix centered(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            centered(i, j) = cx{x(i, j) - mean[j], 0.0};

    // covariance eigenvectors are the right singular vectors of the centered
    // data; eigenvalues are s^2/(n-1). The Jacobi kernel is trig-free, so a
    // real input never picks up an imaginary part.
    SvdResult r = svd(centered);

    PcaResult out;
    out.projections = RealMatrix(n, k);
    out.explained_variance.resize(k);
    out.components = RealMatrix(d, k);
    for (std::size_t j = 0; j < k; ++j) {
        out.explained_variance[j] = r.s[j] * r.s[j] / static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i)
            out.projections(i, j) = (r.u(i, j) * r.s[j]).real();
        for (std::size_t i = 0; i < d; ++i)
            out.components(i, j) = r.v(i, j).real();
    }
    return out;
}

} // namespace ummimo::linalg
