#ifndef UMMIMO_LINALG_PCA_HPP
#define UMMIMO_LINALG_PCA_HPP

#include <cstddef>
#include <vector>

#include "ummimo/linalg/real_matrix.hpp"

namespace ummimo::linalg {

// Principal components of the rows of x (n_samples x d).
//   projections: centered-data coordinates on the top-k covariance
//                eigenvectors (n_samples x k)
//   explained_variance: the corresponding eigenvalues, descending
//                       (sample covariance, 1/(n-1) convention)
//   components: the eigenvector directions themselves (d x k)
struct PcaResult {
    RealMatrix projections;
    std::vector<double> explained_variance;
    RealMatrix components;
};

PcaResult pca_project(const RealMatrix &x, std::size_t k);

} // namespace ummimo::linalg

#endif
