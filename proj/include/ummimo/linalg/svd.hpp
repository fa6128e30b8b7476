#ifndef UMMIMO_LINALG_SVD_HPP
#define UMMIMO_LINALG_SVD_HPP

#include <optional>
#include <vector>

#include "ummimo/linalg/complex_matrix.hpp"

namespace ummimo::linalg {

// Thin SVD a = u * diag(s) * v^H with k = min(rows, cols).
//   u: rows x k, orthonormal columns
//   s: length k, real, descending, nonnegative
//   v: cols x k, orthonormal columns
// Column phases are fixed so the largest-modulus entry of each v column is
// real-positive, which makes downstream precoders reproducible bit-for-bit.
struct SvdResult {
    ComplexMatrix u;
    std::vector<double> s;
    ComplexMatrix v;
};

// One-sided Jacobi on the complex field. Throws NumericalError if the sweep
// cap is reached before convergence; never returns silent garbage.
SvdResult svd(const ComplexMatrix &a);

// Moore-Penrose pseudo-inverse. Singular values at or below rank_tol are
// treated as zero; the default tolerance is 1e-12 * max singular value.
ComplexMatrix pinv(const ComplexMatrix &a, std::optional<double> rank_tol = std::nullopt);

} // namespace ummimo::linalg

#endif
