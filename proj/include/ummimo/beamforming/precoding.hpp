#ifndef UMMIMO_BEAMFORMING_PRECODING_HPP
#define UMMIMO_BEAMFORMING_PRECODING_HPP

#include <cstddef>
#include <vector>

#include "ummimo/linalg/complex_matrix.hpp"

namespace ummimo::bf {

using linalg::ComplexMatrix;
using linalg::cx;

struct Dims {
    std::size_t n_t = 0;
    std::size_t n_r = 0;
    std::size_t n_rf = 0;
    std::size_t n_s = 0;
};

// One transmit design: fully digital target, analog/digital hybrid factors,
// and the receive combiner. w may be empty when the combiner is supplied by
// the evaluation context.
struct PrecoderSet {
    ComplexMatrix f_opt; // N_t x N_s
    ComplexMatrix f_rf;  // N_t x N_RF, unit-modulus entries
    ComplexMatrix f_bb;  // N_RF x N_s
    ComplexMatrix w;     // N_r x N_s
    Dims dims;
};

struct OptimalPrecoder {
    ComplexMatrix f_opt; // first n_s right singular vectors of h
    ComplexMatrix w;     // first n_s left singular vectors of h
    std::vector<double> singular_values;
};

// Unconstrained optimum from the channel SVD; w^H h f_opt is diagonal with
// the top singular values on it.
OptimalPrecoder optimal_precoder(const ComplexMatrix &h, std::size_t n_s);

// Rescale the digital factor so ||f_rf * f_bb||_F^2 == n_s.
ComplexMatrix normalize_power(const ComplexMatrix &f_rf, const ComplexMatrix &f_bb, std::size_t n_s);

// Achievable rate in bits/s/Hz:
//   log2 det(I + snr/n_s * w^H h v v^H h^H w)
// evaluated through the singular values of w^H h v, which keeps the
// determinant positive and the result exact for orthonormal-column w.
double spectral_efficiency(const ComplexMatrix &h, const ComplexMatrix &v, const ComplexMatrix &w,
                           double snr_linear, std::size_t n_s);

} // namespace ummimo::bf

#endif
