#ifndef UMMIMO_BEAMFORMING_PE_ALTMIN_HPP
#define UMMIMO_BEAMFORMING_PE_ALTMIN_HPP

#include <cstdint>

#include "ummimo/beamforming/precoding.hpp"

namespace ummimo::bf {

struct AltMinTrace {
    std::vector<double> residuals; // ||f_opt - f_rf * f_bb||_F per iteration
    std::size_t iterations = 0;
    bool converged = false;
};

struct AltMinResult {
    ComplexMatrix f_rf;
    ComplexMatrix f_bb; // un-normalized; apply normalize_power before use
    AltMinTrace trace;
};

struct AltMinOptions {
    double tol = 1e-6; // stop when the residual improves by less than this
    std::size_t max_iter = 200;
    std::uint64_t seed = 0; // random phases of the initial analog factor
};

// Phase-extraction alternating minimization for
//   min ||f_opt - f_rf f_bb||_F  s.t. |f_rf(i,j)| = 1.
// Alternates (a) f_rf <- entrywise phases of f_opt * f_bb^H with (b) the
// scaled semi-unitary Procrustes solution for f_bb from the SVD of
// f_rf^H f_opt. An iterate that fails to improve the residual is discarded,
// so the recorded trace is non-increasing by construction.
AltMinResult pe_altmin(const ComplexMatrix &f_opt, std::size_t n_rf, const AltMinOptions &opts = {});

} // namespace ummimo::bf

#endif
