#ifndef UMMIMO_CONTRASTIVE_SELFSUP_HPP
#define UMMIMO_CONTRASTIVE_SELFSUP_HPP

#include "ummimo/errors.hpp"
#include "ummimo/linalg/complex_matrix.hpp"

namespace ummimo::cl {

using linalg::ComplexMatrix;
using linalg::cx;

// Prediction rank-collapsed below the pseudo-inverse tolerance; training
// loops skip the batch and log it.
class DegeneratePredictionError : public NumericalError {
  public:
    explicit DegeneratePredictionError(const std::string &what) : NumericalError(what) {}
};

struct SelfsupResult {
    double loss = 0.0;
    // cotangent per entry of f_bb: dL/d(Re) + j dL/d(Im)
    ComplexMatrix grad_f_bb;
};

// Factorization self-consistency loss || f_opt - f_rf * f_bb ||_F with the
// analog factor recovered from the input itself, f_rf = f_opt * pinv(f_bb).
// With project_frf the analog factor is snapped to unit modulus inside the
// loss, which is what makes the objective informative: the raw product
// collapses to f_opt * (pinv(f_bb) f_bb) and is constant wherever f_bb keeps
// full column rank. Gradients run through the closed-form differentials of
// the pseudo-inverse and of the phase projection.
SelfsupResult selfsup_loss(const ComplexMatrix &f_opt, const ComplexMatrix &f_bb,
                           bool project_frf = false);

} // namespace ummimo::cl

#endif
