#include "ummimo/contrastive/selfsup.hpp"

#include <cmath>

#include "ummimo/linalg/svd.hpp"

namespace ummimo::cl {

namespace {

// cotangent of B given the cotangent of pinv(B), via the closed-form
// differential of the pseudo-inverse at full column rank
ComplexMatrix pinv_adjoint(const ComplexMatrix &b, const ComplexMatrix &bp,
                           const ComplexMatrix &gbar) {
    const std::size_t r = b.rows();
    const std::size_t s = b.cols();
    const ComplexMatrix bph = bp.hermitian();   // r x s
    const ComplexMatrix gh = gbar.hermitian();  // r x s

    ComplexMatrix proj_range = ComplexMatrix::identity(r) - b * bp;   // r x r
    ComplexMatrix proj_corange = ComplexMatrix::identity(s) - bp * b; // s x s

    ComplexMatrix term1 = bph * gbar * bph;
    term1 *= cx{-1.0, 0.0};
    ComplexMatrix term2 = proj_range * gh * (bp * bph);
    ComplexMatrix term3 = (bph * bp) * gh * proj_corange;
    return term1 + term2 + term3;
}

// cotangent of m given the cotangent of p = m/|m| (entrywise phase)
ComplexMatrix phase_extract_adjoint(const ComplexMatrix &m, const ComplexMatrix &pbar) {
    ComplexMatrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.size(); ++i) {
        const cx z = m.data()[i];
        const double r = std::abs(z);
        if (r == 0.0)
            continue; // projection is constant at the convention point
        const cx w = std::conj(pbar.data()[i]) * z / (r * r * r);
        out.data()[i] = cx{0.0, -w.imag()} * z; // -j * Im(w) * z
    }
    return out;
}

} // namespace

SelfsupResult selfsup_loss(const ComplexMatrix &f_opt, const ComplexMatrix &f_bb, bool project_frf) {
    if (f_opt.cols() != f_bb.cols())
        throw ValidationError("selfsup_loss: stream counts disagree");
    if (f_bb.rows() < f_bb.cols())
        throw ValidationError("selfsup_loss: f_bb must have n_rf >= n_s");

    linalg::SvdResult sv = linalg::svd(f_bb);
    if (sv.s.back() <= 1e-12 * sv.s.front() || sv.s.back() == 0.0)
        throw DegeneratePredictionError("selfsup_loss: predicted f_bb is rank deficient");

    const ComplexMatrix bp = linalg::pinv(f_bb); // n_s x n_rf
    const ComplexMatrix m = f_opt * bp;          // n_t x n_rf, raw analog factor
    const ComplexMatrix f_rf = project_frf ? linalg::phase_extract(m) : m;
    const ComplexMatrix residual = f_opt - f_rf * f_bb;
    const double loss = linalg::frobenius_norm(residual);

    SelfsupResult out;
    out.loss = loss;
    out.grad_f_bb = ComplexMatrix(f_bb.rows(), f_bb.cols());
    if (loss < 1e-12 * linalg::frobenius_norm(f_opt))
        return out; // at the minimum up to roundoff; the norm has no gradient there

    // L = ||R||, R = f_opt - f_rf * f_bb
    ComplexMatrix cbar = residual;
    cbar *= cx{-1.0 / loss, 0.0}; // cotangent of (f_rf * f_bb)

    ComplexMatrix rf_bar = cbar * f_bb.hermitian();
    out.grad_f_bb += f_rf.hermitian() * cbar;

    const ComplexMatrix m_bar = project_frf ? phase_extract_adjoint(m, rf_bar) : rf_bar;
    const ComplexMatrix gbar = f_opt.hermitian() * m_bar; // cotangent of pinv(f_bb)
    out.grad_f_bb += pinv_adjoint(f_bb, bp, gbar);
    return out;
}

} // namespace ummimo::cl
