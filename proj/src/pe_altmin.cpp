#include "ummimo/beamforming/pe_altmin.hpp"

#include <cmath>

#include "ummimo/linalg/svd.hpp"
#include "ummimo/rng.hpp"

namespace ummimo::bf {

namespace {

// Best f_bb of the form gamma * Q (Q semi-unitary, gamma >= 0) for fixed
// f_rf: orthogonal-Procrustes factor of f_rf^H f_opt with the closed-form
// least-squares magnitude.
ComplexMatrix procrustes_digital(const ComplexMatrix &f_rf, const ComplexMatrix &f_opt) {
    const ComplexMatrix m = f_rf.hermitian() * f_opt; // N_RF x N_s
    linalg::SvdResult r = linalg::svd(m);
    ComplexMatrix q = r.u * r.v.hermitian();

    double trace_s = 0.0;
    for (double sv : r.s)
        trace_s += sv;
    const double denom = linalg::frobenius_norm(f_rf * q);
    const double gamma = (denom > 0.0) ? trace_s / (denom * denom) : 0.0;
    q *= cx{gamma, 0.0};
    return q;
}

double residual(const ComplexMatrix &f_opt, const ComplexMatrix &f_rf, const ComplexMatrix &f_bb) {
    return linalg::frobenius_norm(f_opt - f_rf * f_bb);
}

} // namespace

AltMinResult pe_altmin(const ComplexMatrix &f_opt, std::size_t n_rf, const AltMinOptions &opts) {
    const std::size_t n_t = f_opt.rows();
    const std::size_t n_s = f_opt.cols();
    if (n_rf < n_s)
        throw ValidationError("pe_altmin: need n_rf >= n_s");
    if (!(opts.tol > 0.0))
        throw ValidationError("pe_altmin: tol must be positive");
    if (opts.max_iter < 1)
        throw ValidationError("pe_altmin: max_iter must be >= 1");
    if (!f_opt.is_finite())
        throw ValidationError("pe_altmin: target has non-finite entries");

    Rng rng(opts.seed);
    ComplexMatrix f_rf(n_t, n_rf);
    for (auto &z : f_rf.data())
        z = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    ComplexMatrix f_bb = procrustes_digital(f_rf, f_opt);

    AltMinResult out;
    out.trace.residuals.push_back(residual(f_opt, f_rf, f_bb));
    out.trace.converged = false;

    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        ComplexMatrix rf_next = linalg::phase_extract(f_opt * f_bb.hermitian());
        ComplexMatrix bb_next = procrustes_digital(rf_next, f_opt);
        const double res = residual(f_opt, rf_next, bb_next);
        const double prev = out.trace.residuals.back();

        if (res > prev) {
            // alternation stalled; keep the better iterate
            out.trace.converged = true;
            break;
        }
        f_rf = std::move(rf_next);
        f_bb = std::move(bb_next);
        out.trace.residuals.push_back(res);
        out.trace.iterations = it;
        if (prev - res < opts.tol) {
            out.trace.converged = true;
            break;
        }
    }

    out.f_rf = std::move(f_rf);
    out.f_bb = std::move(f_bb);
    return out;
}

} // namespace ummimo::bf
