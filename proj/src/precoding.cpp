#include "ummimo/beamforming/precoding.hpp"

#include <cmath>

#include "ummimo/linalg/svd.hpp"

namespace ummimo::bf {

OptimalPrecoder optimal_precoder(const ComplexMatrix &h, std::size_t n_s) {
    if (n_s < 1 || n_s > std::min(h.rows(), h.cols()))
        throw ValidationError("optimal_precoder: n_s out of range");
    linalg::SvdResult r = linalg::svd(h);
    OptimalPrecoder out;
    out.f_opt = r.v.columns(0, n_s);
    out.w = r.u.columns(0, n_s);
    out.singular_values.assign(r.s.begin(), r.s.begin() + static_cast<std::ptrdiff_t>(n_s));
    return out;
}

ComplexMatrix normalize_power(const ComplexMatrix &f_rf, const ComplexMatrix &f_bb, std::size_t n_s) {
    const double norm = linalg::frobenius_norm(f_rf * f_bb);
    if (!(norm > 0.0))
        throw NumericalError("normalize_power: zero-norm hybrid product");
    ComplexMatrix out = f_bb;
    out *= cx{std::sqrt(static_cast<double>(n_s)) / norm, 0.0};
    return out;
}

double spectral_efficiency(const ComplexMatrix &h, const ComplexMatrix &v, const ComplexMatrix &w,
                           double snr_linear, std::size_t n_s) {
    if (h.rows() != w.rows() || h.cols() != v.rows() || v.cols() != n_s || w.cols() != n_s)
        throw ValidationError("spectral_efficiency: dimension mismatch");
    if (!(snr_linear >= 0.0))
        throw ValidationError("spectral_efficiency: snr must be nonnegative");
    if (snr_linear == 0.0)
        return 0.0;

    const ComplexMatrix g = w.hermitian() * h * v; // n_s x n_s effective channel
    linalg::SvdResult s = linalg::svd(g);
    const double c = snr_linear / static_cast<double>(n_s);
    double rate = 0.0;
    for (double sv : s.s)
        rate += std::log1p(c * sv * sv);
    return rate / std::log(2.0);
}

} // namespace ummimo::bf
