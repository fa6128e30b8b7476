#include "ummimo/linalg/svd.hpp"

#include <algorithm>
#include <numeric>

namespace ummimo::linalg {

namespace {

constexpr int kMaxSweeps = 64;
constexpr double kOrthTol = 1e-14; // stop when |col_i^H col_j| <= tol * |col_i| |col_j|

struct JacobiOut {
    ComplexMatrix w; // rotated copy of the input, columns -> sigma * u
    ComplexMatrix v; // accumulated right rotations
};

// One-sided Jacobi for m >= n: repeatedly rotate column pairs of w until all
// pairs are mutually orthogonal. All rotations are trig-free (the phase unit
// is conj(gamma)/|gamma|), so real inputs stay exactly real.
JacobiOut one_sided_jacobi(const ComplexMatrix &a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    JacobiOut out{a, ComplexMatrix::identity(n)};
    ComplexMatrix &w = out.w;
    ComplexMatrix &v = out.v;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0.0, beta = 0.0;
                cx gamma{0.0, 0.0};
                for (std::size_t r = 0; r < m; ++r) {
                    const cx wp = w(r, p), wq = w(r, q);
                    alpha += std::norm(wp);
                    beta += std::norm(wq);
                    gamma += std::conj(wp) * wq;
                }
                const double g = std::abs(gamma);
                if (g <= kOrthTol * std::sqrt(alpha * beta) || g == 0.0)
                    continue;
                rotated = true;

                // absorb the phase of gamma into column q, then a real rotation
                const cx unit = std::conj(gamma) / g;
                const double tau = (beta - alpha) / (2.0 * g);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;

                for (std::size_t r = 0; r < m; ++r) {
                    const cx xp = w(r, p);
                    const cx zq = unit * w(r, q);
                    w(r, p) = c * xp - s * zq;
                    w(r, q) = s * xp + c * zq;
                }
                for (std::size_t r = 0; r < n; ++r) {
                    const cx xp = v(r, p);
                    const cx zq = unit * v(r, q);
                    v(r, p) = c * xp - s * zq;
                    v(r, q) = s * xp + c * zq;
                }
            }
        }
        if (!rotated)
            return out;
    }
    throw NumericalError("svd: one-sided Jacobi failed to converge within sweep cap");
}

// Deterministic orthonormal completion for null-space columns of u: walk the
// canonical basis, project out accepted columns, take the first residual with
// norm above 1/2.
void complete_column(ComplexMatrix &u, std::size_t col) {
    const std::size_t m = u.rows();
    for (std::size_t cand = 0; cand < m; ++cand) {
        std::vector<cx> vec(m, cx{0.0, 0.0});
        vec[cand] = cx{1.0, 0.0};
        for (std::size_t j = 0; j < u.cols(); ++j) {
            if (j == col)
                continue;
            cx dot{0.0, 0.0};
            for (std::size_t r = 0; r < m; ++r)
                dot += std::conj(u(r, j)) * vec[r];
            if (dot != cx{0.0, 0.0})
                for (std::size_t r = 0; r < m; ++r)
                    vec[r] -= dot * u(r, j);
        }
        double nrm2 = 0.0;
        for (const cx &z : vec)
            nrm2 += std::norm(z);
        const double nrm = std::sqrt(nrm2);
        if (nrm > 0.5) {
            for (std::size_t r = 0; r < m; ++r)
                u(r, col) = vec[r] / nrm;
            return;
        }
    }
    throw NumericalError("svd: failed to complete orthonormal basis");
}

SvdResult svd_tall(const ComplexMatrix &a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols(); // m >= n, k = n
    JacobiOut jd = one_sided_jacobi(a);

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s2 = 0.0;
        for (std::size_t r = 0; r < m; ++r)
            s2 += std::norm(jd.w(r, j));
        sigma[j] = std::sqrt(s2);
    }

    // descending order, stable on ties by original column index
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

    SvdResult res;
    res.u = ComplexMatrix(m, n);
    res.v = ComplexMatrix(n, n);
    res.s.resize(n);
    const double smax = sigma.empty() ? 0.0 : sigma[order[0]];
    std::vector<std::size_t> null_cols;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        res.s[j] = sigma[src];
        for (std::size_t r = 0; r < n; ++r)
            res.v(r, j) = jd.v(r, src);
        if (sigma[src] > smax * 1e-15 && sigma[src] > 0.0) {
            for (std::size_t r = 0; r < m; ++r)
                res.u(r, j) = jd.w(r, src) / sigma[src];
        } else {
            res.s[j] = sigma[src]; // keep the tiny value, only u needs completion
            null_cols.push_back(j);
        }
    }
    for (std::size_t j : null_cols)
        complete_column(res.u, j);
    return res;
}

void apply_phase_convention(SvdResult &r) {
    const std::size_t k = r.s.size();
    for (std::size_t j = 0; j < k; ++j) {
        std::size_t imax = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < r.v.rows(); ++i) {
            const double m = std::abs(r.v(i, j));
            if (m > best) {
                best = m;
                imax = i;
            }
        }
        if (best <= 0.0)
            continue;
        const cx unit = std::conj(r.v(imax, j)) / best; // multiplying rotates that entry onto R+
        for (std::size_t i = 0; i < r.v.rows(); ++i)
            r.v(i, j) *= unit;
        for (std::size_t i = 0; i < r.u.rows(); ++i)
            r.u(i, j) *= unit;
    }
}

} // namespace

SvdResult svd(const ComplexMatrix &a) {
    if (a.rows() == 0 || a.cols() == 0)
        throw ValidationError("svd: empty matrix");
    if (!a.is_finite())
        throw ValidationError("svd: input has non-finite entries");

    SvdResult res;
    if (a.rows() >= a.cols()) {
        res = svd_tall(a);
    } else {
        SvdResult t = svd_tall(a.hermitian());
        res.u = std::move(t.v);
        res.v = std::move(t.u);
        res.s = std::move(t.s);
    }
    apply_phase_convention(res);
    return res;
}

ComplexMatrix pinv(const ComplexMatrix &a, std::optional<double> rank_tol) {
    SvdResult r = svd(a);
    const double smax = r.s.empty() ? 0.0 : r.s[0];
    const double tol = rank_tol ? *rank_tol : 1e-12 * smax;
    if (rank_tol && *rank_tol <= 0.0)
        throw ValidationError("pinv: rank_tol must be positive");

    // a+ = v * diag(1/s) * u^H over the retained spectrum
    const std::size_t k = r.s.size();
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t j = 0; j < k; ++j) {
        if (r.s[j] <= tol || r.s[j] == 0.0)
            continue;
        const double inv = 1.0 / r.s[j];
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const cx vij = r.v(i, j) * inv;
            for (std::size_t c = 0; c < a.rows(); ++c)
                out(i, c) += vij * std::conj(r.u(c, j));
        }
    }
    return out;
}

} // namespace ummimo::linalg
