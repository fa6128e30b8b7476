#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "ummimo/linalg/complex_matrix.hpp"
#include "ummimo/linalg/pca.hpp"
#include "ummimo/linalg/svd.hpp"
#include "ummimo/rng.hpp"

using namespace ummimo;
using namespace ummimo::linalg;

namespace {

ComplexMatrix random_complex(std::size_t rows, std::size_t cols, Rng &rng) {
    ComplexMatrix m(rows, cols);
    for (auto &z : m.data())
        z = rng.complex_normal();
    return m;
}

RealMatrix random_real(std::size_t rows, std::size_t cols, Rng &rng) {
    RealMatrix m(rows, cols);
    for (auto &v : m.data())
        v = rng.normal();
    return m;
}

double max_abs_dev_from_identity(const ComplexMatrix &q) {
    ComplexMatrix g = q.hermitian() * q;
    double worst = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) {
            const cx expect = (i == j) ? cx{1.0, 0.0} : cx{0.0, 0.0};
            worst = std::max(worst, std::abs(g(i, j) - expect));
        }
    return worst;
}

ComplexMatrix reconstruct(const SvdResult &r) {
    ComplexMatrix us = r.u;
    for (std::size_t j = 0; j < r.s.size(); ++j)
        for (std::size_t i = 0; i < us.rows(); ++i)
            us(i, j) *= r.s[j];
    return us * r.v.hermitian();
}

// ---- independent eigenvalue oracle -----------------------------------------
// Characteristic polynomial via Faddeev-LeVerrier, then all-real root
// isolation by derivative interlacing + bisection. Shares no code with the
// Jacobi SVD it cross-checks.

std::vector<double> char_poly(const ComplexMatrix &a) {
    const std::size_t n = a.rows();
    std::vector<double> coeffs{1.0};
    ComplexMatrix m = a;
    double c = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k > 1) {
            ComplexMatrix shifted = m;
            for (std::size_t i = 0; i < n; ++i)
                shifted(i, i) += c;
            m = a * shifted;
        }
        cx tr{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            tr += m(i, i);
        c = -tr.real() / static_cast<double>(k);
        coeffs.push_back(c);
    }
    return coeffs; // monic, descending powers
}

double poly_eval(const std::vector<double> &p, double x) {
    double acc = 0.0;
    for (double c : p)
        acc = acc * x + c;
    return acc;
}

std::vector<double> poly_derivative(const std::vector<double> &p) {
    const std::size_t deg = p.size() - 1;
    std::vector<double> d(deg);
    for (std::size_t i = 0; i < deg; ++i)
        d[i] = p[i] * static_cast<double>(deg - i);
    return d;
}

double bisect_root(const std::vector<double> &p, double lo, double hi) {
    double flo = poly_eval(p, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = poly_eval(p, mid);
        if (fm == 0.0)
            return mid;
        if ((flo < 0.0) != (fm < 0.0)) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

// all roots of a real polynomial known to have only real roots
std::vector<double> all_real_roots(const std::vector<double> &p) {
    const std::size_t deg = p.size() - 1;
    if (deg == 1)
        return {-p[1] / p[0]};
    std::vector<double> crit = all_real_roots(poly_derivative(p));
    std::sort(crit.begin(), crit.end());
    double bound = 0.0;
    for (std::size_t i = 1; i < p.size(); ++i)
        bound = std::max(bound, std::abs(p[i] / p[0]));
    bound += 1.0;
    std::vector<double> pts{-bound};
    pts.insert(pts.end(), crit.begin(), crit.end());
    pts.push_back(bound);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double flo = poly_eval(p, pts[i]);
        const double fhi = poly_eval(p, pts[i + 1]);
        if (flo == 0.0)
            roots.push_back(pts[i]);
        else if ((flo < 0.0) != (fhi < 0.0))
            roots.push_back(bisect_root(p, pts[i], pts[i + 1]));
    }
    return roots;
}

} // namespace

TEST_CASE("svd identity and diagonal") {
    SvdResult r = svd(ComplexMatrix::identity(2));
    CHECK(r.s.size() == 2);
    CHECK(r.s[0] == doctest::Approx(1.0));
    CHECK(r.s[1] == doctest::Approx(1.0));

    ComplexMatrix d(2, 2);
    d(0, 0) = 3.0;
    r = svd(d);
    CHECK(r.s[0] == doctest::Approx(3.0));
    CHECK(std::abs(r.s[1]) < 1e-14);
    CHECK(std::abs(std::abs(r.u(0, 0)) - 1.0) < 1e-12);
    CHECK(std::abs(r.u(1, 0)) < 1e-12);
    // null column of u still completed orthonormally
    CHECK(max_abs_dev_from_identity(r.u) < 1e-10);
}

TEST_CASE("svd singular values match characteristic-polynomial eigen oracle") {
    Rng rng(0x5eed0401ULL);
    ComplexMatrix a = random_complex(4, 4, rng);
    SvdResult r = svd(a);

    ComplexMatrix gram = a.hermitian() * a;
    std::vector<double> lambda = all_real_roots(char_poly(gram));
    REQUIRE(lambda.size() == 4);
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(r.s[i] - std::sqrt(std::max(0.0, lambda[i]))) < 1e-8);
}

TEST_CASE("svd invariants across shapes") {
    Rng rng(0x5eed0402ULL);
    const std::size_t shapes[][2] = {{4, 4}, {8, 3}, {3, 8}, {6, 6}, {12, 2}, {2, 12}, {5, 5}};
    for (auto &sh : shapes) {
        for (int rep = 0; rep < 5; ++rep) {
            ComplexMatrix a = random_complex(sh[0], sh[1], rng);
            SvdResult r = svd(a);

            const std::size_t k = std::min(sh[0], sh[1]);
            REQUIRE(r.s.size() == k);
            for (std::size_t i = 0; i + 1 < k; ++i)
                CHECK(r.s[i] >= r.s[i + 1]);
            CHECK(r.s.back() >= 0.0);
            CHECK(max_abs_dev_from_identity(r.u) < 1e-10);
            CHECK(max_abs_dev_from_identity(r.v) < 1e-10);
            CHECK(frobenius_norm(reconstruct(r) - a) / frobenius_norm(a) < 1e-10);

            // column phase convention: largest-modulus entry of each v column
            // lands on the positive real axis
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t imax = 0;
                double best = -1.0;
                for (std::size_t i = 0; i < r.v.rows(); ++i)
                    if (std::abs(r.v(i, j)) > best) {
                        best = std::abs(r.v(i, j));
                        imax = i;
                    }
                CHECK(r.v(imax, j).real() > 0.0);
                CHECK(std::abs(r.v(imax, j).imag()) < 1e-12 * best);
            }
        }
    }
}

TEST_CASE("svd rank-deficient input keeps orthonormal factors") {
    Rng rng(0x5eed0403ULL);
    ComplexMatrix left = random_complex(6, 2, rng);
    ComplexMatrix right = random_complex(2, 5, rng);
    ComplexMatrix a = left * right; // rank 2
    SvdResult r = svd(a);
    CHECK(r.s[2] / r.s[0] < 1e-12);
    CHECK(max_abs_dev_from_identity(r.u) < 1e-10);
    CHECK(max_abs_dev_from_identity(r.v) < 1e-10);
    CHECK(frobenius_norm(reconstruct(r) - a) / frobenius_norm(a) < 1e-10);
}

TEST_CASE("svd determinism and input validation") {
    Rng rng(0x5eed0404ULL);
    ComplexMatrix a = random_complex(5, 3, rng);
    SvdResult r1 = svd(a);
    SvdResult r2 = svd(a);
    CHECK(r1.s == r2.s);
    CHECK(r1.u.data() == r2.u.data());
    CHECK(r1.v.data() == r2.v.data());

    ComplexMatrix bad(2, 2);
    bad(0, 0) = cx{std::nan(""), 0.0};
    CHECK_THROWS_AS(svd(bad), ValidationError);
}

TEST_CASE("pinv basics") {
    ComplexMatrix i3 = ComplexMatrix::identity(3);
    CHECK(frobenius_norm(pinv(i3) - i3) < 1e-12);

    ComplexMatrix d(2, 2);
    d(0, 0) = 2.0;
    ComplexMatrix dp = pinv(d);
    CHECK(std::abs(dp(0, 0) - cx{0.5, 0.0}) < 1e-14);
    CHECK(std::abs(dp(1, 1)) < 1e-14);

    CHECK_THROWS_AS(pinv(i3, -1.0), ValidationError);
}

TEST_CASE("pinv satisfies the four Moore-Penrose conditions") {
    Rng rng(0x5eed0405ULL);
    ComplexMatrix a = random_complex(3, 5, rng);
    ComplexMatrix ap = pinv(a);

    ComplexMatrix aapa = a * ap * a;
    ComplexMatrix apaap = ap * a * ap;
    ComplexMatrix aap = a * ap;
    ComplexMatrix apa = ap * a;
    CHECK(frobenius_norm(aapa - a) < 1e-9);
    CHECK(frobenius_norm(apaap - ap) < 1e-9);
    CHECK(frobenius_norm(aap - aap.hermitian()) < 1e-9);
    CHECK(frobenius_norm(apa - apa.hermitian()) < 1e-9);
}

TEST_CASE("pinv is an involution on full-rank matrices") {
    Rng rng(0x5eed0406ULL);
    for (int rep = 0; rep < 4; ++rep) {
        ComplexMatrix a = random_complex(4, 6, rng);
        CHECK(frobenius_norm(pinv(pinv(a)) - a) < 1e-8);
    }
}

TEST_CASE("frobenius norm") {
    CHECK(frobenius_norm(ComplexMatrix(2, 2)) == 0.0);
    CHECK(frobenius_norm(ComplexMatrix::identity(3)) == doctest::Approx(std::sqrt(3.0)));
    ComplexMatrix m(1, 1);
    m(0, 0) = cx{3.0, 4.0};
    CHECK(frobenius_norm(m) == doctest::Approx(5.0));
}

TEST_CASE("phase_extract") {
    ComplexMatrix m(1, 1);
    m(0, 0) = 2.0;
    CHECK(phase_extract(m)(0, 0) == cx{1.0, 0.0});
    m(0, 0) = 0.0;
    CHECK(phase_extract(m)(0, 0) == cx{1.0, 0.0});
    m(0, 0) = cx{1.0, 1.0};
    CHECK(std::abs(phase_extract(m)(0, 0) - cx{M_SQRT1_2, M_SQRT1_2}) < 1e-15);

    Rng rng(0x5eed0407ULL);
    ComplexMatrix r = random_complex(6, 4, rng);
    ComplexMatrix p = phase_extract(r);
    for (const cx &z : p.data())
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);
}

TEST_CASE("pca on axis-aligned data") {
    RealMatrix x(4, 2);
    x(0, 0) = 1.0;
    x(1, 0) = 2.0;
    x(2, 0) = 4.0;
    x(3, 0) = 9.0;
    PcaResult p = pca_project(x, 1);
    double total = 0.0;
    const double mean = (1.0 + 2.0 + 4.0 + 9.0) / 4.0;
    for (double v : {1.0, 2.0, 4.0, 9.0})
        total += (v - mean) * (v - mean) / 3.0;
    CHECK(p.explained_variance[0] == doctest::Approx(total));
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(p.projections(i, 0)) == doctest::Approx(std::abs(x(i, 0) - mean)));
}

TEST_CASE("pca degenerate cloud") {
    RealMatrix x(5, 3, 7.5);
    PcaResult p = pca_project(x, 2);
    for (double v : p.explained_variance)
        CHECK(std::abs(v) < 1e-18);
    for (double v : p.projections.data())
        CHECK(std::abs(v) < 1e-9);
}

TEST_CASE("pca full-rank round trip and variance bookkeeping") {
    Rng rng(0x5eed0408ULL);
    RealMatrix x = random_real(50, 8, rng);
    PcaResult p = pca_project(x, 8);

    std::vector<double> mean(8, 0.0);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            mean[j] += x(i, j) / 50.0;

    // explained variances sum to the total sample variance
    double total = 0.0;
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            total += (x(i, j) - mean[j]) * (x(i, j) - mean[j]) / 49.0;
    double sum_ev = 0.0;
    for (double v : p.explained_variance)
        sum_ev += v;
    CHECK(std::abs(sum_ev - total) < 1e-9);
    for (std::size_t j = 0; j + 1 < 8; ++j)
        CHECK(p.explained_variance[j] >= p.explained_variance[j + 1]);

    // reconstruction from all components recovers the centered data
    RealMatrix recon = matmul_nt(p.projections, p.components);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 8; ++j)
            CHECK(std::abs(recon(i, j) - (x(i, j) - mean[j])) < 1e-9);

    CHECK_THROWS_AS(pca_project(x, 9), ValidationError);
    CHECK_THROWS_AS(pca_project(x, 0), ValidationError);
}
