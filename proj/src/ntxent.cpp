#include "ummimo/contrastive/ntxent.hpp"

#include <algorithm>
#include <cmath>

#include "ummimo/errors.hpp"

namespace ummimo::cl {

namespace {

double dot(const double *a, const double *b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void validate_matching(const std::vector<std::size_t> &pair_index, std::size_t n) {
    if (pair_index.size() != n)
        throw ValidationError("ntxent_loss: pair_index size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = pair_index[i];
        if (j >= n || j == i || pair_index[j] != i)
            throw ValidationError("ntxent_loss: pair_index is not a perfect matching");
    }
}

} // namespace

NtxentResult ntxent_loss(const RealMatrix &projections, const std::vector<std::size_t> &pair_index,
                         double tau) {
    const std::size_t n = projections.rows();
    const std::size_t d = projections.cols();
    if (n < 2)
        throw ValidationError("ntxent_loss: need at least one pair");
    if (!(tau > 0.0))
        throw ValidationError("ntxent_loss: temperature must be positive");
    validate_matching(pair_index, n);
    for (std::size_t i = 0; i < n; ++i) {
        const double nrm = std::sqrt(dot(projections.row(i), projections.row(i), d));
        if (std::abs(nrm - 1.0) > 1e-4)
            throw ValidationError("ntxent_loss: row " + std::to_string(i) + " is not unit norm");
    }

    // full similarity table; fine at contrastive batch sizes
    RealMatrix sim(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            sim(i, j) = sim(j, i) = dot(projections.row(i), projections.row(j), d);

    NtxentResult res;
    res.per_anchor.resize(n);
    res.projection_grads = RealMatrix(n, d);
    const double inv_n = 1.0 / static_cast<double>(n);

    std::vector<double> prob(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t pos = pair_index[i];

        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t w = 0; w < n; ++w)
            if (w != i)
                mx = std::max(mx, sim(i, w) / tau);
        double denom = 0.0;
        for (std::size_t w = 0; w < n; ++w)
            prob[w] = (w == i) ? 0.0 : std::exp(sim(i, w) / tau - mx);
        for (std::size_t w = 0; w < n; ++w)
            denom += prob[w];
        for (std::size_t w = 0; w < n; ++w)
            prob[w] /= denom;

        res.per_anchor[i] = -(sim(i, pos) / tau - mx - std::log(denom));

        // d loss_i / d sim(i,w) = (prob_w - [w == pos]) / tau
        for (std::size_t w = 0; w < n; ++w) {
            if (w == i)
                continue;
            const double c = inv_n * (prob[w] - (w == pos ? 1.0 : 0.0)) / tau;
            if (c == 0.0)
                continue;
            for (std::size_t k = 0; k < d; ++k) {
                res.projection_grads(i, k) += c * projections(w, k);
                res.projection_grads(w, k) += c * projections(i, k);
            }
        }
    }

    double acc = 0.0;
    for (double v : res.per_anchor)
        acc += v;
    res.loss = acc * inv_n;
    return res;
}

double ntxent_anchor_loss(const std::vector<double> &anchor, const std::vector<double> &positive,
                          const std::vector<std::vector<double>> &negatives, double tau) {
    if (!(tau > 0.0))
        throw ValidationError("ntxent_anchor_loss: temperature must be positive");
    const std::size_t d = anchor.size();
    const double s_pos = dot(anchor.data(), positive.data(), d) / tau;
    double mx = s_pos;
    std::vector<double> sims{s_pos};
    for (const auto &neg : negatives) {
        sims.push_back(dot(anchor.data(), neg.data(), d) / tau);
        mx = std::max(mx, sims.back());
    }
    double denom = 0.0;
    for (double s : sims)
        denom += std::exp(s - mx);
    return -(s_pos - mx - std::log(denom));
}

} // namespace ummimo::cl
