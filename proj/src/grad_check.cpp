#include "ummimo/neural/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ummimo/errors.hpp"
#include "ummimo/rng.hpp"

namespace ummimo::neural {

GradCheckReport grad_check(const std::function<double(const std::vector<double> &)> &loss,
                           const std::vector<double> &analytic_grad, std::vector<double> point,
                           double tolerance, double step, std::size_t max_coords, std::uint64_t seed) {
    if (analytic_grad.size() != point.size())
        throw ValidationError("grad_check: gradient/point size mismatch");

    std::vector<std::size_t> coords(point.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (max_coords > 0 && max_coords < coords.size()) {
        // seeded Fisher-Yates prefix
        Rng rng(seed);
        for (std::size_t i = 0; i < max_coords; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_u64() % (coords.size() - i));
            std::swap(coords[i], coords[j]);
        }
        coords.resize(max_coords);
    }

    GradCheckReport report;
    report.coords_checked = coords.size();
    for (std::size_t idx : coords) {
        const double keep = point[idx];
        point[idx] = keep + step;
        const double up = loss(point);
        point[idx] = keep - step;
        const double down = loss(point);
        point[idx] = keep;
        const double numeric = (up - down) / (2.0 * step);
        const double denom = std::max({1e-6, std::abs(numeric) + std::abs(analytic_grad[idx])});
        report.max_rel_error =
            std::max(report.max_rel_error, std::abs(numeric - analytic_grad[idx]) / denom);
    }
    report.pass = report.max_rel_error < tolerance;
    return report;
}

} // namespace ummimo::neural
