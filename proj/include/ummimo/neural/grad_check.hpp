#ifndef UMMIMO_NEURAL_GRAD_CHECK_HPP
#define UMMIMO_NEURAL_GRAD_CHECK_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace ummimo::neural {

struct GradCheckReport {
    double max_rel_error = 0.0;
    bool pass = false;
    std::size_t coords_checked = 0;
};

// Central finite differences against an analytic gradient over a flat
// parameter vector. With max_coords > 0 a seeded subsample of at least that
// many coordinates is checked instead of all of them.
GradCheckReport grad_check(const std::function<double(const std::vector<double> &)> &loss,
                           const std::vector<double> &analytic_grad, std::vector<double> point,
                           double tolerance, double step = 1e-6, std::size_t max_coords = 0,
                           std::uint64_t seed = 0);

} // namespace ummimo::neural

#endif
