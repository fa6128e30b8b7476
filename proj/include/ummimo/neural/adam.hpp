#ifndef UMMIMO_NEURAL_ADAM_HPP
#define UMMIMO_NEURAL_ADAM_HPP

#include <cstdint>
#include <vector>

namespace ummimo::neural {

struct AdamOptions {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// Bias-corrected adaptive-moment update, in place over a flat parameter view.
void adam_step(std::vector<double> &params, const std::vector<double> &grads, AdamState &state,
               const AdamOptions &opts = {});

} // namespace ummimo::neural

#endif
