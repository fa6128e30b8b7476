#include "ummimo/neural/adam.hpp"

#include <cmath>

#include "ummimo/errors.hpp"

namespace ummimo::neural {

void adam_step(std::vector<double> &params, const std::vector<double> &grads, AdamState &state,
               const AdamOptions &opts) {
    if (params.size() != grads.size())
        throw ValidationError("adam_step: parameter/gradient size mismatch");
    if (state.m.size() != params.size())
        throw ValidationError("adam_step: state size mismatch (initialize with the parameter count)");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(opts.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(opts.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = opts.beta1 * state.m[i] + (1.0 - opts.beta1) * grads[i];
        state.v[i] = opts.beta2 * state.v[i] + (1.0 - opts.beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= opts.lr * mhat / (std::sqrt(vhat) + opts.eps);
    }
}

} // namespace ummimo::neural
