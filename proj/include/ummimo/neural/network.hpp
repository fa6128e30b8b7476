#ifndef UMMIMO_NEURAL_NETWORK_HPP
#define UMMIMO_NEURAL_NETWORK_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ummimo/linalg/real_matrix.hpp"

namespace ummimo::neural {

using linalg::RealMatrix;

enum class LayerKind { dense, relu, swish, flatten, concat, l2_normalize };

struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t fan_in = 0;  // dense only
    std::size_t fan_out = 0; // dense only
};

struct DenseParams {
    RealMatrix w; // fan_out x fan_in
    std::vector<double> b;
};

struct NetworkGrads {
    std::vector<DenseParams> dense; // same shapes as the parameters
};

// Activations recorded by forward, consumed once by backward.
struct ForwardCache {
    std::vector<RealMatrix> inputs; // input to each layer
    RealMatrix output;
    std::size_t batch = 0;
    std::uint64_t net_tag = 0;
};

// Plain sequential stack over batched row vectors. concat is a structural
// marker composed at model level and is rejected inside a sequential net.
class Network {
  public:
    Network() = default;
    Network(std::vector<LayerSpec> specs, std::uint64_t init_seed);

    const std::vector<LayerSpec> &specs() const { return specs_; }
    std::size_t input_width() const { return in_width_; }
    std::size_t output_width() const { return out_width_; }
    std::uint64_t init_seed() const { return init_seed_; }

    std::vector<DenseParams> &params() { return params_; }
    const std::vector<DenseParams> &params() const { return params_; }

    ForwardCache forward(const RealMatrix &input) const;
    RealMatrix output(const RealMatrix &input) const { return forward(input).output; }

    // Exact reverse-mode gradients of the composed map. Returns the gradient
    // w.r.t. the input; parameter gradients accumulate into grads.
    RealMatrix backward(const ForwardCache &cache, const RealMatrix &output_grad,
                        NetworkGrads &grads) const;

    NetworkGrads zero_grads() const;

    std::size_t param_count() const;
    void flatten_params(std::vector<double> &out) const;
    void flatten_grads(const NetworkGrads &grads, std::vector<double> &out) const;
    std::size_t assign_params(std::span<const double> flat);

    // fingerprint over layer kinds and shapes; checkpoints refuse to load
    // into a different topology
    std::uint64_t spec_fingerprint(std::uint64_t h = 0xcbf29ce484222325ULL) const;

  private:
    std::vector<LayerSpec> specs_;
    std::vector<DenseParams> params_; // one entry per dense layer
    std::size_t in_width_ = 0;
    std::size_t out_width_ = 0;
    std::uint64_t init_seed_ = 0;
    std::uint64_t tag_ = 0; // identity token for cache validation
};

inline double sigmoid(double x) {
    return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

} // namespace ummimo::neural

#endif
