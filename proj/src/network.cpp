#include "ummimo/neural/network.hpp"

#include <atomic>
#include <cmath>

#include "ummimo/rng.hpp"

namespace ummimo::neural {

namespace {
std::atomic<std::uint64_t> g_next_tag{1};

const char *kind_name(LayerKind k) {
    switch (k) {
    case LayerKind::dense:
        return "dense";
    case LayerKind::relu:
        return "relu";
    case LayerKind::swish:
        return "swish";
    case LayerKind::flatten:
        return "flatten";
    case LayerKind::concat:
        return "concat";
    case LayerKind::l2_normalize:
        return "l2_normalize";
    }
    return "?";
}
} // namespace

Network::Network(std::vector<LayerSpec> specs, std::uint64_t init_seed)
    : specs_(std::move(specs)), init_seed_(init_seed), tag_(g_next_tag.fetch_add(1)) {
    if (specs_.empty())
        throw ValidationError("Network: no layers");

    std::size_t width = 0;
    Rng rng(init_seed);
    for (std::size_t li = 0; li < specs_.size(); ++li) {
        const LayerSpec &spec = specs_[li];
        if (spec.kind == LayerKind::concat)
            throw ValidationError("Network: concat is a model-level junction, not a sequential layer");
        if (spec.kind == LayerKind::dense) {
            if (spec.fan_in < 1 || spec.fan_out < 1)
                throw ValidationError("Network: dense layer " + std::to_string(li) +
                                      " needs positive fan_in/fan_out");
            if (width != 0 && width != spec.fan_in)
                throw ValidationError("Network: dense layer " + std::to_string(li) +
                                      " fan_in disagrees with previous width");
            if (width == 0)
                in_width_ = spec.fan_in;

            // fan-in scaled uniform init, zero biases
            DenseParams p;
            p.w = RealMatrix(spec.fan_out, spec.fan_in);
            const double a = std::sqrt(3.0 / static_cast<double>(spec.fan_in));
            for (double &v : p.w.data())
                v = rng.uniform(-a, a);
            p.b.assign(spec.fan_out, 0.0);
            params_.push_back(std::move(p));
            width = spec.fan_out;
        } else {
            if (width == 0 && spec.kind != LayerKind::flatten)
                throw ValidationError("Network: layers before the first dense must be flatten");
        }
    }
    out_width_ = width;
}

ForwardCache Network::forward(const RealMatrix &input) const {
    if (input.cols() != in_width_)
        throw ValidationError("Network::forward: input width " + std::to_string(input.cols()) +
                              " does not match first dense layer fan_in " + std::to_string(in_width_));
    ForwardCache cache;
    cache.batch = input.rows();
    cache.net_tag = tag_;
    cache.inputs.reserve(specs_.size());

    RealMatrix x = input;
    std::size_t dense_idx = 0;
    for (const LayerSpec &spec : specs_) {
        cache.inputs.push_back(x);
        switch (spec.kind) {
        case LayerKind::dense: {
            const DenseParams &p = params_[dense_idx++];
            RealMatrix y = linalg::matmul_nt(x, p.w);
            for (std::size_t i = 0; i < y.rows(); ++i)
                for (std::size_t j = 0; j < y.cols(); ++j)
                    y(i, j) += p.b[j];
            x = std::move(y);
            break;
        }
        case LayerKind::relu:
            for (double &v : x.data())
                v = v > 0.0 ? v : 0.0;
            break;
        case LayerKind::swish:
            for (double &v : x.data())
                v = v * sigmoid(v);
            break;
        case LayerKind::flatten:
            break; // batch rows are already flat vectors
        case LayerKind::l2_normalize:
            for (std::size_t i = 0; i < x.rows(); ++i) {
                double n2 = 0.0;
                for (std::size_t j = 0; j < x.cols(); ++j)
                    n2 += x(i, j) * x(i, j);
                if (!(n2 > 0.0))
                    throw NumericalError("l2_normalize: zero-norm row");
                const double inv = 1.0 / std::sqrt(n2);
                for (std::size_t j = 0; j < x.cols(); ++j)
                    x(i, j) *= inv;
            }
            break;
        case LayerKind::concat:
            break; // unreachable, rejected at construction
        }
    }
    cache.output = std::move(x);
    return cache;
}

RealMatrix Network::backward(const ForwardCache &cache, const RealMatrix &output_grad,
                             NetworkGrads &grads) const {
    if (cache.net_tag != tag_ || cache.inputs.size() != specs_.size())
        throw ValidationError("Network::backward: cache does not belong to this network/forward");
    if (output_grad.rows() != cache.batch || output_grad.cols() != out_width_)
        throw ValidationError("Network::backward: gradient shape mismatch");
    if (grads.dense.size() != params_.size())
        throw ValidationError("Network::backward: gradient buffer shape mismatch");

    RealMatrix g = output_grad;
    std::size_t dense_idx = params_.size();
    for (std::size_t li = specs_.size(); li-- > 0;) {
        const LayerSpec &spec = specs_[li];
        const RealMatrix &x = cache.inputs[li];
        switch (spec.kind) {
        case LayerKind::dense: {
            --dense_idx;
            const DenseParams &p = params_[dense_idx];
            DenseParams &pg = grads.dense[dense_idx];
            pg.w += linalg::matmul_tn(g, x); // fan_out x fan_in
            for (std::size_t i = 0; i < g.rows(); ++i)
                for (std::size_t j = 0; j < g.cols(); ++j)
                    pg.b[j] += g(i, j);
            g = linalg::matmul_nn(g, p.w);
            break;
        }
        case LayerKind::relu:
            for (std::size_t i = 0; i < g.size(); ++i)
                if (x.data()[i] <= 0.0)
                    g.data()[i] = 0.0;
            break;
        case LayerKind::swish:
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double v = x.data()[i];
                const double s = sigmoid(v);
                g.data()[i] *= s * (1.0 + v * (1.0 - s));
            }
            break;
        case LayerKind::flatten:
            break;
        case LayerKind::l2_normalize:
            for (std::size_t i = 0; i < g.rows(); ++i) {
                double n2 = 0.0, dot = 0.0;
                for (std::size_t j = 0; j < g.cols(); ++j)
                    n2 += x(i, j) * x(i, j);
                const double inv = 1.0 / std::sqrt(n2);
                for (std::size_t j = 0; j < g.cols(); ++j)
                    dot += x(i, j) * inv * g(i, j);
                for (std::size_t j = 0; j < g.cols(); ++j)
                    g(i, j) = inv * (g(i, j) - x(i, j) * inv * dot);
            }
            break;
        case LayerKind::concat:
            break;
        }
    }
    return g;
}

NetworkGrads Network::zero_grads() const {
    NetworkGrads g;
    g.dense.reserve(params_.size());
    for (const DenseParams &p : params_) {
        DenseParams z;
        z.w = RealMatrix(p.w.rows(), p.w.cols());
        z.b.assign(p.b.size(), 0.0);
        g.dense.push_back(std::move(z));
    }
    return g;
}

std::size_t Network::param_count() const {
    std::size_t n = 0;
    for (const DenseParams &p : params_)
        n += p.w.size() + p.b.size();
    return n;
}

void Network::flatten_params(std::vector<double> &out) const {
    for (const DenseParams &p : params_) {
        out.insert(out.end(), p.w.data().begin(), p.w.data().end());
        out.insert(out.end(), p.b.begin(), p.b.end());
    }
}

void Network::flatten_grads(const NetworkGrads &grads, std::vector<double> &out) const {
    for (const DenseParams &p : grads.dense) {
        out.insert(out.end(), p.w.data().begin(), p.w.data().end());
        out.insert(out.end(), p.b.begin(), p.b.end());
    }
}

std::size_t Network::assign_params(std::span<const double> flat) {
    std::size_t off = 0;
    for (DenseParams &p : params_) {
        if (off + p.w.size() + p.b.size() > flat.size())
            throw ValidationError("Network::assign_params: flat vector too short");
        for (double &v : p.w.data())
            v = flat[off++];
        for (double &v : p.b)
            v = flat[off++];
    }
    return off;
}

std::uint64_t Network::spec_fingerprint(std::uint64_t h) const {
    for (const LayerSpec &s : specs_) {
        h = fnv1a(std::string_view(kind_name(s.kind)), h);
        h = fnv1a(&s.fan_in, sizeof(s.fan_in), h);
        h = fnv1a(&s.fan_out, sizeof(s.fan_out), h);
    }
    return h;
}

} // namespace ummimo::neural
