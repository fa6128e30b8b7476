#include "ummimo/contrastive/model.hpp"

#include <cmath>

#include "ummimo/rng.hpp"

namespace ummimo::cl {

using neural::LayerKind;
using neural::LayerSpec;
using neural::Network;

namespace {

std::vector<LayerSpec> branch_specs(const ModelConfig &c) {
    return {{LayerKind::dense, c.input_width(), c.branch_hidden},
            {LayerKind::relu},
            {LayerKind::dense, c.branch_hidden, c.branch_out},
            {LayerKind::relu}};
}

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

} // namespace

Model::Model(const ModelConfig &cfg, std::uint64_t seed)
    : cfg_(cfg),
      phase_branch_(branch_specs(cfg), derive_seed(seed, "phase-branch")),
      mag_branch_(branch_specs(cfg), derive_seed(seed, "mag-branch")),
      fusion_({{LayerKind::dense, 2 * cfg.branch_out, cfg.d_e}}, derive_seed(seed, "fusion")),
      projection_({{LayerKind::flatten},
                   {LayerKind::dense, cfg.d_e, cfg.proj_hidden},
                   {LayerKind::relu},
                   {LayerKind::dense, cfg.proj_hidden, cfg.d_p},
                   {LayerKind::l2_normalize}},
                  derive_seed(seed, "projection")),
      prediction_({{LayerKind::dense, cfg.d_e, cfg.pred_hidden_wide},
                   {LayerKind::swish},
                   {LayerKind::dense, cfg.pred_hidden_wide, cfg.pred_hidden_narrow},
                   {LayerKind::swish},
                   {LayerKind::dense, cfg.pred_hidden_narrow, cfg.pred_out_width()}},
                  derive_seed(seed, "prediction")) {
    if (cfg.n_s > cfg.n_rf || cfg.n_rf > cfg.n_t)
        throw ValidationError("ModelConfig: need n_s <= n_rf <= n_t");
}

void extract_features(const ComplexMatrix &f, RealMatrix &phase_row, RealMatrix &mag_row,
                      std::size_t row) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        const cx z = f.data()[i];
        phase_row(row, i) = std::arg(z);
        mag_row(row, i) = std::abs(z);
    }
}

RealMatrix Model::encode_batch(const std::vector<const ComplexMatrix *> &inputs,
                               EncodeCache *cache) const {
    if (inputs.empty())
        throw ValidationError("encode_batch: empty input list");
    const std::size_t width = cfg_.input_width();
    RealMatrix xp(inputs.size(), width), xm(inputs.size(), width);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i]->rows() != cfg_.n_t || inputs[i]->cols() != cfg_.n_s)
            throw ValidationError("encode_batch: input " + std::to_string(i) +
                                  " does not match the trained (n_t, n_s)");
        extract_features(*inputs[i], xp, xm, i);
    }

    neural::ForwardCache pc = phase_branch_.forward(xp);
    neural::ForwardCache mc = mag_branch_.forward(xm);
    neural::ForwardCache fc = fusion_.forward(linalg::hcat(pc.output, mc.output));
    RealMatrix out = fc.output;
    if (cache) {
        cache->phase = std::move(pc);
        cache->mag = std::move(mc);
        cache->fusion = std::move(fc);
    }
    return out;
}

std::vector<double> Model::encode(const ComplexMatrix &f_tilde) const {
    RealMatrix e = encode_batch({&f_tilde});
    return e.data();
}

void Model::encode_backward(const EncodeCache &cache, const RealMatrix &embedding_grad,
                            ModelGrads &grads) const {
    RealMatrix g_fused = fusion_.backward(cache.fusion, embedding_grad, grads.fusion);
    RealMatrix gp, gm;
    linalg::hsplit(g_fused, cfg_.branch_out, gp, gm);
    phase_branch_.backward(cache.phase, gp, grads.phase_branch);
    mag_branch_.backward(cache.mag, gm, grads.mag_branch);
}

ModelGrads Model::zero_grads() const {
    return ModelGrads{phase_branch_.zero_grads(), mag_branch_.zero_grads(), fusion_.zero_grads(),
                      projection_.zero_grads(), prediction_.zero_grads()};
}

std::vector<const neural::Network *> Model::all_nets() const {
    return {&phase_branch_, &mag_branch_, &fusion_, &projection_, &prediction_};
}

std::vector<neural::Network *> Model::all_nets() {
    return {&phase_branch_, &mag_branch_, &fusion_, &projection_, &prediction_};
}

std::vector<neural::Network *> Model::encoder_nets() {
    return {&phase_branch_, &mag_branch_, &fusion_, &projection_};
}

FbbPrediction predict_fbb(const Model &model, const ComplexMatrix &f_tilde) {
    const ModelConfig &cfg = model.config();
    RealMatrix emb = model.encode_batch({&f_tilde});
    RealMatrix raw = model.prediction().output(emb);

    FbbPrediction out;
    out.magnitude = RealMatrix(cfg.n_rf, cfg.n_s);
    out.phase = RealMatrix(cfg.n_rf, cfg.n_s);
    out.f_bb = ComplexMatrix(cfg.n_rf, cfg.n_s);
    const std::size_t plane = cfg.n_rf * cfg.n_s;
    for (std::size_t i = 0; i < plane; ++i) {
        const double m = softplus(raw(0, i));
        const double p = raw(0, plane + i);
        out.magnitude.data()[i] = m;
        out.phase.data()[i] = p;
        out.f_bb.data()[i] = std::polar(m, p);
    }
    return out;
}

} // namespace ummimo::cl
