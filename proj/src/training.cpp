#include "ummimo/contrastive/training.hpp"

#include <cmath>
#include <numeric>

#include "ummimo/contrastive/ntxent.hpp"
#include "ummimo/contrastive/selfsup.hpp"
#include "ummimo/linalg/svd.hpp"
#include "ummimo/neural/adam.hpp"
#include "ummimo/rng.hpp"

namespace ummimo::cl {

using neural::AdamOptions;
using neural::AdamState;

void TrainConfig::validate() const {
    if (batch_size < 2)
        throw ValidationError("TrainConfig: batch_size must be >= 2");
    if (epochs < 1)
        throw ValidationError("TrainConfig: epochs must be >= 1");
    if (!(temperature > 0.0))
        throw ValidationError("TrainConfig: temperature must be positive");
    if (!(learning_rate > 0.0))
        throw ValidationError("TrainConfig: learning_rate must be positive");
}

namespace {

std::size_t group_param_count(const std::vector<neural::Network *> &nets) {
    std::size_t n = 0;
    for (auto *net : nets)
        n += net->param_count();
    return n;
}

void group_flatten(const std::vector<neural::Network *> &nets, std::vector<double> &out) {
    out.clear();
    for (auto *net : nets)
        net->flatten_params(out);
}

void group_assign(const std::vector<neural::Network *> &nets, const std::vector<double> &flat) {
    std::size_t off = 0;
    for (auto *net : nets)
        off += net->assign_params(std::span<const double>(flat).subspan(off));
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng &rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[rng.next_u64() % i]);
    return idx;
}

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

} // namespace

std::vector<double> pretrain(Model &model, const csi::ContrastiveDataset &dataset,
                             const TrainConfig &config, const EpochMonitor &monitor) {
    config.validate();
    dataset.validate();

    std::vector<neural::Network *> nets = model.encoder_nets();
    AdamState adam(group_param_count(nets));
    AdamOptions adam_opts;
    adam_opts.lr = config.learning_rate;

    Rng shuffle_rng(derive_seed(config.seed, "pretrain-shuffle"));
    const std::size_t n = dataset.samples.size();
    std::vector<double> history;
    std::vector<double> flat, gflat;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::size_t> order = shuffled_indices(n, shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;

        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, n - start);
            if (count < 2)
                break; // a single pair has no negatives worth a step

            std::vector<const ComplexMatrix *> views;
            std::vector<std::size_t> pair_index(2 * count);
            views.reserve(2 * count);
            for (std::size_t k = 0; k < count; ++k) {
                const csi::CsiSample &s = dataset.samples[order[start + k]];
                views.push_back(&s.view_a);
                views.push_back(&s.view_b);
                pair_index[2 * k] = 2 * k + 1;
                pair_index[2 * k + 1] = 2 * k;
            }

            EncodeCache ecache;
            RealMatrix embeddings = model.encode_batch(views, &ecache);
            neural::ForwardCache pcache = model.projection().forward(embeddings);
            NtxentResult nt = ntxent_loss(pcache.output, pair_index, config.temperature);
            if (!std::isfinite(nt.loss))
                throw NumericalError("pretrain: loss diverged at epoch " + std::to_string(epoch + 1));

            ModelGrads grads = model.zero_grads();
            RealMatrix demb = model.projection().backward(pcache, nt.projection_grads, grads.projection);
            model.encode_backward(ecache, demb, grads);

            gflat.clear();
            model.phase_branch().flatten_grads(grads.phase_branch, gflat);
            model.mag_branch().flatten_grads(grads.mag_branch, gflat);
            model.fusion().flatten_grads(grads.fusion, gflat);
            model.projection().flatten_grads(grads.projection, gflat);

            group_flatten(nets, flat);
            neural::adam_step(flat, gflat, adam, adam_opts);
            group_assign(nets, flat);

            epoch_loss += nt.loss;
            ++batches;
        }

        if (batches == 0)
            throw ValidationError("pretrain: dataset too small for one batch");
        history.push_back(epoch_loss / static_cast<double>(batches));
        if (monitor)
            monitor(epoch + 1, history.back());
    }
    return history;
}

FinetuneResult finetune(Model &model, const csi::ContrastiveDataset &dataset,
                        const TrainConfig &config) {
    config.validate();
    dataset.validate();

    std::vector<neural::Network *> nets{&model.prediction()};
    if (!config.freeze_encoder) {
        nets = {&model.phase_branch(), &model.mag_branch(), &model.fusion(), &model.prediction()};
    }
    AdamState adam(group_param_count(nets));
    AdamOptions adam_opts;
    adam_opts.lr = config.learning_rate;

    const ModelConfig &cfg = model.config();
    const std::size_t plane = cfg.n_rf * cfg.n_s;
    Rng shuffle_rng(derive_seed(config.seed, "finetune-shuffle"));
    const std::size_t n = dataset.samples.size();

    FinetuneResult result;
    std::vector<double> flat, gflat;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::vector<std::size_t> order = shuffled_indices(n, shuffle_rng);
        double epoch_loss = 0.0;
        std::size_t batches = 0;

        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, n - start);

            std::vector<const ComplexMatrix *> views;
            views.reserve(2 * count);
            for (std::size_t k = 0; k < count; ++k) {
                const csi::CsiSample &s = dataset.samples[order[start + k]];
                views.push_back(&s.view_a);
                views.push_back(&s.view_b);
            }
            const std::size_t rows = views.size();

            EncodeCache ecache;
            RealMatrix embeddings = model.encode_batch(views, &ecache);
            neural::ForwardCache hcache = model.prediction().forward(embeddings);
            const RealMatrix &raw = hcache.output;

            RealMatrix raw_grad(rows, raw.cols());
            double batch_loss = 0.0;
            bool degenerate = false;
            for (std::size_t r = 0; r < rows && !degenerate; ++r) {
                ComplexMatrix f_bb(cfg.n_rf, cfg.n_s);
                for (std::size_t i = 0; i < plane; ++i)
                    f_bb.data()[i] = std::polar(softplus(raw(r, i)), raw(r, plane + i));

                const csi::CsiSample &s = dataset.samples[order[start + r / 2]];
                try {
                    SelfsupResult sl = selfsup_loss(s.clean, f_bb, config.project_frf_in_loss);
                    batch_loss += sl.loss;
                    const double scale = 1.0 / static_cast<double>(rows);
                    for (std::size_t i = 0; i < plane; ++i) {
                        const cx g = sl.grad_f_bb.data()[i];
                        const cx unit = std::polar(1.0, raw(r, plane + i));
                        const double m = std::abs(f_bb.data()[i]);
                        // d loss / d magnitude and d loss / d phase, then the
                        // softplus chain on the magnitude half
                        const double dm = (std::conj(g) * unit).real();
                        const double dp = (std::conj(g) * cx{0.0, 1.0} * f_bb.data()[i]).real();
                        raw_grad(r, i) = scale * dm * neural::sigmoid(raw(r, i));
                        raw_grad(r, plane + i) = scale * dp;
                    }
                } catch (const DegeneratePredictionError &) {
                    degenerate = true;
                }
            }
            if (degenerate) {
                ++result.skipped_batches;
                continue;
            }
            if (!std::isfinite(batch_loss))
                throw NumericalError("finetune: loss diverged at epoch " + std::to_string(epoch + 1));

            ModelGrads grads = model.zero_grads();
            RealMatrix demb = model.prediction().backward(hcache, raw_grad, grads.prediction);

            gflat.clear();
            if (!config.freeze_encoder) {
                model.encode_backward(ecache, demb, grads);
                model.phase_branch().flatten_grads(grads.phase_branch, gflat);
                model.mag_branch().flatten_grads(grads.mag_branch, gflat);
                model.fusion().flatten_grads(grads.fusion, gflat);
            }
            model.prediction().flatten_grads(grads.prediction, gflat);

            group_flatten(nets, flat);
            neural::adam_step(flat, gflat, adam, adam_opts);
            group_assign(nets, flat);

            epoch_loss += batch_loss / static_cast<double>(rows);
            ++batches;
        }

        if (batches == 0)
            throw NumericalError("finetune: every batch skipped (degenerate predictions)");
        result.loss_history.push_back(epoch_loss / static_cast<double>(batches));
    }
    return result;
}

double pair_clustering_ratio(const Model &model, std::span<const csi::CsiSample> samples) {
    if (samples.size() < 2)
        throw ValidationError("pair_clustering_ratio: need at least two samples");

    std::vector<const ComplexMatrix *> views;
    views.reserve(2 * samples.size());
    for (const csi::CsiSample &s : samples) {
        views.push_back(&s.view_a);
        views.push_back(&s.view_b);
    }
    RealMatrix e = model.encode_batch(views);

    auto dist = [&](std::size_t i, std::size_t j) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < e.cols(); ++k) {
            const double d = e(i, k) - e(j, k);
            d2 += d * d;
        }
        return std::sqrt(d2);
    };

    double intra = 0.0;
    for (std::size_t s = 0; s < samples.size(); ++s)
        intra += dist(2 * s, 2 * s + 1);
    intra /= static_cast<double>(samples.size());

    double inter = 0.0;
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < samples.size(); ++a)
        for (std::size_t b = a + 1; b < samples.size(); ++b) {
            inter += dist(2 * a, 2 * b) + dist(2 * a, 2 * b + 1) + dist(2 * a + 1, 2 * b) +
                     dist(2 * a + 1, 2 * b + 1);
            pairs += 4;
        }
    inter /= static_cast<double>(pairs);
    if (!(inter > 0.0))
        throw NumericalError("pair_clustering_ratio: all embeddings collapsed to one point");
    return intra / inter;
}

bf::PrecoderSet infer_precoders(const Model &model, const ComplexMatrix &f_tilde_opt,
                                std::size_t n_s) {
    const ModelConfig &cfg = model.config();
    if (n_s != cfg.n_s)
        throw ValidationError("infer_precoders: n_s does not match the trained model");

    FbbPrediction pred = predict_fbb(model, f_tilde_opt);
    linalg::SvdResult sv = linalg::svd(pred.f_bb);
    if (sv.s.back() <= 1e-12 * sv.s.front())
        throw DegeneratePredictionError("infer_precoders: predicted f_bb is rank deficient");

    bf::PrecoderSet set;
    set.f_opt = f_tilde_opt;
    set.f_rf = linalg::phase_extract(f_tilde_opt * linalg::pinv(pred.f_bb));
    set.f_bb = bf::normalize_power(set.f_rf, pred.f_bb, n_s);
    set.dims = bf::Dims{cfg.n_t, 0, cfg.n_rf, cfg.n_s};
    return set;
}

} // namespace ummimo::cl
