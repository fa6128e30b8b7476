#ifndef UMMIMO_CONTRASTIVE_MODEL_HPP
#define UMMIMO_CONTRASTIVE_MODEL_HPP

#include "ummimo/linalg/complex_matrix.hpp"
#include "ummimo/neural/network.hpp"

namespace ummimo::cl {

using linalg::ComplexMatrix;
using linalg::cx;
using linalg::RealMatrix;

// Dual-branch encoder over the phase / magnitude planes of a precoder
// matrix, fused into a D_E embedding; a projection head (contrastive space,
// discarded after pretraining) and a prediction head emitting the digital
// factor as magnitude and phase planes.
struct ModelConfig {
    std::size_t n_t = 64;
    std::size_t n_s = 2;
    std::size_t n_rf = 4;
    std::size_t branch_hidden = 128;
    std::size_t branch_out = 64;
    std::size_t d_e = 64; // embedding width
    std::size_t proj_hidden = 64;
    std::size_t d_p = 32; // contrastive space width
    std::size_t pred_hidden_wide = 100;
    std::size_t pred_hidden_narrow = 50;

    std::size_t input_width() const { return n_t * n_s; }
    std::size_t pred_out_width() const { return 2 * n_rf * n_s; }
};

struct EncodeCache {
    neural::ForwardCache phase;
    neural::ForwardCache mag;
    neural::ForwardCache fusion;
};

struct ModelGrads {
    neural::NetworkGrads phase_branch;
    neural::NetworkGrads mag_branch;
    neural::NetworkGrads fusion;
    neural::NetworkGrads projection;
    neural::NetworkGrads prediction;
};

class Model {
  public:
    Model(const ModelConfig &cfg, std::uint64_t seed);

    const ModelConfig &config() const { return cfg_; }

    neural::Network &phase_branch() { return phase_branch_; }
    neural::Network &mag_branch() { return mag_branch_; }
    neural::Network &fusion() { return fusion_; }
    neural::Network &projection() { return projection_; }
    neural::Network &prediction() { return prediction_; }
    const neural::Network &phase_branch() const { return phase_branch_; }
    const neural::Network &mag_branch() const { return mag_branch_; }
    const neural::Network &fusion() const { return fusion_; }
    const neural::Network &projection() const { return projection_; }
    const neural::Network &prediction() const { return prediction_; }

    // batched encoder pass; rows of the result are D_E embeddings
    RealMatrix encode_batch(const std::vector<const ComplexMatrix *> &inputs,
                            EncodeCache *cache = nullptr) const;

    std::vector<double> encode(const ComplexMatrix &f_tilde) const;

    // backpropagate d(loss)/d(embeddings) through fusion and both branches
    void encode_backward(const EncodeCache &cache, const RealMatrix &embedding_grad,
                         ModelGrads &grads) const;

    ModelGrads zero_grads() const;

    std::vector<const neural::Network *> all_nets() const;
    std::vector<neural::Network *> all_nets();
    std::vector<neural::Network *> encoder_nets(); // branches + fusion + projection

  private:
    ModelConfig cfg_;
    neural::Network phase_branch_;
    neural::Network mag_branch_;
    neural::Network fusion_;
    neural::Network projection_;
    neural::Network prediction_;
};

// phase / magnitude input planes, row-major over the matrix entries
void extract_features(const ComplexMatrix &f, RealMatrix &phase_row, RealMatrix &mag_row,
                      std::size_t row);

struct FbbPrediction {
    RealMatrix magnitude; // n_rf x n_s, nonnegative (softplus of the raw head)
    RealMatrix phase;     // n_rf x n_s, radians
    ComplexMatrix f_bb;   // magnitude .* exp(j*phase)
};

// Trained-pipeline path: embedding -> prediction head -> digital factor.
FbbPrediction predict_fbb(const Model &model, const ComplexMatrix &f_tilde);

} // namespace ummimo::cl

#endif
