#ifndef UMMIMO_CONTRASTIVE_TRAINING_HPP
#define UMMIMO_CONTRASTIVE_TRAINING_HPP

#include <functional>
#include <span>

#include "ummimo/beamforming/precoding.hpp"
#include "ummimo/contrastive/model.hpp"
#include "ummimo/csi/csi.hpp"

namespace ummimo::cl {

struct TrainConfig {
    std::size_t batch_size = 32;
    std::size_t epochs = 30;
    double temperature = 0.1;
    double csi_snr_db = 20.0; // augmentation level of the dataset views
    double learning_rate = 1e-3;
    std::uint64_t seed = 0;
    bool freeze_encoder = true;      // finetune: leave encoder weights alone
    bool project_frf_in_loss = true; // selfsup_loss variant (see selfsup.hpp)

    void validate() const;
};

using EpochMonitor = std::function<void(std::size_t epoch, double mean_loss)>;

// Contrastive pretraining of encoder + projection head over positive pairs.
// Returns mean loss per epoch. Deterministic under config.seed.
std::vector<double> pretrain(Model &model, const csi::ContrastiveDataset &dataset,
                             const TrainConfig &config, const EpochMonitor &monitor = {});

struct FinetuneResult {
    std::vector<double> loss_history; // mean per epoch
    std::size_t skipped_batches = 0;  // rank-collapsed predictions
};

// Second stage: trains the prediction head against the factorization loss,
// clean target in the loss, noisy views at the input. Encoder frozen unless
// configured otherwise.
FinetuneResult finetune(Model &model, const csi::ContrastiveDataset &dataset,
                        const TrainConfig &config);

// mean intra-pair embedding distance over mean inter-pair distance; the
// quantity that drops when augmented views of one sample cluster together
double pair_clustering_ratio(const Model &model, std::span<const csi::CsiSample> samples);

// End-to-end inference: predict the digital factor, recover the analog
// factor from the noisy input via phase projection, normalize transmit power.
bf::PrecoderSet infer_precoders(const Model &model, const ComplexMatrix &f_tilde_opt,
                                std::size_t n_s);

} // namespace ummimo::cl

#endif
