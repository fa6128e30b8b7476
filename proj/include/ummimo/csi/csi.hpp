#ifndef UMMIMO_CSI_CSI_HPP
#define UMMIMO_CSI_CSI_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ummimo/linalg/complex_matrix.hpp"

namespace ummimo::csi {

using linalg::ComplexMatrix;
using linalg::cx;

// perfect-CSI flag value for any csi_snr_db field
inline constexpr double kPerfectCsi = std::numeric_limits<double>::infinity();

// One training example: the clean optimal precoder plus two independently
// corrupted views of it (the positive pair).
struct CsiSample {
    ComplexMatrix clean;
    ComplexMatrix view_a;
    ComplexMatrix view_b;
    double csi_snr_db = kPerfectCsi;
    std::uint64_t source_seed = 0;
};

enum class Split { train, test };

struct ContrastiveDataset {
    std::vector<CsiSample> samples;
    std::vector<std::uint64_t> channel_fingerprints; // parallel to samples
    Split split = Split::train;
    double csi_snr_db = kPerfectCsi;

    void validate() const;
};

// Additive circularly-symmetric complex Gaussian noise at a target SNR
// defined per entry: noise variance = mean per-entry power of f / 10^(snr/10).
// An infinite csi_snr_db returns the input untouched.
ComplexMatrix inject_csi_noise(const ComplexMatrix &f, double csi_snr_db, std::uint64_t seed);

// Two independent noisy views per input matrix. Negatives are implicit: in a
// training batch every view from a different sample acts as one.
std::vector<CsiSample> make_pairs(const std::vector<ComplexMatrix> &f_opt_batch, double csi_snr_db,
                                  std::uint64_t seed);

// train/test leakage guard on per-realization identities
void validate_split_hygiene(const std::vector<std::uint64_t> &train_fps,
                            const std::vector<std::uint64_t> &test_fps);

// Line-oriented dataset file, mirroring the channel format:
//   header:  UMCS1 <n_t> <n_s> <csi_snr_db|inf> <count>
//   record:  <seed> <fingerprint> then clean, view_a, view_b entries as
//            re/im pairs, row-major
void export_dataset(const ContrastiveDataset &ds, const std::string &path);
ContrastiveDataset import_dataset(const std::string &path, Split split);

} // namespace ummimo::csi

#endif
