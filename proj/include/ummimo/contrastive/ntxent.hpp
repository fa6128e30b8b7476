#ifndef UMMIMO_CONTRASTIVE_NTXENT_HPP
#define UMMIMO_CONTRASTIVE_NTXENT_HPP

#include <cstddef>
#include <vector>

#include "ummimo/linalg/real_matrix.hpp"

namespace ummimo::cl {

using linalg::RealMatrix;

// Temperature-scaled cross entropy over one positive and the remaining rows
// as negatives. Rows of `projections` must be unit L2 norm; pair_index is a
// perfect matching (involution without fixed points).
struct NtxentResult {
    double loss = 0.0;                    // mean over all 2N anchors
    std::vector<double> per_anchor;       // individual anchor losses
    RealMatrix projection_grads;          // d(mean loss) / d(projections)
};

NtxentResult ntxent_loss(const RealMatrix &projections, const std::vector<std::size_t> &pair_index,
                         double tau);

// Single-anchor value with an explicit candidate set: the positive plus any
// number of negatives. The analytic unit behind the batch loss.
double ntxent_anchor_loss(const std::vector<double> &anchor, const std::vector<double> &positive,
                          const std::vector<std::vector<double>> &negatives, double tau);

} // namespace ummimo::cl

#endif
