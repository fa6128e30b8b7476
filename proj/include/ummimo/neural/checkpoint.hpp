#ifndef UMMIMO_NEURAL_CHECKPOINT_HPP
#define UMMIMO_NEURAL_CHECKPOINT_HPP

#include <string>
#include <vector>

#include "ummimo/neural/network.hpp"

namespace ummimo::neural {

// Text checkpoint holding a group of networks as one flat parameter vector:
//   header:  UMCKPT1 <spec-fingerprint-hex> <value-count>
//   body:    one decimal value per line, full double precision
// Loading into a group with a different topology fingerprint is refused.
void save_checkpoint(const std::string &path, const std::vector<const Network *> &nets);
void load_checkpoint(const std::string &path, const std::vector<Network *> &nets);

std::uint64_t group_fingerprint(const std::vector<const Network *> &nets);

} // namespace ummimo::neural

#endif
