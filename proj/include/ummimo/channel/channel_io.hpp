#ifndef UMMIMO_CHANNEL_CHANNEL_IO_HPP
#define UMMIMO_CHANNEL_CHANNEL_IO_HPP

#include <string>
#include <vector>

#include "ummimo/channel/channel.hpp"

namespace ummimo::channel {

// Line-oriented text format, lossless at double precision:
//   header:  UMCH1 <n_r> <n_t> <count>
//   record:  <seed> <re> <im> ... (N_r * N_t entries, row-major)
// Import validates shape and finiteness and names the offending record.
void export_channels(const std::vector<ChannelRealization> &realizations, const std::string &path);
std::vector<ChannelRealization> import_channels(const std::string &path);

} // namespace ummimo::channel

#endif
