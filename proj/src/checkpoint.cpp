#include "ummimo/neural/checkpoint.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ummimo/rng.hpp"

namespace ummimo::neural {

namespace {
constexpr const char *kMagic = "UMCKPT1";
}

std::uint64_t group_fingerprint(const std::vector<const Network *> &nets) {
    std::uint64_t h = fnv1a(std::string_view("net-group"));
    for (const Network *n : nets)
        h = n->spec_fingerprint(h);
    return h;
}

void save_checkpoint(const std::string &path, const std::vector<const Network *> &nets) {
    if (nets.empty())
        throw ValidationError("save_checkpoint: empty network group");
    std::vector<double> flat;
    for (const Network *n : nets)
        n->flatten_params(flat);

    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw ValidationError("save_checkpoint: cannot open '" + path + "' for writing");
    std::fprintf(f, "%s %016" PRIx64 " %zu\n", kMagic, group_fingerprint(nets), flat.size());
    for (double v : flat)
        std::fprintf(f, "%.17g\n", v);
    std::fclose(f);
}

void load_checkpoint(const std::string &path, const std::vector<Network *> &nets) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("load_checkpoint: cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header))
        throw ValidationError("load_checkpoint: '" + path + "' is empty");
    std::istringstream hs(header);
    std::string magic, fp_hex;
    std::size_t count = 0;
    if (!(hs >> magic >> fp_hex >> count) || magic != kMagic)
        throw ValidationError("load_checkpoint: bad header in '" + path + "'");

    std::vector<const Network *> cnets(nets.begin(), nets.end());
    char expect[32];
    std::snprintf(expect, sizeof(expect), "%016" PRIx64, group_fingerprint(cnets));
    if (fp_hex != expect)
        throw ValidationError("load_checkpoint: topology fingerprint mismatch (checkpoint " + fp_hex +
                              ", expected " + expect + ")");

    std::vector<double> flat;
    flat.reserve(count);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            flat.push_back(std::stod(line));
        } catch (const std::exception &) {
            throw ValidationError("load_checkpoint: bad value at line " +
                                  std::to_string(flat.size() + 2));
        }
        if (!std::isfinite(flat.back()))
            throw ValidationError("load_checkpoint: non-finite value at line " +
                                  std::to_string(flat.size() + 1));
    }
    if (flat.size() != count)
        throw ValidationError("load_checkpoint: expected " + std::to_string(count) + " values, got " +
                              std::to_string(flat.size()));

    std::size_t off = 0;
    for (Network *n : nets)
        off += n->assign_params(std::span<const double>(flat).subspan(off));
    if (off != flat.size())
        throw ValidationError("load_checkpoint: value count does not match the network group");
}

} // namespace ummimo::neural
