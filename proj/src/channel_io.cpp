#include "ummimo/channel/channel_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ummimo/rng.hpp"

namespace ummimo::channel {

namespace {
constexpr const char *kMagic = "UMCH1";
}

void export_channels(const std::vector<ChannelRealization> &realizations, const std::string &path) {
    if (realizations.empty())
        throw ValidationError("export_channels: nothing to export");
    const std::size_t nr = realizations.front().h.rows();
    const std::size_t nt = realizations.front().h.cols();
    for (std::size_t i = 0; i < realizations.size(); ++i)
        if (realizations[i].h.rows() != nr || realizations[i].h.cols() != nt)
            throw ValidationError("export_channels: record " + std::to_string(i + 1) +
                                  " has inconsistent dimensions");

    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw ValidationError("export_channels: cannot open '" + path + "' for writing");
    std::fprintf(f, "%s %zu %zu %zu\n", kMagic, nr, nt, realizations.size());
    for (const auto &r : realizations) {
        std::fprintf(f, "%" PRIu64, r.seed);
        for (const cx &z : r.h.data())
            std::fprintf(f, " %.17g %.17g", z.real(), z.imag());
        std::fputc('\n', f);
    }
    std::fclose(f);
}

std::vector<ChannelRealization> import_channels(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("import_channels: cannot open '" + path + "'");

    std::string header;
    if (!std::getline(in, header))
        throw ValidationError("import_channels: '" + path + "' is empty");
    std::istringstream hs(header);
    std::string magic;
    std::size_t nr = 0, nt = 0, count = 0;
    if (!(hs >> magic >> nr >> nt >> count) || magic != kMagic)
        throw ValidationError("import_channels: bad header in '" + path + "'");
    if (nr < 1 || nt < 1 || count < 1)
        throw ValidationError("import_channels: degenerate header in '" + path + "'");

    // imported data has no generator config; identity comes from the stream
    // shape plus each record's seed
    std::uint64_t fp = fnv1a(std::string_view("imported-channel-file"));
    fp = fnv1a(&nr, sizeof(nr), fp);
    fp = fnv1a(&nt, sizeof(nt), fp);
    fp = splitmix64(fp);

    std::vector<ChannelRealization> out;
    out.reserve(count);
    std::string line;
    for (std::size_t rec = 1; rec <= count; ++rec) {
        if (!std::getline(in, line))
            throw ValidationError("import_channels: record " + std::to_string(rec) + " missing in '" +
                                  path + "'");
        std::istringstream ls(line);
        ChannelRealization r;
        r.config_fingerprint = fp;
        if (!(ls >> r.seed))
            throw ValidationError("import_channels: record " + std::to_string(rec) + ": bad seed field");
        r.h = ComplexMatrix(nr, nt);
        for (std::size_t i = 0; i < nr * nt; ++i) {
            double re = 0.0, im = 0.0;
            if (!(ls >> re >> im))
                throw ValidationError("import_channels: record " + std::to_string(rec) +
                                      ": truncated at entry " + std::to_string(i + 1));
            if (!std::isfinite(re) || !std::isfinite(im))
                throw ValidationError("import_channels: record " + std::to_string(rec) +
                                      ": non-finite entry " + std::to_string(i + 1));
            r.h.data()[i] = cx{re, im};
        }
        double extra;
        if (ls >> extra)
            throw ValidationError("import_channels: record " + std::to_string(rec) +
                                  ": more entries than the header dimensions allow");
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace ummimo::channel
