#include "ummimo/csi/csi.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "ummimo/rng.hpp"

namespace ummimo::csi {

void ContrastiveDataset::validate() const {
    if (samples.empty())
        throw ValidationError("ContrastiveDataset: empty sample list");
    if (channel_fingerprints.size() != samples.size())
        throw ValidationError("ContrastiveDataset: fingerprint list out of sync");
    const std::size_t rows = samples.front().clean.rows();
    const std::size_t cols = samples.front().clean.cols();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const CsiSample &s = samples[i];
        const bool ok = s.clean.rows() == rows && s.clean.cols() == cols &&
                        s.view_a.rows() == rows && s.view_a.cols() == cols &&
                        s.view_b.rows() == rows && s.view_b.cols() == cols;
        if (!ok)
            throw ValidationError("ContrastiveDataset: shape mismatch at sample " + std::to_string(i + 1));
    }
}

ComplexMatrix inject_csi_noise(const ComplexMatrix &f, double csi_snr_db, std::uint64_t seed) {
    if (std::isnan(csi_snr_db))
        throw ValidationError("inject_csi_noise: csi_snr_db must be finite or +inf");
    if (std::isinf(csi_snr_db))
        return f;

    const double p_sig = std::pow(linalg::frobenius_norm(f), 2) / static_cast<double>(f.size());
    const double sigma = std::sqrt(p_sig * std::pow(10.0, -csi_snr_db / 10.0));

    Rng rng(seed);
    ComplexMatrix out = f;
    for (cx &z : out.data())
        z += sigma * rng.complex_normal();
    return out;
}

std::vector<CsiSample> make_pairs(const std::vector<ComplexMatrix> &f_opt_batch, double csi_snr_db,
                                  std::uint64_t seed) {
    if (f_opt_batch.empty())
        throw ValidationError("make_pairs: empty batch");
    std::vector<CsiSample> out;
    out.reserve(f_opt_batch.size());
    for (std::size_t i = 0; i < f_opt_batch.size(); ++i) {
        CsiSample s;
        s.clean = f_opt_batch[i];
        s.csi_snr_db = csi_snr_db;
        s.source_seed = derive_seed(seed, "pair", i);
        s.view_a = inject_csi_noise(s.clean, csi_snr_db, derive_seed(s.source_seed, "view-a"));
        s.view_b = inject_csi_noise(s.clean, csi_snr_db, derive_seed(s.source_seed, "view-b"));
        out.push_back(std::move(s));
    }
    return out;
}

void validate_split_hygiene(const std::vector<std::uint64_t> &train_fps,
                            const std::vector<std::uint64_t> &test_fps) {
    std::unordered_set<std::uint64_t> seen(train_fps.begin(), train_fps.end());
    for (std::uint64_t fp : test_fps)
        if (seen.count(fp))
            throw ValidationError("split hygiene: channel fingerprint appears in both train and test");
}

namespace {
constexpr const char *kMagic = "UMCS1";

void write_matrix(std::FILE *f, const ComplexMatrix &m) {
    for (const cx &z : m.data())
        std::fprintf(f, " %.17g %.17g", z.real(), z.imag());
}

ComplexMatrix read_matrix(std::istringstream &ls, std::size_t rows, std::size_t cols, std::size_t rec,
                          const char *name) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i) {
        double re = 0.0, im = 0.0;
        if (!(ls >> re >> im))
            throw ValidationError("import_dataset: record " + std::to_string(rec) + ": truncated " +
                                  name + " matrix");
        if (!std::isfinite(re) || !std::isfinite(im))
            throw ValidationError("import_dataset: record " + std::to_string(rec) + ": non-finite " +
                                  name + " entry");
        m.data()[i] = cx{re, im};
    }
    return m;
}

} // namespace

void export_dataset(const ContrastiveDataset &ds, const std::string &path) {
    ds.validate();
    std::FILE *f = std::fopen(path.c_str(), "w");
    if (!f)
        throw ValidationError("export_dataset: cannot open '" + path + "' for writing");
    const std::size_t nt = ds.samples.front().clean.rows();
    const std::size_t ns = ds.samples.front().clean.cols();
    if (std::isinf(ds.csi_snr_db))
        std::fprintf(f, "%s %zu %zu inf %zu\n", kMagic, nt, ns, ds.samples.size());
    else
        std::fprintf(f, "%s %zu %zu %.17g %zu\n", kMagic, nt, ns, ds.csi_snr_db, ds.samples.size());
    for (std::size_t i = 0; i < ds.samples.size(); ++i) {
        const CsiSample &s = ds.samples[i];
        std::fprintf(f, "%" PRIu64 " %" PRIu64, s.source_seed, ds.channel_fingerprints[i]);
        write_matrix(f, s.clean);
        write_matrix(f, s.view_a);
        write_matrix(f, s.view_b);
        std::fputc('\n', f);
    }
    std::fclose(f);
}

ContrastiveDataset import_dataset(const std::string &path, Split split) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("import_dataset: cannot open '" + path + "'");
    std::string header;
    if (!std::getline(in, header))
        throw ValidationError("import_dataset: '" + path + "' is empty");
    std::istringstream hs(header);
    std::string magic, snr_tok;
    std::size_t nt = 0, ns = 0, count = 0;
    if (!(hs >> magic >> nt >> ns >> snr_tok >> count) || magic != kMagic)
        throw ValidationError("import_dataset: bad header in '" + path + "'");
    if (nt < 1 || ns < 1 || count < 1)
        throw ValidationError("import_dataset: degenerate header in '" + path + "'");

    ContrastiveDataset ds;
    ds.split = split;
    if (snr_tok == "inf") {
        ds.csi_snr_db = kPerfectCsi;
    } else {
        try {
            ds.csi_snr_db = std::stod(snr_tok);
        } catch (const std::exception &) {
            throw ValidationError("import_dataset: bad csi_snr_db in header of '" + path + "'");
        }
    }

    std::string line;
    for (std::size_t rec = 1; rec <= count; ++rec) {
        if (!std::getline(in, line))
            throw ValidationError("import_dataset: record " + std::to_string(rec) + " missing in '" +
                                  path + "'");
        std::istringstream ls(line);
        CsiSample s;
        std::uint64_t fp = 0;
        if (!(ls >> s.source_seed >> fp))
            throw ValidationError("import_dataset: record " + std::to_string(rec) + ": bad metadata");
        s.csi_snr_db = ds.csi_snr_db;
        s.clean = read_matrix(ls, nt, ns, rec, "clean");
        s.view_a = read_matrix(ls, nt, ns, rec, "view_a");
        s.view_b = read_matrix(ls, nt, ns, rec, "view_b");
        double extra;
        if (ls >> extra)
            throw ValidationError("import_dataset: record " + std::to_string(rec) + ": trailing data");
        ds.samples.push_back(std::move(s));
        ds.channel_fingerprints.push_back(fp);
    }
    ds.validate();
    return ds;
}

} // namespace ummimo::csi
