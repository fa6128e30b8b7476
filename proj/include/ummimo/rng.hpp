#ifndef UMMIMO_RNG_HPP
#define UMMIMO_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace ummimo {

// mt19937_64 is fully specified by the standard, so raw 64-bit draws are
// bit-identical everywhere. The std:: distributions are not; all transforms
// below are spelled out explicitly to keep every seeded draw reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller; second value cached
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // circularly-symmetric complex normal, unit total variance
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    // zero-mean Laplacian with scale b (variance 2b^2), inverse-CDF transform
    double laplace(double scale) {
        const double u = uniform() - 0.5;
        const double s = (u < 0.0) ? -1.0 : 1.0;
        return -scale * s * std::log1p(-2.0 * std::abs(u));
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// FNV-1a over raw bytes; the workhorse behind config fingerprints
inline std::uint64_t fnv1a(const void *data, std::size_t n, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    return fnv1a(s.data(), s.size(), h);
}

// Labeled seed derivation: one master seed fans out into independent,
// reproducible streams (per file, per record, per training stage).
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0) {
    std::uint64_t h = fnv1a(label);
    h = fnv1a(&master, sizeof(master), h);
    h = fnv1a(&index, sizeof(index), h);
    return splitmix64(h);
}

} // namespace ummimo

#endif
