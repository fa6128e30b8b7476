#ifndef UMMIMO_CHANNEL_CHANNEL_HPP
#define UMMIMO_CHANNEL_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "ummimo/linalg/complex_matrix.hpp"

namespace ummimo::channel {

using linalg::ComplexMatrix;
using linalg::cx;

enum class ArrayKind { ula, ura };

// Antenna panel geometry. URA panels are square, indexed row-major with the
// first index sweeping the horizontal axis.
struct ArrayGeometry {
    ArrayKind kind = ArrayKind::ula;
    std::size_t n_elements = 1;
    double element_spacing = 0.5; // wavelengths

    void validate() const;
    std::size_t ura_side() const;
};

// Clustered geometric channel. Stands in for externally simulated ray-traced
// data: same statistical shape (clusters of Laplacian-spread rays around
// uniform centers, optional Ricean line-of-sight term), none of the
// propagation physics.
struct ChannelConfig {
    ArrayGeometry tx_geometry;
    ArrayGeometry rx_geometry;
    std::size_t n_clusters = 3;
    std::size_t rays_per_cluster = 4;
    bool los = true;
    double k_factor_db = 10.0; // LOS power over total NLOS power
    double angle_spread_deg = 10.0;
    double carrier_ghz = 100.0;
    std::uint64_t seed = 0;

    void validate() const;
    std::uint64_t fingerprint() const; // hash over everything except seed
};

struct ChannelRealization {
    ComplexMatrix h; // N_r x N_t
    std::uint64_t config_fingerprint = 0;
    std::uint64_t seed = 0;

    // per-realization identity used for split hygiene
    std::uint64_t fingerprint() const;
};

// Unit-norm steering vector. ULA phase profile is exp(j*2*pi*spacing*n*sin(az));
// URA element (p, q) uses p*sin(az)*cos(el) + q*sin(el). Elevation is ignored
// for ULA panels.
std::vector<cx> array_response(const ArrayGeometry &geom, double azimuth, double elevation);

// Sum of per-ray rank-1 outer products, scaled so E||H||_F^2 = N_t * N_r.
// Fully deterministic for a fixed (config, seed): the draw order is LOS gains
// and angles first, then clusters in order, rays nested.
ChannelRealization generate_channel(const ChannelConfig &config);

} // namespace ummimo::channel

#endif
