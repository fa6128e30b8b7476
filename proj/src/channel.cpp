#include "ummimo/channel/channel.hpp"

#include <cmath>
#include <string>

#include "ummimo/rng.hpp"

namespace ummimo::channel {

void ArrayGeometry::validate() const {
    if (n_elements < 1)
        throw ValidationError("ArrayGeometry: n_elements must be >= 1");
    if (!(element_spacing > 0.0) || !std::isfinite(element_spacing))
        throw ValidationError("ArrayGeometry: element_spacing must be positive");
    if (kind == ArrayKind::ura) {
        const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_elements))));
        if (side * side != n_elements)
            throw ValidationError("ArrayGeometry: URA requires a perfect-square element count, got " +
                                  std::to_string(n_elements));
    }
}

std::size_t ArrayGeometry::ura_side() const {
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n_elements))));
}

void ChannelConfig::validate() const {
    tx_geometry.validate();
    rx_geometry.validate();
    if (n_clusters < 1)
        throw ValidationError("ChannelConfig: n_clusters must be >= 1");
    if (rays_per_cluster < 1)
        throw ValidationError("ChannelConfig: rays_per_cluster must be >= 1");
    if (!std::isfinite(k_factor_db))
        throw ValidationError("ChannelConfig: k_factor_db must be finite");
    if (!(angle_spread_deg > 0.0) || !(angle_spread_deg < 90.0))
        throw ValidationError("ChannelConfig: angle_spread_deg must lie in (0, 90)");
    if (!(carrier_ghz > 0.0))
        throw ValidationError("ChannelConfig: carrier_ghz must be positive");
}

std::uint64_t ChannelConfig::fingerprint() const {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%d:%zu:%.17g|%d:%zu:%.17g|%zu:%zu:%d:%.17g:%.17g:%.17g",
                  static_cast<int>(tx_geometry.kind), tx_geometry.n_elements, tx_geometry.element_spacing,
                  static_cast<int>(rx_geometry.kind), rx_geometry.n_elements, rx_geometry.element_spacing,
                  n_clusters, rays_per_cluster, los ? 1 : 0, k_factor_db, angle_spread_deg, carrier_ghz);
    return fnv1a(std::string_view(buf));
}

std::uint64_t ChannelRealization::fingerprint() const {
    std::uint64_t h = fnv1a(&config_fingerprint, sizeof(config_fingerprint));
    h = fnv1a(&seed, sizeof(seed), h);
    return splitmix64(h);
}

std::vector<cx> array_response(const ArrayGeometry &geom, double azimuth, double elevation) {
    geom.validate();
    if (!std::isfinite(azimuth) || !std::isfinite(elevation))
        throw ValidationError("array_response: angles must be finite");

    const std::size_t n = geom.n_elements;
    std::vector<cx> a(n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double two_pi_d = 2.0 * M_PI * geom.element_spacing;

    if (geom.kind == ArrayKind::ula) {
        const double step = two_pi_d * std::sin(azimuth);
        for (std::size_t i = 0; i < n; ++i)
            a[i] = std::polar(scale, step * static_cast<double>(i));
    } else {
        const std::size_t side = geom.ura_side();
        const double horiz = two_pi_d * std::sin(azimuth) * std::cos(elevation);
        const double vert = two_pi_d * std::sin(elevation);
        for (std::size_t q = 0; q < side; ++q)
            for (std::size_t p = 0; p < side; ++p)
                a[q * side + p] =
                    std::polar(scale, horiz * static_cast<double>(p) + vert * static_cast<double>(q));
    }
    return a;
}

namespace {

void add_ray(ComplexMatrix &h, cx gain, const std::vector<cx> &ar, const std::vector<cx> &at) {
    for (std::size_t r = 0; r < ar.size(); ++r) {
        const cx g = gain * ar[r];
        for (std::size_t t = 0; t < at.size(); ++t)
            h(r, t) += g * std::conj(at[t]);
    }
}

} // namespace

ChannelRealization generate_channel(const ChannelConfig &config) {
    config.validate();
    Rng rng(config.seed);

    const std::size_t nt = config.tx_geometry.n_elements;
    const std::size_t nr = config.rx_geometry.n_elements;
    const std::size_t n_nlos = config.n_clusters * config.rays_per_cluster;
    const std::size_t n_paths = n_nlos + (config.los ? 1 : 0);

    // power split: LOS carries K/(K+1) of the total, NLOS rays share the rest
    const double k_linear = std::pow(10.0, config.k_factor_db / 10.0);
    const double total = static_cast<double>(n_paths);
    const double p_los = config.los ? total * k_linear / (k_linear + 1.0) : 0.0;
    const double nlos_var =
        config.los ? total / (static_cast<double>(n_nlos) * (k_linear + 1.0)) : 1.0;
    const double nlos_sigma = std::sqrt(nlos_var);

    ComplexMatrix h(nr, nt);
    const double spread = config.angle_spread_deg * M_PI / 180.0;

    if (config.los) {
        const double az_t = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const double el_t = rng.uniform(-M_PI / 4.0, M_PI / 4.0);
        const double az_r = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const double el_r = rng.uniform(-M_PI / 4.0, M_PI / 4.0);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        const cx gain = std::polar(std::sqrt(p_los), phase);
        add_ray(h, gain, array_response(config.rx_geometry, az_r, el_r),
                array_response(config.tx_geometry, az_t, el_t));
    }

    for (std::size_t c = 0; c < config.n_clusters; ++c) {
        const double caz_t = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const double cel_t = rng.uniform(-M_PI / 4.0, M_PI / 4.0);
        const double caz_r = rng.uniform(-M_PI / 2.0, M_PI / 2.0);
        const double cel_r = rng.uniform(-M_PI / 4.0, M_PI / 4.0);
        for (std::size_t ray = 0; ray < config.rays_per_cluster; ++ray) {
            const double az_t = caz_t + rng.laplace(spread);
            const double el_t = cel_t + rng.laplace(spread);
            const double az_r = caz_r + rng.laplace(spread);
            const double el_r = cel_r + rng.laplace(spread);
            const cx gain = nlos_sigma * rng.complex_normal();
            add_ray(h, gain, array_response(config.rx_geometry, az_r, el_r),
                    array_response(config.tx_geometry, az_t, el_t));
        }
    }

    const double scale = std::sqrt(static_cast<double>(nt * nr) / total);
    h *= cx{scale, 0.0};

    return ChannelRealization{std::move(h), config.fingerprint(), config.seed};
}

} // namespace ummimo::channel
