#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "ummimo/channel/channel.hpp"
#include "ummimo/channel/channel_io.hpp"
#include "ummimo/linalg/svd.hpp"
#include "ummimo/rng.hpp"

using namespace ummimo;
using namespace ummimo::channel;

namespace {

ChannelConfig small_config(std::uint64_t seed) {
    ChannelConfig cfg;
    cfg.tx_geometry = {ArrayKind::ula, 16, 0.5};
    cfg.rx_geometry = {ArrayKind::ula, 4, 0.5};
    cfg.n_clusters = 3;
    cfg.rays_per_cluster = 4;
    cfg.los = true;
    cfg.k_factor_db = 10.0;
    cfg.angle_spread_deg = 10.0;
    cfg.seed = seed;
    return cfg;
}

double norm2(const std::vector<cx> &v) {
    double s = 0.0;
    for (const cx &z : v)
        s += std::norm(z);
    return std::sqrt(s);
}

// fraction of channel energy on the LOS rank-1 direction, averaged over draws
double mean_los_fraction(ChannelConfig cfg, int draws) {
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
        cfg.seed = derive_seed(1000, "los-frac", static_cast<std::uint64_t>(i));
        ChannelRealization r = generate_channel(cfg);
        linalg::SvdResult s = linalg::svd(r.h);
        const double total = linalg::frobenius_norm(r.h);
        acc += (s.s[0] * s.s[0]) / (total * total);
    }
    return acc / draws;
}

} // namespace

TEST_CASE("array_response broadside ULA") {
    std::vector<cx> a = array_response({ArrayKind::ula, 4, 0.5}, 0.0, 0.0);
    for (const cx &z : a)
        CHECK(std::abs(z - cx{0.5, 0.0}) < 1e-15);
}

TEST_CASE("array_response endfire two-element ULA") {
    std::vector<cx> a = array_response({ArrayKind::ula, 2, 0.5}, M_PI / 2.0, 0.0);
    CHECK(std::abs(a[0] - cx{M_SQRT1_2, 0.0}) < 1e-12);
    CHECK(std::abs(a[1] - cx{-M_SQRT1_2, 0.0}) < 1e-12);
}

TEST_CASE("array_response URA unit norm at arbitrary angles") {
    std::vector<cx> a = array_response({ArrayKind::ura, 4, 0.5}, 0.7, -0.3);
    CHECK(std::abs(norm2(a) - 1.0) < 1e-12);
    a = array_response({ArrayKind::ura, 16, 0.37}, -1.1, 0.9);
    CHECK(std::abs(norm2(a) - 1.0) < 1e-12);

    CHECK_THROWS_AS(array_response({ArrayKind::ura, 8, 0.5}, 0.0, 0.0), ValidationError);
}

TEST_CASE("single-path channel is rank one") {
    ChannelConfig cfg = small_config(42);
    cfg.n_clusters = 1;
    cfg.rays_per_cluster = 1;
    cfg.los = false;
    ChannelRealization r = generate_channel(cfg);
    linalg::SvdResult s = linalg::svd(r.h);
    CHECK(s.s[1] / s.s[0] < 1e-10);
}

TEST_CASE("channel generation is deterministic") {
    ChannelConfig cfg = small_config(1234);
    ChannelRealization a = generate_channel(cfg);
    ChannelRealization b = generate_channel(cfg);
    CHECK(a.h.data() == b.h.data());
    CHECK(a.config_fingerprint == b.config_fingerprint);
    CHECK(a.fingerprint() == b.fingerprint());

    cfg.seed = 1235;
    ChannelRealization c = generate_channel(cfg);
    CHECK(a.h.data() != c.h.data());
    CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("channel rank bounded by path count") {
    ChannelConfig cfg = small_config(7);
    cfg.n_clusters = 2;
    cfg.rays_per_cluster = 1;
    cfg.los = true; // 3 paths total on a 4x16
    ChannelRealization r = generate_channel(cfg);
    linalg::SvdResult s = linalg::svd(r.h);
    CHECK(s.s[3] / s.s[0] < 1e-10);
}

TEST_CASE("Monte-Carlo energy normalization") {
    ChannelConfig cfg = small_config(0);
    const double expect = static_cast<double>(cfg.tx_geometry.n_elements * cfg.rx_geometry.n_elements);
    double acc = 0.0;
    const int draws = 1000;
    for (int i = 0; i < draws; ++i) {
        cfg.seed = derive_seed(99, "mc-energy", static_cast<std::uint64_t>(i));
        const double f = linalg::frobenius_norm(generate_channel(cfg).h);
        acc += f * f;
    }
    acc /= draws;
    CHECK(acc > 0.9 * expect);
    CHECK(acc < 1.1 * expect);
}

TEST_CASE("stronger Ricean factor concentrates energy on the dominant path") {
    ChannelConfig lo = small_config(0);
    lo.k_factor_db = 0.0;
    ChannelConfig hi = small_config(0);
    hi.k_factor_db = 15.0;
    CHECK(mean_los_fraction(hi, 300) > mean_los_fraction(lo, 300));
}

TEST_CASE("channel dataset round trip") {
    ChannelConfig cfg = small_config(0);
    std::vector<ChannelRealization> recs;
    for (int i = 0; i < 10; ++i) {
        cfg.seed = derive_seed(5, "roundtrip", static_cast<std::uint64_t>(i));
        recs.push_back(generate_channel(cfg));
    }
    const std::string path = "test_channels_roundtrip.txt";
    export_channels(recs, path);
    std::vector<ChannelRealization> back = import_channels(path);
    REQUIRE(back.size() == recs.size());
    for (std::size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].seed == recs[i].seed);
        CHECK(back[i].h.data() == recs[i].h.data()); // bit-exact
    }
    std::remove(path.c_str());

    CHECK_THROWS_AS(export_channels({}, path), ValidationError);
}

TEST_CASE("import rejects malformed files with record context") {
    const std::string path = "test_channels_bad.txt";
    {
        std::ofstream f(path);
        f << "UMCH1 1 2 2\n";
        f << "11 1.0 0.0 2.0 0.0\n";
        f << "12 nan 0.0 2.0 0.0\n";
    }
    try {
        import_channels(path);
        FAIL("expected ValidationError");
    } catch (const ValidationError &e) {
        CHECK(std::string(e.what()).find("record 2") != std::string::npos);
    }
    {
        std::ofstream f(path);
        f << "UMCH1 1 2 2\n";
        f << "11 1.0 0.0\n";
    }
    CHECK_THROWS_AS(import_channels(path), ValidationError);
    {
        std::ofstream f(path); // empty
    }
    CHECK_THROWS_AS(import_channels(path), ValidationError);
    std::remove(path.c_str());
}
