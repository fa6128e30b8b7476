#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "ummimo/neural/adam.hpp"
#include "ummimo/neural/checkpoint.hpp"
#include "ummimo/neural/grad_check.hpp"
#include "ummimo/neural/network.hpp"
#include "ummimo/rng.hpp"

using namespace ummimo;
using namespace ummimo::neural;
using linalg::RealMatrix;

namespace {

RealMatrix row(std::initializer_list<double> vals) {
    RealMatrix m(1, vals.size());
    std::size_t j = 0;
    for (double v : vals)
        m(0, j++) = v;
    return m;
}

// half squared norm of the network output; analytic gradient via backward
double half_sq_loss(Network &net, const RealMatrix &input, const std::vector<double> &flat,
                    std::vector<double> *grad_out) {
    net.assign_params(flat);
    ForwardCache cache = net.forward(input);
    double loss = 0.0;
    for (double v : cache.output.data())
        loss += 0.5 * v * v;
    if (grad_out) {
        NetworkGrads grads = net.zero_grads();
        net.backward(cache, cache.output, grads);
        grad_out->clear();
        net.flatten_grads(grads, *grad_out);
    }
    return loss;
}

} // namespace

TEST_CASE("forward of elementary layers") {
    Network dense({{LayerKind::dense, 3, 2}}, 1);
    for (auto &v : dense.params()[0].w.data())
        v = 0.0;
    dense.params()[0].b = {4.0, -2.5};
    RealMatrix out = dense.output(row({1.0, 2.0, 3.0}));
    CHECK(out(0, 0) == 4.0);
    CHECK(out(0, 1) == -2.5);

    Network relu({{LayerKind::dense, 2, 2}, {LayerKind::relu}}, 1);
    relu.params()[0].w.data() = {1.0, 0.0, 0.0, 1.0};
    out = relu.output(row({-1.0, 2.0}));
    CHECK(out(0, 0) == 0.0);
    CHECK(out(0, 1) == 2.0);

    Network swish_net({{LayerKind::dense, 2, 2}, {LayerKind::swish}}, 1);
    swish_net.params()[0].w.data() = {1.0, 0.0, 0.0, 1.0};
    out = swish_net.output(row({0.0, 1.0}));
    CHECK(out(0, 0) == 0.0);
    CHECK(out(0, 1) == doctest::Approx(0.731059).epsilon(1e-5));
}

TEST_CASE("network construction and shape validation") {
    CHECK_THROWS_AS(Network({{LayerKind::dense, 0, 2}}, 1), ValidationError);
    CHECK_THROWS_AS(Network({{LayerKind::relu}}, 1), ValidationError);
    CHECK_THROWS_AS(Network({{LayerKind::concat}}, 1), ValidationError);
    CHECK_THROWS_AS(Network({{LayerKind::dense, 2, 3}, {LayerKind::dense, 4, 1}}, 1), ValidationError);

    Network net({{LayerKind::dense, 3, 2}}, 1);
    CHECK_THROWS_AS(net.output(row({1.0, 2.0})), ValidationError);
}

TEST_CASE("backward of a linear layer against the closed form") {
    Network net({{LayerKind::dense, 3, 2}}, 7);
    RealMatrix x = row({0.5, -1.0, 2.0});
    ForwardCache cache = net.forward(x);
    NetworkGrads grads = net.zero_grads();
    net.backward(cache, cache.output, grads); // loss = 1/2 ||y||^2, dL/dy = y

    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(grads.dense[0].b[i] == doctest::Approx(cache.output(0, i)));
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(grads.dense[0].w(i, j) == doctest::Approx(cache.output(0, i) * x(0, j)));
    }
}

TEST_CASE("relu blocks gradient at negative pre-activations") {
    Network net({{LayerKind::dense, 2, 2}, {LayerKind::relu}}, 1);
    net.params()[0].w.data() = {1.0, 0.0, 0.0, 1.0};
    RealMatrix x = row({-3.0, 2.0});
    ForwardCache cache = net.forward(x);
    NetworkGrads grads = net.zero_grads();
    RealMatrix gin = net.backward(cache, row({1.0, 1.0}), grads);
    CHECK(gin(0, 0) == 0.0);
    CHECK(gin(0, 1) == 1.0);
}

TEST_CASE("three-layer gradients match central finite differences") {
    Network net({{LayerKind::dense, 4, 6},
                 {LayerKind::swish},
                 {LayerKind::dense, 6, 5},
                 {LayerKind::relu},
                 {LayerKind::dense, 5, 3}},
                1);
    Rng rng(977);
    RealMatrix x(3, 4);
    for (auto &v : x.data())
        v = rng.normal();

    std::vector<double> flat;
    net.flatten_params(flat);

    // finite differences are only meaningful away from the relu kink; this
    // seed keeps every pre-activation at least 1e-3 from zero
    Network pre({{LayerKind::dense, 4, 6}, {LayerKind::swish}, {LayerKind::dense, 6, 5}}, 1);
    pre.assign_params(flat);
    RealMatrix pre_act = pre.output(x);
    for (double v : pre_act.data())
        REQUIRE(std::abs(v) > 1e-3);

    std::vector<double> analytic;
    half_sq_loss(net, x, flat, &analytic);
    auto loss = [&](const std::vector<double> &p) { return half_sq_loss(net, x, p, nullptr); };
    GradCheckReport rep = grad_check(loss, analytic, flat, 1e-4);
    CHECK(rep.pass);
    CHECK(rep.max_rel_error < 1e-4);
}

TEST_CASE("l2_normalize gradients match central finite differences") {
    Network net({{LayerKind::dense, 3, 4}, {LayerKind::swish}, {LayerKind::dense, 4, 3},
                 {LayerKind::l2_normalize}},
                5);
    // nonzero bias keeps the normalized row away from the origin
    net.params()[1].b = {0.4, -0.2, 0.3};
    RealMatrix x = row({0.8, -0.3, 1.1});
    const RealMatrix target = row({1.0, 0.0, 0.0});

    // loss = 1/2 || y - target ||^2 so the gradient survives normalization
    auto eval = [&](const std::vector<double> &p, std::vector<double> *grad_out) {
        net.assign_params(p);
        ForwardCache cache = net.forward(x);
        double loss = 0.0;
        RealMatrix diff = cache.output;
        for (std::size_t i = 0; i < diff.size(); ++i) {
            diff.data()[i] -= target.data()[i];
            loss += 0.5 * diff.data()[i] * diff.data()[i];
        }
        if (grad_out) {
            NetworkGrads grads = net.zero_grads();
            net.backward(cache, diff, grads);
            grad_out->clear();
            net.flatten_grads(grads, *grad_out);
        }
        return loss;
    };

    std::vector<double> flat;
    net.flatten_params(flat);
    std::vector<double> analytic;
    eval(flat, &analytic);
    auto loss = [&](const std::vector<double> &p) { return eval(p, nullptr); };
    GradCheckReport rep = grad_check(loss, analytic, flat, 1e-4);
    CHECK(rep.pass);
}

TEST_CASE("backward rejects a stale or foreign cache") {
    Network a({{LayerKind::dense, 2, 2}}, 1);
    Network b({{LayerKind::dense, 2, 2}}, 2);
    ForwardCache cache = a.forward(row({1.0, 1.0}));
    NetworkGrads grads = b.zero_grads();
    CHECK_THROWS_AS(b.backward(cache, row({1.0, 1.0}), grads), ValidationError);
}

TEST_CASE("adam update behavior") {
    std::vector<double> params{1.0, -2.0, 3.0};
    AdamState state(3);
    AdamOptions opts;

    std::vector<double> zero(3, 0.0);
    adam_step(params, zero, state, opts);
    CHECK(params == std::vector<double>{1.0, -2.0, 3.0});

    // first step with any nonzero gradient moves each coordinate by ~lr
    std::vector<double> p2{1.0, -2.0, 3.0};
    AdamState s2(3);
    adam_step(p2, {0.04, -900.0, 1e-3}, s2, opts);
    CHECK(std::abs(p2[0] - (1.0 - opts.lr)) < 1e-6);
    CHECK(std::abs(p2[1] - (-2.0 + opts.lr)) < 1e-6);
    CHECK(std::abs(p2[2] - (3.0 - opts.lr)) < 1e-4);

    // determinism
    std::vector<double> p3{1.0, -2.0, 3.0};
    AdamState s3(3);
    adam_step(p3, {0.04, -900.0, 1e-3}, s3, opts);
    CHECK(p2 == p3);
    CHECK(s2.m == s3.m);
    CHECK(s2.v == s3.v);
}

TEST_CASE("grad_check on an analytic quadratic") {
    // loss = sum x_i^2, gradient 2x
    std::vector<double> point{0.3, -1.7, 2.2, 0.0};
    auto loss = [](const std::vector<double> &p) {
        double s = 0.0;
        for (double v : p)
            s += v * v;
        return s;
    };
    std::vector<double> grad{0.6, -3.4, 4.4, 0.0};
    GradCheckReport rep = grad_check(loss, grad, point, 1e-7);
    CHECK(rep.pass);
    CHECK(rep.max_rel_error < 1e-7);

    // corrupted gradient must fail
    std::vector<double> bad = grad;
    bad[1] *= 1.01;
    rep = grad_check(loss, bad, point, 1e-4);
    CHECK_FALSE(rep.pass);
}

TEST_CASE("grad_check subsampling stays deterministic") {
    std::vector<double> point(2000, 0.5);
    std::vector<double> grad(2000, 1.0);
    auto loss = [](const std::vector<double> &p) {
        double s = 0.0;
        for (double v : p)
            s += v;
        return s;
    };
    GradCheckReport a = grad_check(loss, grad, point, 1e-6, 1e-6, 500, 42);
    GradCheckReport b = grad_check(loss, grad, point, 1e-6, 1e-6, 500, 42);
    CHECK(a.coords_checked == 500);
    CHECK(a.max_rel_error == b.max_rel_error);
    CHECK(a.pass);
}

TEST_CASE("checkpoint round trip and fingerprint guard") {
    Network a({{LayerKind::dense, 3, 4}, {LayerKind::relu}, {LayerKind::dense, 4, 2}}, 11);
    Network b({{LayerKind::dense, 2, 5}}, 12);
    const std::string path = "test_ckpt.txt";
    save_checkpoint(path, {&a, &b});

    Network a2({{LayerKind::dense, 3, 4}, {LayerKind::relu}, {LayerKind::dense, 4, 2}}, 99);
    Network b2({{LayerKind::dense, 2, 5}}, 98);
    load_checkpoint(path, {&a2, &b2});

    std::vector<double> want, got;
    a.flatten_params(want);
    b.flatten_params(want);
    a2.flatten_params(got);
    b2.flatten_params(got);
    CHECK(want == got);

    Network wrong({{LayerKind::dense, 3, 4}}, 1);
    CHECK_THROWS_AS(load_checkpoint(path, {&wrong}), ValidationError);
    std::remove(path.c_str());
}
