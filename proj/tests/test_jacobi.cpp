#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "riem/error.hpp"
#include "riem/jacobi.hpp"

using namespace riem;
using oracle::Rng;

namespace {

Vec v3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

const Vec kPole = (Vec(3) << 0, 0, 1).finished();

}  // namespace

TEST_CASE("jacobi_field: zero initial values give the zero field") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    const Vec j = jacobi_field(s1, kPole, v3(0, 1, 0), Vec::Zero(3), Vec::Zero(3), 1.5);
    CHECK(j.norm() < 1e-12);
}

TEST_CASE("jacobi_field: |J_t| = sin t on the unit sphere") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    for (const double t : {0.3, 1.0, 2.2, 3.0}) {
        const Vec j = jacobi_field(s1, kPole, v3(0, 1, 0), Vec::Zero(3), v3(1, 0, 0), t);
        CHECK(std::abs(j.norm() - std::sin(t)) < 1e-7);
    }
}

TEST_CASE("jacobi_field: |J_t| = t on the cylinder") {
    const Manifold s0 = builtin("surface_sc", {0.0});
    for (const double t : {0.5, 1.7, 3.0}) {
        const Vec j = jacobi_field(s0, kPole, v3(0, 1, 0), Vec::Zero(3), v3(1, 0, 0), t);
        CHECK(std::abs(j.norm() - t) < 1e-8);
    }
}

TEST_CASE("jacobi_field: linear superposition in the initial values") {
    const Manifold sm1 = builtin("surface_sc", {-1.0});
    Rng rng(3);
    const Vec v = v3(0.4, 0.9, 0);
    const auto tangent = [&](Rng& r) {
        Vec t = r.vec(3);
        t(2) = 0.0;
        return t;
    };
    const Vec u1 = tangent(rng), w1 = tangent(rng), u2 = tangent(rng), w2 = tangent(rng);
    const Vec j1 = jacobi_field(sm1, kPole, v, u1, w1, 1.3);
    const Vec j2 = jacobi_field(sm1, kPole, v, u2, w2, 1.3);
    const Vec jsum = jacobi_field(sm1, kPole, v, Vec(u1 + 2.0 * u2), Vec(w1 + 2.0 * w2), 1.3);
    CHECK((jsum - (j1 + 2.0 * j2)).norm() < 1e-8);
}

TEST_CASE("dexp: identity differential at v = 0") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    const Vec w = v3(0.3, -0.4, 0);
    CHECK((dexp(s1, kPole, Vec::Zero(3), w) - w).norm() < 1e-12);
}

TEST_CASE("dexp: matches the sphere closed form") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Vec q, v;
        oracle::sphere_config(rng, q, v);
        Vec w = rng.vec(3);
        w -= w.dot(q) * q;
        const Vec got = dexp(s1, q, v, w);
        const Vec want = oracle::sphere_dexp(q, v, w);
        CHECK(oracle::rel_err(got, want) < 1e-8);
    }
}

TEST_CASE("dexp: matches central finite differences on the hyperboloid") {
    const Manifold sm1 = builtin("surface_sc", {-1.0});
    Rng rng(7);
    const double h = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
        Vec vr = rng.vec(3), wr = rng.vec(3);
        vr(2) = 0.0;
        wr(2) = 0.0;
        const Vec v = 0.8 * vr.normalized();
        const Vec w = wr.normalized();
        const Vec fd =
            (exp_map(sm1, kPole, Vec(v + h * w)) - exp_map(sm1, kPole, Vec(v - h * w))) /
            (2.0 * h);
        CHECK(oracle::rel_err(dexp(sm1, kPole, v, w), fd) < 1e-5);
    }
}

TEST_CASE("dexp: Gauss lemma on the sphere") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    Rng rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        Vec q, v;
        oracle::sphere_config(rng, q, v);
        Vec w = rng.vec(3);
        w -= w.dot(q) * q;
        const Vec dv = dexp(s1, q, v, v);
        const Vec dw = dexp(s1, q, v, w);
        CHECK(std::abs(dv.dot(dw) - v.dot(w)) < 1e-7);
    }
}

TEST_CASE("dexp_matrix: identity at v = 0 and on flat space") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    CHECK(oracle::rel_err(dexp_matrix(s1, kPole, Vec::Zero(3)), Mat(Mat::Identity(2, 2))) <
          1e-12);
    const Manifold f3 = builtin("flat", {3.0});
    Vec q(3), v(3);
    q << 1, 2, 3;
    v << -0.5, 0.25, 1.0;
    CHECK(oracle::rel_err(dexp_matrix(f3, q, v), Mat(Mat::Identity(3, 3))) < 1e-10);
}

TEST_CASE("dexp_matrix: sphere singular values at |v| = pi/2") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    const Mat d = dexp_matrix(s1, kPole, (M_PI / 2) * v3(1, 0, 0));
    Eigen::JacobiSVD<Mat> svd(d);
    const Vec sv = svd.singularValues();
    CHECK(std::abs(sv(0) - 1.0) < 1e-6);
    CHECK(std::abs(sv(1) - std::sin(M_PI / 2) / (M_PI / 2)) < 1e-6);
}

TEST_CASE("dlog: identity at the base point and inverse of dexp_matrix") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    CHECK(oracle::rel_err(dlog(s1, kPole, kPole), Mat(Mat::Identity(2, 2))) < 1e-10);

    const Vec v = 0.8 * v3(1, 1, 0).normalized();
    const Vec y = exp_map(s1, kPole, v);
    const Mat prod = dlog(s1, kPole, y) * dexp_matrix(s1, kPole, v);
    CHECK(oracle::rel_err(prod, Mat(Mat::Identity(2, 2))) < 1e-6);
}

TEST_CASE("dlog: matches finite differences of the log map") {
    const Manifold sm1 = builtin("surface_sc", {-1.0});
    const Vec v = v3(0.5, 0.3, 0);
    const Vec y = exp_map(sm1, kPole, v);
    const Mat dl = dlog(sm1, kPole, y);

    const Frame fy = make_frame(sm1, y);
    const Frame fq = make_frame(sm1, kPole);
    const double h = 1e-6;
    for (int i = 0; i < 2; ++i) {
        const Vec dir = fy.basis.col(i);
        // stay on the manifold while perturbing y
        const Vec yp = exp_map(sm1, y, h * dir);
        const Vec ym = exp_map(sm1, y, -h * dir);
        const Vec fd =
            (fq.to_coords(log_map(sm1, kPole, yp)) - fq.to_coords(log_map(sm1, kPole, ym))) /
            (2.0 * h);
        CHECK(oracle::rel_err(Vec(dl.col(i)), fd) < 1e-4);
    }
}

TEST_CASE("dexp_second: vanishes on flat space") {
    const Manifold f2 = builtin("flat", {2.0});
    Rng rng(11);
    const Vec q = rng.vec(2), v = rng.vec(2), w = rng.vec(2), u = rng.vec(2);
    CHECK(dexp_second(f2, q, v, w, u).norm() < 1e-12);
}

TEST_CASE("dexp_second: linear in the variation direction") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    Rng rng(13);
    Vec q, v;
    oracle::sphere_config(rng, q, v);
    auto tang = [&](Vec r) {
        r -= r.dot(q) * q;
        return r;
    };
    const Vec w = tang(rng.vec(3));
    const Vec u1 = tang(rng.vec(3)), u2 = tang(rng.vec(3));
    const Vec a = dexp_second(s1, q, v, w, u1);
    const Vec b = dexp_second(s1, q, v, w, u2);
    const Vec ab = dexp_second(s1, q, v, w, Vec(u1 + u2));
    CHECK((ab - a - b).norm() < 1e-8);
}

TEST_CASE("dexp_second: matches finite differences of dexp on the hyperboloid") {
    const Manifold sm1 = builtin("surface_sc", {-1.0});
    Rng rng(17);
    const double h = 1e-4;
    for (int trial = 0; trial < 6; ++trial) {
        auto tang = [&](Vec r) {
            r(2) = 0.0;
            return r;
        };
        const Vec v = 0.7 * tang(rng.vec(3)).normalized();
        const Vec w = tang(rng.vec(3)).normalized();
        const Vec u = tang(rng.vec(3)).normalized();
        const Vec fd = (dexp(sm1, kPole, Vec(v + h * u), w) -
                        dexp(sm1, kPole, Vec(v - h * u), w)) /
                       (2.0 * h);
        const Vec got = dexp_second(sm1, kPole, v, w, u);
        CHECK(oracle::rel_err(got, fd) < 1e-4);
    }
}

TEST_CASE("dexp_second: matches finite differences on the parametric sphere") {
    const Manifold sp = builtin("sphere_param");
    Rng rng(19);
    const double h = 1e-4;
    for (int trial = 0; trial < 4; ++trial) {
        Vec q(2);
        q << 1.2 + 0.3 * rng.normal(), 0.5 * rng.normal();
        const Vec v = 0.5 * rng.vec(2);
        const Vec w = rng.vec(2).normalized();
        const Vec u = rng.vec(2).normalized();
        const Vec fd =
            (dexp(sp, q, Vec(v + h * u), w) - dexp(sp, q, Vec(v - h * u), w)) / (2.0 * h);
        const Vec got = dexp_second(sp, q, v, w, u);
        CHECK(oracle::rel_err(got, fd) < 1e-4);
    }
}

TEST_CASE("dexp: parametric and implicit sphere agree through the chart") {
    const Manifold sp = builtin("sphere_param");
    const Manifold s1 = builtin("surface_sc", {1.0});
    Rng rng(23);
    const auto embed = [](const Vec& c) {
        return (Vec(3) << std::sin(c(0)) * std::cos(c(1)),
                std::sin(c(0)) * std::sin(c(1)), std::cos(c(0)))
            .finished();
    };
    const auto dembed = [](const Vec& c) {
        Mat d(3, 2);
        d << std::cos(c(0)) * std::cos(c(1)), -std::sin(c(0)) * std::sin(c(1)),
            std::cos(c(0)) * std::sin(c(1)), std::sin(c(0)) * std::cos(c(1)),
            -std::sin(c(0)), 0.0;
        return d;
    };
    for (int trial = 0; trial < 5; ++trial) {
        Vec q(2);
        q << 1.0 + 0.4 * rng.normal(), 0.3 * rng.normal();
        const Vec v = 0.4 * rng.vec(2);
        const Vec w = 0.8 * rng.vec(2);
        const Vec z_param = dexp(sp, q, v, w);  // chart components at the endpoint
        // implicit counterpart
        ode::Trajectory traj = exp_trajectory(sp, q, v, 1.0);
        const Vec endpoint_chart = traj.final_state().head(2);
        const Vec got = dembed(endpoint_chart) * z_param;
        const Vec want = dexp(s1, embed(q), Vec(dembed(q) * v), Vec(dembed(q) * w));
        CHECK(oracle::rel_err(got, want) < 1e-6);
    }
}

TEST_CASE("sectional_curvature: S_c values at the reference point") {
    Vec p = kPole, v = v3(0, 1, 0), w = v3(1, 0, 0);
    for (const double c : {1.0, 0.0, -3.0}) {
        const Manifold sc = builtin("surface_sc", {c});
        const auto est01 = sectional_curvature(sc, p, v, w, 0.01);
        CHECK(std::abs(est01.value - c) < 1e-3);
    }
    // displayed three-decimal values at t = 0.1
    const auto s1 = sectional_curvature(builtin("surface_sc", {1.0}), p, v, w, 0.1);
    CHECK(std::abs(s1.value - 1.000) < 5e-4);
    const auto sm3 = sectional_curvature(builtin("surface_sc", {-3.0}), p, v, w, 0.1);
    CHECK(std::abs(sm3.value - (-3.005)) < 5e-4);
    const auto s0 = sectional_curvature(builtin("surface_sc", {0.0}), p, v, w, 0.1);
    CHECK(std::abs(s0.value) < 1e-6);
}

TEST_CASE("sectional_curvature: estimates tighten as t shrinks") {
    const Manifold sc = builtin("surface_sc", {-2.0});
    const Vec p = kPole, v = v3(0, 1, 0), w = v3(1, 0, 0);
    double prev = std::numeric_limits<double>::infinity();
    for (const double t : {0.1, 0.05, 0.01}) {
        const double err = std::abs(sectional_curvature(sc, p, v, w, t).value - (-2.0));
        CHECK(err <= prev);
        prev = err;
    }
}

TEST_CASE("sectional_curvature: degenerate plane is rejected") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    CHECK_THROWS_AS(sectional_curvature(s1, kPole, v3(0, 1, 0), v3(0, 2, 0), 0.01),
                    InvalidInputError);
}

TEST_CASE("conjugate_scan: sphere, squeezed ellipsoid, cylinder, hyperboloid") {
    const Vec p = kPole, v = v3(0, 1, 0), w = v3(1, 0, 0);
    const auto t1 = conjugate_scan(builtin("surface_sc", {1.0}), p, v, w, 2.0 * M_PI);
    REQUIRE(t1.has_value());
    CHECK(std::abs(*t1 - M_PI) < 1e-3);

    const auto t2 = conjugate_scan(builtin("surface_sc", {2.0}), p, v, w, 2.0 * M_PI);
    REQUIRE(t2.has_value());
    CHECK(std::abs(*t2 - M_PI / std::sqrt(2.0)) < 1e-3);

    CHECK(!conjugate_scan(builtin("surface_sc", {0.0}), p, v, w, 2.0 * M_PI).has_value());
    CHECK(!conjugate_scan(builtin("surface_sc", {-1.0}), p, v, w, 2.0 * M_PI).has_value());
}
