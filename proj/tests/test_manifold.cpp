#include <doctest.h>

#include "oracles.hpp"
#include "riem/error.hpp"
#include "riem/linalg.hpp"
#include "riem/geodesic.hpp"
#include "riem/manifold.hpp"

using namespace riem;
using oracle::Rng;

namespace {

Vec v3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

}  // namespace

TEST_CASE("tangent_project: sphere examples") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    const Vec x = v3(0, 0, 1);
    CHECK(oracle::rel_err(tangent_project(s1, x, v3(1, 0, 0)), v3(1, 0, 0)) < 1e-12);
    CHECK(tangent_project(s1, x, v3(0, 0, 5)).norm() < 1e-12);
    CHECK(oracle::rel_err(tangent_project(s1, x, v3(1, 0, 1)), v3(1, 0, 0)) < 1e-12);
}

TEST_CASE("tangent_project: idempotent") {
    const Manifold m4 = builtin("m4");
    Rng rng(3);
    Vec p(5);
    p << 0, 0, 0, 0, 1;
    for (int trial = 0; trial < 10; ++trial) {
        const Vec v = rng.vec(5);
        const Vec once = tangent_project(m4, p, v);
        const Vec twice = tangent_project(m4, p, once);
        CHECK((once - twice).norm() < 1e-12);
    }
}

TEST_CASE("tangent_project: rejects off-manifold points") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    CHECK_THROWS_AS(tangent_project(s1, v3(0, 0, 2), v3(1, 0, 0)),
                    ConstraintViolationError);
}

TEST_CASE("builtin: surface_sc(1) is the unit sphere") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    CHECK(s1.constraint_residual(v3(0, 0, 1)) == 0.0);
    CHECK(s1.eta() == 2);
}

TEST_CASE("builtin: flat has vanishing symbols") {
    const Manifold f2 = builtin("flat", {2.0});
    Rng rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec x = rng.vec(2);
        const Tensor3 g = f2.par().christoffel_at(x);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) CHECK(g(k, i, j) == 0.0);
    }
}

TEST_CASE("builtin: m4 contains the reference point") {
    const Manifold m4 = builtin("m4");
    Vec p(5);
    p << 0, 0, 0, 0, 1;
    CHECK(m4.constraint_residual(p) == 0.0);
    CHECK(m4.eta() == 4);
}

TEST_CASE("builtin: unknown name") {
    CHECK_THROWS_AS(builtin("torus"), ConfigError);
    CHECK_THROWS_AS(builtin("surface_sc", {}), ConfigError);
}

TEST_CASE("tangent_basis: sphere pole spans the x1x2-plane") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    const auto basis = tangent_basis(s1, v3(0, 0, 1));
    REQUIRE(basis.size() == 2);
    for (const Vec& b : basis) CHECK(std::abs(b(2)) < 1e-12);
    CHECK(std::abs(basis[0].dot(basis[1])) < 1e-12);
    CHECK(std::abs(basis[0].norm() - 1.0) < 1e-12);
}

TEST_CASE("tangent_basis: flat gives the canonical basis") {
    const Manifold f3 = builtin("flat", {3.0});
    const auto basis = tangent_basis(f3, Vec::Zero(3));
    REQUIRE(basis.size() == 3);
    for (int i = 0; i < 3; ++i)
        CHECK(oracle::rel_err(basis[i], Vec(Vec::Unit(3, i))) < 1e-14);
}

TEST_CASE("tangent_basis: m4 basis is tangent and orthonormal") {
    const Manifold m4 = builtin("m4");
    Vec p(5);
    p << 0, 0, 0, 0, 1;
    const auto basis = tangent_basis(m4, p);
    REQUIRE(basis.size() == 4);
    const Mat a = m4.imp().jac_at(p);
    for (size_t i = 0; i < basis.size(); ++i) {
        CHECK((a * basis[i]).norm() < 1e-10);
        for (size_t j = 0; j < basis.size(); ++j) {
            const double want = i == j ? 1.0 : 0.0;
            CHECK(std::abs(basis[i].dot(basis[j]) - want) < 1e-10);
        }
    }
}

TEST_CASE("complete_tangent_basis extends a given direction") {
    const Manifold s1 = builtin("surface_sc", {1.0});
    const Vec x = v3(0, 0, 1);
    const Vec given = v3(std::sqrt(0.5), std::sqrt(0.5), 0);
    const auto basis = complete_tangent_basis(s1, x, {given});
    REQUIRE(basis.size() == 2);
    CHECK(oracle::rel_err(basis[0], given) < 1e-14);
    CHECK(std::abs(basis[0].dot(basis[1])) < 1e-12);
}

TEST_CASE("implicit derivative callbacks match finite differences") {
    Rng rng(9);
    for (const double c : {1.0, 0.0, -1.0}) {
        const Manifold sc = builtin("surface_sc", {c});
        for (int trial = 0; trial < 5; ++trial) {
            Vec x = rng.vec(3);
            const double q = c * x(0) * x(0) + x(1) * x(1) + x(2) * x(2);
            if (q <= 0.1) continue;  // keep clear of the asymptotic cone
            x /= std::sqrt(q);
            const auto& im = sc.imp();
            const Mat jac_fd = linalg::fd_jacobian(
                [&](const Vec& p) { return im.value_at(p); }, x, 1e-6);
            CHECK(oracle::rel_err(im.jac_at(x), jac_fd) < 1e-6);
            const Mat hess_fd = linalg::fd_jacobian(
                [&](const Vec& p) { return Vec(im.jac_at(p).row(0)); }, x, 1e-6);
            CHECK(oracle::rel_err(im.hess_at(x)[0], hess_fd) < 1e-6);
        }
    }
}

TEST_CASE("m4 derivative callbacks match finite differences") {
    const Manifold m4 = builtin("m4");
    Rng rng(21);
    Vec p(5);
    p << 0, 0, 0, 0, 1;
    for (int trial = 0; trial < 5; ++trial) {
        const Vec x = exp_map(m4, p, tangent_project(m4, p, rng.vec(5)));
        const auto& im = m4.imp();
        const Mat jac_fd = linalg::fd_jacobian(
            [&](const Vec& q) { return im.value_at(q); }, x, 1e-6);
        CHECK(oracle::rel_err(im.jac_at(x), jac_fd) < 1e-6);
        const Mat hess_fd = linalg::fd_jacobian(
            [&](const Vec& q) { return Vec(im.jac_at(q).row(0)); }, x, 1e-6);
        CHECK(oracle::rel_err(im.hess_at(x)[0], hess_fd) < 1e-6);
    }
}

TEST_CASE("parametric sphere: Christoffel symmetry at random chart points") {
    const Manifold sp = builtin("sphere_param");
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        Vec x(2);
        x << 0.3 + 0.009 * (trial + 1) * 2.5, rng.normal();
        const Tensor3 g = sp.par().christoffel_at(x);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(g(k, i, j) == doctest::Approx(g(k, j, i)).epsilon(1e-12));
    }
}

TEST_CASE("parametric sphere: symbol derivatives match finite differences") {
    const Manifold sp = builtin("sphere_param");
    Rng rng(33);
    for (int trial = 0; trial < 5; ++trial) {
        Vec x(2);
        x << 1.0 + 0.2 * rng.normal(), rng.normal();
        const Vec z = rng.vec(2);
        const auto& pm = sp.par();
        const Tensor3 got = pm.christoffel_dir_at(x, z);
        const double h = 1e-6;
        const Tensor3 gp = pm.christoffel_at(x + h * z);
        const Tensor3 gm = pm.christoffel_at(x - h * z);
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const double fd = (gp(k, i, j) - gm(k, i, j)) / (2 * h);
                    CHECK(got(k, i, j) == doctest::Approx(fd).epsilon(1e-5));
                }
    }
}

TEST_CASE("manifold metric: parametric inner product uses g") {
    const Manifold sp = builtin("sphere_param");
    Vec x(2);
    x << M_PI / 2, 0.0;
    CHECK(sp.inner(x, Vec(Vec::Unit(2, 1)), Vec(Vec::Unit(2, 1))) ==
          doctest::Approx(1.0));
    x << M_PI / 6, 0.0;
    CHECK(sp.inner(x, Vec(Vec::Unit(2, 1)), Vec(Vec::Unit(2, 1))) ==
          doctest::Approx(0.25));
}
