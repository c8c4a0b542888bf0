#include <cmath>
#include <map>
#include <mutex>

#include "riem/error.hpp"
#include "riem/manifold.hpp"

namespace riem {

namespace {

// S_c = { c x1^2 + x2^2 + x3^2 = 1 }: ellipsoid for c > 0 (sphere at
// c = 1), cylinder at c = 0, one-sheet hyperboloid for c < 0. Quadric:
// constant Hessian, vanishing higher derivatives.
ImplicitManifold make_surface_sc(double c) {
    ImplicitManifold s;
    s.m = 3;
    s.n = 1;
    s.value = [c](const Vec& x) {
        Vec f(1);
        f(0) = c * x(0) * x(0) + x(1) * x(1) + x(2) * x(2) - 1.0;
        return f;
    };
    s.jac = [c](const Vec& x) {
        Mat j(1, 3);
        j << 2.0 * c * x(0), 2.0 * x(1), 2.0 * x(2);
        return j;
    };
    s.hess = [c](const Vec&) {
        Mat h = Mat::Zero(3, 3);
        h(0, 0) = 2.0 * c;
        h(1, 1) = 2.0;
        h(2, 2) = 2.0;
        return std::vector<Mat>{h};
    };
    s.hess_dir_zero = true;
    s.hess_dir2_zero = true;
    return s;
}

// M4 = { x1^2 - 2 x2^2 + x3^2 - 2 x4 + x5 = 1 }, a 4-manifold in R^5.
ImplicitManifold make_m4() {
    ImplicitManifold s;
    s.m = 5;
    s.n = 1;
    s.value = [](const Vec& x) {
        Vec f(1);
        f(0) = x(0) * x(0) - 2.0 * x(1) * x(1) + x(2) * x(2) - 2.0 * x(3) + x(4) - 1.0;
        return f;
    };
    s.jac = [](const Vec& x) {
        Mat j(1, 5);
        j << 2.0 * x(0), -4.0 * x(1), 2.0 * x(2), -2.0, 1.0;
        return j;
    };
    s.hess = [](const Vec&) {
        Mat h = Mat::Zero(5, 5);
        h(0, 0) = 2.0;
        h(1, 1) = -4.0;
        h(2, 2) = 2.0;
        return std::vector<Mat>{h};
    };
    s.hess_dir_zero = true;
    s.hess_dir2_zero = true;
    return s;
}

// Unit sphere in spherical-polar coordinates x = (theta, phi),
// (theta, phi) -> (sin th cos ph, sin th sin ph, cos th).
// g = diag(1, sin^2 th); nonzero symbols:
//   G^1_22 = -sin th cos th,  G^2_12 = G^2_21 = cot th.
ParametricManifold make_sphere_param() {
    ParametricManifold s;
    s.eta = 2;
    constexpr double kPad = 1e-6;  // keep clear of the polar singularities
    s.in_chart = [](const Vec& x) {
        return x(0) > kPad && x(0) < M_PI - kPad;
    };
    s.metric = [](const Vec& x) {
        Mat g = Mat::Zero(2, 2);
        g(0, 0) = 1.0;
        g(1, 1) = std::sin(x(0)) * std::sin(x(0));
        return g;
    };
    s.christoffel = [](const Vec& x) {
        const double th = x(0);
        Tensor3 g(2, 2, 2);
        g(0, 1, 1) = -std::sin(th) * std::cos(th);
        g(1, 0, 1) = std::cos(th) / std::sin(th);
        g(1, 1, 0) = g(1, 0, 1);
        return g;
    };
    // Only theta-derivatives are nonzero.
    s.christoffel_dir = [](const Vec& x, const Vec& z) {
        const double th = x(0), s0 = std::sin(th);
        Tensor3 g(2, 2, 2);
        g(0, 1, 1) = -std::cos(2.0 * th) * z(0);
        g(1, 0, 1) = -z(0) / (s0 * s0);
        g(1, 1, 0) = g(1, 0, 1);
        return g;
    };
    s.christoffel_dir2 = [](const Vec& x, const Vec& z1, const Vec& z2) {
        const double th = x(0), s0 = std::sin(th);
        Tensor3 g(2, 2, 2);
        g(0, 1, 1) = 2.0 * std::sin(2.0 * th) * z1(0) * z2(0);
        g(1, 0, 1) = 2.0 * std::cos(th) / (s0 * s0 * s0) * z1(0) * z2(0);
        g(1, 1, 0) = g(1, 0, 1);
        return g;
    };
    return s;
}

ParametricManifold make_flat(int eta) {
    ParametricManifold s;
    s.eta = eta;
    s.metric = [eta](const Vec&) { return Mat::Identity(eta, eta); };
    s.christoffel_zero = true;
    s.christoffel_dir_zero = true;
    s.christoffel_dir2_zero = true;
    return s;
}

using MakerMap =
    std::map<std::string, std::function<ImplicitManifold(const std::vector<double>&)>>;

MakerMap& registry() {
    static MakerMap reg;
    return reg;
}
std::mutex& registry_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

Manifold builtin(const std::string& name, const std::vector<double>& params) {
    if (name == "surface_sc") {
        if (params.size() != 1)
            throw ConfigError("surface_sc expects one parameter c");
        return Manifold(make_surface_sc(params[0]),
                        "surface_sc(c=" + std::to_string(params[0]) + ")");
    }
    if (name == "m4") {
        if (!params.empty()) throw ConfigError("m4 takes no parameters");
        return Manifold(make_m4(), "m4");
    }
    if (name == "sphere_param") {
        if (!params.empty()) throw ConfigError("sphere_param takes no parameters");
        return Manifold(make_sphere_param(), "sphere_param");
    }
    if (name == "flat") {
        if (params.size() != 1 || params[0] < 1.0)
            throw ConfigError("flat expects the dimension as its parameter");
        return Manifold(make_flat(static_cast<int>(params[0])),
                        "flat(" + std::to_string(static_cast<int>(params[0])) + ")");
    }
    throw ConfigError("unknown builtin manifold: " + name);
}

void register_implicit(const std::string& name,
                       std::function<ImplicitManifold(const std::vector<double>&)> maker) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    registry()[name] = std::move(maker);
}

Manifold make_registered(const std::string& name, const std::vector<double>& params) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = registry().find(name);
    if (it == registry().end())
        throw ConfigError("no registered constraint function named " + name);
    return Manifold(it->second(params), name);
}

}  // namespace riem
