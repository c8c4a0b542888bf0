#pragma once

#include <functional>
#include <vector>

#include "riem/types.hpp"

namespace riem::ode {

using Rhs = std::function<Vec(double, const Vec&)>;

enum class Method { rk4_fixed, rk45_adaptive };

/// Non-autonomous initial value problem y' = rhs(t, y), y(t0) = y0,
/// integrated to t1 (either direction).
struct IvpSpec {
    Rhs rhs;
    double t0 = 0.0;
    double t1 = 1.0;
    Vec y0;
};

struct IntegratorOptions {
    Method method = Method::rk45_adaptive;
    double step = 1e-2;       // fixed-step size (rk4_fixed)
    double rel_tol = 1e-10;   // adaptive tolerances
    double abs_tol = 1e-12;
    long max_steps = 1000000;
    bool dense_output = false;
};

/// Sampled solution. With dense_output the accepted nodes carry state
/// derivatives, and sample()/sample_derivative() evaluate the cubic
/// Hermite interpolant between them; otherwise only the endpoints are
/// stored.
class Trajectory {
public:
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> derivs;

    const Vec& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }

    Vec sample(double t) const;
    Vec sample_derivative(double t) const;

private:
    size_t locate(double t) const;
};

Trajectory integrate(const IvpSpec& spec, const IntegratorOptions& opts = {});

}  // namespace riem::ode
