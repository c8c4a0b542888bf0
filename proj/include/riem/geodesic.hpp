#pragma once

#include "riem/manifold.hpp"
#include "riem/ode.hpp"

namespace riem {

struct GeodesicOptions {
    ode::IntegratorOptions ode;
    double drift_tol = 1e-8;  // max |F(x_t)| allowed along implicit geodesics
};

/// Orthonormal frame of T_xM. to_coords/from_coords convert between
/// coordinate vectors of the representation and basis coefficients.
struct Frame {
    Vec x;
    Mat basis;   // cdim x eta, columns orthonormal under the metric at x
    Mat weight;  // metric at x (identity for implicit manifolds)

    Vec to_coords(const Vec& v) const { return basis.transpose() * (weight * v); }
    Vec from_coords(const Vec& c) const { return basis * c; }
    int eta() const { return static_cast<int>(basis.cols()); }
};

Frame make_frame(const Manifold& m, const Vec& x);

/// Full state trajectory of the geodesic through q with initial
/// velocity/momentum v, sampled densely on [0, t1]. State layout
/// [x; xdot] (parametric) or [x; p] (implicit).
ode::Trajectory exp_trajectory(const Manifold& m, const Vec& q, const Vec& v,
                               double t1, const GeodesicOptions& opts = {});

/// Exp_q(t v).
Vec exp_map(const Manifold& m, const Vec& q, const Vec& v, double t = 1.0,
            const GeodesicOptions& opts = {});

ManifoldPoint exp_map(const Manifold& m, const TangentVector& v, double t = 1.0,
                      const GeodesicOptions& opts = {});

struct ShootOptions {
    double tol = 1e-9;  // |Exp_q(v) - x| at convergence
    int max_iter = 100;
    GeodesicOptions geo;
};

/// Log_q(x) by shooting: Gauss–Newton on v -> Exp_q(v) - x with the exact
/// differential of Exp as Jacobian, damped when a step fails to reduce
/// the residual. `init` optionally seeds the iteration with a tangent
/// vector at q.
Vec log_map(const Manifold& m, const Vec& q, const Vec& x,
            const ShootOptions& opts = {}, const Vec* init = nullptr);

double geodesic_distance(const Manifold& m, const Vec& q, const Vec& x,
                         const ShootOptions& opts = {});

/// Log_x(y) from a known forward log: the reversed endpoint velocity of
/// the geodesic t -> Exp_y(t log_yx). One integration, no shooting.
Vec reverse_log(const Manifold& m, const Vec& y, const Vec& log_yx,
                const GeodesicOptions& opts = {});

}  // namespace riem
