#pragma once

#include <optional>

#include "riem/geodesic.hpp"

namespace riem {

/// Jacobi field J_t along the geodesic with initial velocity v, with
/// J_0 = u and covariant derivative (DJ/dt)_0 = w. The variation system
/// and the base geodesic integrate as one augmented IVP.
Vec jacobi_field(const Manifold& m, const Vec& q, const Vec& v, const Vec& u,
                 const Vec& w, double t, const GeodesicOptions& opts = {});

/// Dense augmented trajectory of the same system on [0, t1]; state layout
/// [x; xdot-or-p; y; z] with z the field value.
ode::Trajectory jacobi_trajectory(const Manifold& m, const Vec& q, const Vec& v,
                                  const Vec& u, const Vec& w, double t1,
                                  const GeodesicOptions& opts = {});

/// d_v Exp_q(w): the field value at t = 1 of the variation system with
/// initial values (w, 0).
Vec dexp(const Manifold& m, const Vec& q, const Vec& v, const Vec& w,
         const GeodesicOptions& opts = {});

/// d_v Exp_q applied to every vector of tangent_basis(q); raw columns in
/// the manifold's coordinates (cdim x eta).
Mat dexp_matrix_raw(const Manifold& m, const Vec& q, const Vec& v,
                    const GeodesicOptions& opts = {});

/// Same map as an eta x eta matrix from tangent_basis(q) coefficients to
/// tangent_basis(Exp_q v) coefficients.
Mat dexp_matrix(const Manifold& m, const Vec& q, const Vec& v,
                const GeodesicOptions& opts = {});

/// d_y Log_q = (d_{Log_q y} Exp_q)^{-1}, eta x eta from tangent_basis(y)
/// coefficients to tangent_basis(q) coefficients. Throws SingularityError
/// at (numerically) conjugate points.
Mat dlog(const Manifold& m, const Vec& q, const Vec& y,
         const ShootOptions& opts = {});

/// Second differential of the exponential map:
/// V = d/ds|_{s=0} d_{v + s u} Exp_q(w), from the second-order variation
/// system integrated jointly with the base geodesic and both first-order
/// systems.
Vec dexp_second(const Manifold& m, const Vec& q, const Vec& v, const Vec& w,
                const Vec& u, const GeodesicOptions& opts = {});

/// dexp_second with w running over tangent_basis(q); raw columns
/// (cdim x eta). Linear in w, so arbitrary w-values are column
/// combinations.
Mat dexp_second_matrix_raw(const Manifold& m, const Vec& q, const Vec& v,
                           const Vec& u, const GeodesicOptions& opts = {});

struct CurvatureEstimate {
    double value = 0.0;
    double t_used = 0.0;
    Vec plane_v, plane_w;  // the orthonormalized plane actually used
};

/// Sectional curvature of span{v, w} at q from the small-t expansion of
/// |J_t|: K ~ (6/t^3)(t - |J_t|) with J_0 = 0, (DJ/dt)_0 = w.
CurvatureEstimate sectional_curvature(const Manifold& m, const Vec& q, const Vec& v,
                                      const Vec& w, double t = 0.01,
                                      const GeodesicOptions& opts = {});

/// Smallest t* in (0, t_max] with |J_{t*}| = 0 for the Jacobi field with
/// J_0 = 0, (DJ/dt)_0 = w, or nullopt. Grid scan plus bisection on
/// d|J|^2/dt; a zero needs |J| below 1e-5 of the running maximum. The
/// result bounds the injectivity radius from above.
std::optional<double> conjugate_scan(const Manifold& m, const Vec& q, const Vec& v,
                                     const Vec& w, double t_max,
                                     const GeodesicOptions& opts = {});

}  // namespace riem
