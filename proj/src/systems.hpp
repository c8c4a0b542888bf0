#pragma once

// Right-hand sides of the geodesic IVPs and of their first and second
// variation systems, for both manifold representations. State layouts:
//   geodesic:    [x; w]                      (w = velocity or momentum)
//   first order: [x; w; (y_i; z_i) * K]      one block per initial value pair
//   second order:[x; w; yu; zu; (yw_j; zw_j; q_j; r_j) * K]
// All blocks share the base geodesic so each system integrates as a
// single augmented IVP.

#include "riem/manifold.hpp"
#include "riem/ode.hpp"

namespace riem::detail {

/// Pseudoinverse specialized for the small full-rank Jacobians the
/// geodesic systems produce at every step (closed form for one-row
/// constraints, SVD otherwise).
Mat pinv_fast(const Mat& a);

ode::Rhs geodesic_rhs(const Manifold& m);
ode::Rhs jacobi_rhs(const Manifold& m, int blocks);
ode::Rhs jacobi2_rhs(const Manifold& m, int blocks);

/// One augmented integration of the first-order system: endpoint of the
/// geodesic plus d_{v}Exp_q applied to each of `dirs` (z-parts at t).
struct VariationBatch {
    Vec x_end;
    Vec w_end;              // final velocity/momentum
    Mat cols;               // cdim x K, column i = z_i(t)
    ode::Trajectory traj;   // full augmented trajectory (dense)
};
VariationBatch integrate_variation(const Manifold& m, const Vec& q, const Vec& v,
                                   const std::vector<Vec>& dirs, double t,
                                   const ode::IntegratorOptions& opts,
                                   bool keep_dense = false);

/// One augmented integration of the second-order system with u fixed and
/// w running over `wdirs`: column j = r_j(t) = d/ds d_{v_s}Exp_q(w_j).
struct SecondVariationBatch {
    Vec x_end;
    Mat cols;  // cdim x K
};
SecondVariationBatch integrate_second_variation(const Manifold& m, const Vec& q,
                                                const Vec& v,
                                                const std::vector<Vec>& wdirs,
                                                const Vec& u, double t,
                                                const ode::IntegratorOptions& opts);

}  // namespace riem::detail
