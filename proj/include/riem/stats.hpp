#pragma once

#include <optional>
#include <vector>

#include "riem/jacobi.hpp"

namespace riem {

/// Exp_mu(V) for a k-dimensional subspace V of T_mu M. Basis vectors are
/// stored in manifold coordinates and must be orthonormal under the
/// metric at the center.
struct GeodesicSubspace {
    Vec center;
    std::vector<Vec> basis;
    int k() const { return static_cast<int>(basis.size()); }
};

/// One evaluation of the residual R_{x,mu}(w) = d(Exp_mu w, x)^2 restricted
/// to a subspace; w and gradient are coefficient vectors in the subspace
/// basis.
struct ResidualEval {
    Vec w;
    double value = 0.0;
    Vec gradient;
    std::optional<Mat> hessian;
};

struct ProjectOptions {
    double grad_tol = 1e-8;
    int max_iter = 200;
    int max_backtrack = 30;
    ShootOptions shoot;
    const Vec* init_w = nullptr;    // optional warm start (subspace coefficients)
    const Vec* init_log = nullptr;  // optional seed for the residual log
};

struct KarcherOptions {
    double tol = 1e-8;  // on the mean log norm
    int max_iter = 1000;
    ShootOptions shoot;
};

/// Intrinsic mean: fixed-point iteration mu <- Exp_mu(mean of logs).
Vec karcher_mean(const Manifold& m, const std::vector<Vec>& data,
                 const KarcherOptions& opts = {});

/// Gradient of the restricted residual at subspace coefficients w:
/// -2 (D_w Exp_mu)_{1..k}^T Log_{Exp_mu w} x.
Vec residual_gradient(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                      const Vec& w, const ProjectOptions& opts = {});

/// with_hessian also fills the Hessian of the restricted residual (k x k
/// in the subspace basis).
ResidualEval residual_eval(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                           const Vec& w, const ProjectOptions& opts = {},
                           bool with_hessian = false);

/// Hessian of the unrestricted residual in the given orthonormal basis of
/// T_mu M (tangent_basis(mu) when omitted). Assembled from the first and
/// second differentials of Exp at both base points.
Mat residual_hessian(const Manifold& m, const Vec& x, const Vec& mu, const Vec& w_coords,
                     const std::vector<Vec>* basis = nullptr,
                     const ProjectOptions& opts = {});

struct Projection {
    Vec point;   // pi_S(x)
    Vec w;       // subspace coefficients of Log_mu pi_S(x)
    Vec log_yx;  // Log_{pi_S(x)} x, reusable as a shooting seed
    double value = 0.0;  // residual at the optimum
    int iterations = 0;
};

/// Projection onto a geodesic subspace: gradient descent with backtracking
/// from the tangent-space initial guess, stopping at |grad| < grad_tol.
Projection project(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                   const ProjectOptions& opts = {});

/// Differential of v -> pi_{S_v}(x) at v0 in the directions of
/// V_{v0}-perp, where S_v = Exp_mu(span{V, v}).
struct ProjectionDifferential {
    Mat dpi;                    // cdim x (eta-k-1)
    std::vector<Vec> perp;      // the completion basis spanning V_{v0}-perp
    Vec v0_unit;                // normalized v0
    Vec w0;                     // projection coefficients in span{V, v0}
    Vec pi_point;
    Mat hess_cols;              // first k+1 residual Hessian columns, adapted basis
};

ProjectionDifferential projection_differential(const Manifold& m, const Vec& x,
                                               const Vec& mu,
                                               const std::vector<Vec>& v_basis,
                                               const Vec& v0,
                                               const ProjectOptions& opts = {},
                                               const Projection* precomputed = nullptr);

/// Gradient of v -> d(y, pi_{S_v}(x))^2 in V_{v0}-perp, returned as a
/// tangent vector at mu. y = mu gives the variance form, y = x the
/// reconstruction form.
Vec variance_gradient(const Manifold& m, const Vec& y, const Vec& x, const Vec& mu,
                      const std::vector<Vec>& v_basis, const Vec& v0,
                      const ProjectOptions& opts = {},
                      const Projection* precomputed = nullptr);

enum class PgaMode { variance, reconstruction, linearized };

enum class PgaUpdate { add_normalize, exp_sphere };

struct PgaOptions {
    PgaMode mode = PgaMode::variance;
    int count = 0;  // 0 = all eta directions
    int max_outer = 500;
    double step_tol = 1e-7;       // |v_new - v| at convergence
    int max_backtrack = 30;
    double init_nudge = 5e-2;     // deterministic push off symmetric saddles
    PgaUpdate update = PgaUpdate::add_normalize;
    ProjectOptions proj;
    KarcherOptions karcher;
};

struct PgaModel {
    Vec mean;
    std::vector<Vec> directions;     // tangent vectors at the mean, orthonormal
    std::vector<double> variances;   // projected sample variance per nested subspace
    PgaMode mode = PgaMode::variance;
    std::vector<int> iterations;
    std::vector<bool> converged;
};

/// Principal geodesic analysis. Exact modes optimize the projected
/// variance (or reconstruction error) greedily per direction; linearized
/// mode is PCA on the log-mapped data. Variances are always the exact
/// projected sample variances of the nested subspaces, so modes are
/// directly comparable.
PgaModel pga(const Manifold& m, const std::vector<Vec>& data, const PgaOptions& opts = {});

/// PCA of tangent coefficient vectors: eigenpairs of the (uncentered)
/// second-moment matrix, eigenvalues descending, each vector's sign fixed
/// so its largest-magnitude coordinate is positive.
std::pair<std::vector<double>, std::vector<Vec>> tangent_pca(const std::vector<Vec>& coords);

}  // namespace riem
