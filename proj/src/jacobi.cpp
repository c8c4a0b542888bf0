#include "riem/jacobi.hpp"

#include <cmath>

#include "riem/error.hpp"
#include "riem/linalg.hpp"
#include "systems.hpp"

namespace riem {

namespace {

double drift_check_tol(const Manifold& m, const ode::IntegratorOptions& o) {
    return std::max(m.tol().constraint, 10.0 * (o.rel_tol + o.abs_tol));
}

void check_tangent_dir(const Manifold& m, const Vec& q, const Vec& v, const char* who) {
    if (v.size() != m.cdim())
        throw InvalidInputError(std::string(who) + ": vector has wrong dimension");
    if (!m.is_implicit()) return;
    const Vec fv = m.imp().jac_at(q) * v;
    if (fv.norm() > m.tol().tangency * std::max(1.0, v.norm()))
        throw InvalidInputError(std::string(who) + ": vector is not tangent at q");
}

void check_variation_data(const Manifold& m, int order) {
    if (m.is_implicit()) {
        const auto& im = m.imp();
        if (!im.value) throw CapabilityError("implicit manifold lacks a constraint map");
        (void)order;  // fallbacks cover missing hess/d3F/d4F callbacks
    } else {
        if (!m.par().christoffel && !m.par().christoffel_zero)
            throw CapabilityError("parametric manifold lacks Christoffel symbols");
    }
}

Vec start_state(const Manifold& m, const Vec& q, const Vec& v, const Vec& y0,
                const Vec& z0) {
    const int d = m.cdim();
    Vec s(4 * d);
    s.head(d) = q;
    s.segment(d, d) = v;
    s.segment(2 * d, d) = y0;
    s.segment(3 * d, d) = z0;
    return s;
}

}  // namespace

Vec jacobi_field(const Manifold& m, const Vec& q, const Vec& v, const Vec& u,
                 const Vec& w, double t, const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 1);
    check_tangent_dir(m, q, v, "jacobi_field");
    check_tangent_dir(m, q, u, "jacobi_field");
    check_tangent_dir(m, q, w, "jacobi_field");
    const int d = m.cdim();
    if (t == 0.0) return u;
    ode::IvpSpec spec;
    spec.rhs = detail::jacobi_rhs(m, 1);
    spec.t0 = 0.0;
    spec.t1 = t;
    spec.y0 = start_state(m, q, v, w, u);
    const ode::Trajectory traj = ode::integrate(spec, opts.ode);
    return traj.final_state().segment(3 * d, d);
}

ode::Trajectory jacobi_trajectory(const Manifold& m, const Vec& q, const Vec& v,
                                  const Vec& u, const Vec& w, double t1,
                                  const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 1);
    ode::IvpSpec spec;
    spec.rhs = detail::jacobi_rhs(m, 1);
    spec.t0 = 0.0;
    spec.t1 = t1;
    spec.y0 = start_state(m, q, v, w, u);
    ode::IntegratorOptions o = opts.ode;
    o.dense_output = true;
    return ode::integrate(spec, o);
}

Vec dexp(const Manifold& m, const Vec& q, const Vec& v, const Vec& w,
         const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 1);
    check_tangent_dir(m, q, v, "dexp");
    check_tangent_dir(m, q, w, "dexp");
    const auto batch = detail::integrate_variation(m, q, v, {w}, 1.0, opts.ode);
    return batch.cols.col(0);
}

Mat dexp_matrix_raw(const Manifold& m, const Vec& q, const Vec& v,
                    const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 1);
    const std::vector<Vec> basis = tangent_basis(m, q);
    return detail::integrate_variation(m, q, v, basis, 1.0, opts.ode).cols;
}

Mat dexp_matrix(const Manifold& m, const Vec& q, const Vec& v,
                const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 1);
    const std::vector<Vec> basis = tangent_basis(m, q);
    const auto batch = detail::integrate_variation(m, q, v, basis, 1.0, opts.ode);
    const Frame fy = make_frame(m, batch.x_end);
    Mat out(m.eta(), m.eta());
    for (int i = 0; i < m.eta(); ++i) out.col(i) = fy.to_coords(batch.cols.col(i));
    return out;
}

Mat dlog(const Manifold& m, const Vec& q, const Vec& y, const ShootOptions& opts) {
    const Vec v = log_map(m, q, y, opts);
    const Mat dm = dexp_matrix(m, q, v, opts.geo);
    const Eigen::JacobiSVD<Mat> svd(dm);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-10 * sv(0))
        throw SingularityError("dlog: dExp is singular (conjugate point)");
    return dm.inverse();
}

Vec dexp_second(const Manifold& m, const Vec& q, const Vec& v, const Vec& w,
                const Vec& u, const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 2);
    check_tangent_dir(m, q, v, "dexp_second");
    check_tangent_dir(m, q, w, "dexp_second");
    check_tangent_dir(m, q, u, "dexp_second");
    const auto batch = detail::integrate_second_variation(m, q, v, {w}, u, 1.0, opts.ode);
    return batch.cols.col(0);
}

Mat dexp_second_matrix_raw(const Manifold& m, const Vec& q, const Vec& v,
                           const Vec& u, const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    check_variation_data(m, 2);
    const std::vector<Vec> basis = tangent_basis(m, q);
    return detail::integrate_second_variation(m, q, v, basis, u, 1.0, opts.ode).cols;
}

CurvatureEstimate sectional_curvature(const Manifold& m, const Vec& q, const Vec& v,
                                      const Vec& w, double t,
                                      const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    if (t <= 0.0) throw InvalidInputError("sectional_curvature: t must be positive");
    const double vn = m.norm(q, v);
    if (vn < 1e-12) throw InvalidInputError("sectional_curvature: zero direction");
    const Vec vhat = v / vn;
    Vec wperp = w - m.inner(q, w, vhat) * vhat;
    const double wn = m.norm(q, wperp);
    if (wn < 1e-10)
        throw InvalidInputError("sectional_curvature: degenerate plane");
    wperp /= wn;

    ode::IvpSpec spec;
    spec.rhs = detail::jacobi_rhs(m, 1);
    spec.t0 = 0.0;
    spec.t1 = t;
    spec.y0 = start_state(m, q, vhat, wperp, Vec::Zero(m.cdim()));
    const ode::Trajectory traj = ode::integrate(spec, opts.ode);
    const int d = m.cdim();
    const Vec xt = traj.final_state().head(d);
    const Vec jt = traj.final_state().segment(3 * d, d);
    CurvatureEstimate est;
    est.value = 6.0 / (t * t * t) * (t - m.norm(xt, jt));
    est.t_used = t;
    est.plane_v = vhat;
    est.plane_w = wperp;
    return est;
}

std::optional<double> conjugate_scan(const Manifold& m, const Vec& q, const Vec& v,
                                     const Vec& w, double t_max,
                                     const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    if (t_max <= 0.0) throw InvalidInputError("conjugate_scan: t_max must be positive");
    if (v.norm() == 0.0 || w.norm() == 0.0)
        throw InvalidInputError("conjugate_scan: v and w must be nonzero");
    check_tangent_dir(m, q, v, "conjugate_scan");
    check_tangent_dir(m, q, w, "conjugate_scan");
    if (std::abs(m.inner(q, v, w)) > 1e-8 * m.norm(q, v) * m.norm(q, w))
        throw InvalidInputError("conjugate_scan: w must be orthogonal to v");

    const int d = m.cdim();
    const auto batch =
        detail::integrate_variation(m, q, v, {w}, t_max, opts.ode, /*keep_dense=*/true);
    const auto& traj = batch.traj;

    auto norm_at = [&](double t) {
        const Vec s = traj.sample(t);
        return m.norm(s.head(d), s.segment(3 * d, d));
    };
    // d|J|^2/dt via the interpolated state derivative
    auto growth_at = [&](double t) {
        const Vec s = traj.sample(t);
        const Vec sd = traj.sample_derivative(t);
        return s.segment(3 * d, d).dot(sd.segment(3 * d, d));
    };

    constexpr int kGrid = 200;
    double max_norm = 0.0;
    std::vector<double> ts(kGrid), ns(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        ts[i] = t_max * static_cast<double>(i + 1) / kGrid;
        ns[i] = norm_at(ts[i]);
        max_norm = std::max(max_norm, ns[i]);
    }
    const double floor = 1e-5 * max_norm;

    for (int i = 1; i < kGrid; ++i) {
        double lo = ts[i - 1], hi = ts[i];
        if (!(growth_at(lo) < 0.0 && growth_at(hi) >= 0.0)) continue;
        while (hi - lo > 1e-6) {  // bisect the minimum of |J|
            const double mid = 0.5 * (lo + hi);
            if (growth_at(mid) < 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const double t_star = 0.5 * (lo + hi);
        if (norm_at(t_star) < floor) return t_star;
    }
    return std::nullopt;
}

}  // namespace riem
