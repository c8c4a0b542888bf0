#include "riem/geodesic.hpp"

#include <cmath>
#include <limits>

#include "riem/error.hpp"
#include "riem/linalg.hpp"
#include "systems.hpp"

namespace riem {

namespace {

void check_tangent(const Manifold& m, const Vec& q, const Vec& v) {
    if (v.size() != m.cdim()) throw InvalidInputError("tangent vector has wrong dimension");
    if (!v.allFinite()) throw InvalidInputError("tangent vector has non-finite entries");
    if (!m.is_implicit()) return;
    const Vec fv = m.imp().jac_at(q) * v;
    if (fv.norm() > m.tol().tangency * std::max(1.0, v.norm()))
        throw InvalidInputError("vector is not tangent to the manifold at q");
}

void check_drift(const Manifold& m, const ode::Trajectory& traj, double drift_tol) {
    if (!m.is_implicit()) return;
    const int d = m.cdim();
    for (const Vec& s : traj.states) {
        const double r = m.constraint_residual(s.head(d));
        if (r > drift_tol)
            throw ConstraintViolationError("geodesic drifted off the constraint set");
    }
}

}  // namespace

Frame make_frame(const Manifold& m, const Vec& x) {
    Frame f;
    f.x = x;
    const std::vector<Vec> b = tangent_basis(m, x);
    f.basis.resize(m.cdim(), m.eta());
    for (int i = 0; i < m.eta(); ++i) f.basis.col(i) = b[i];
    f.weight = m.metric_at(x);
    return f;
}

namespace {

// one Newton step onto the level set clears integrator-scale drift
double drift_check_tol(const Manifold& m, const ode::IntegratorOptions& o) {
    return std::max(m.tol().constraint, 10.0 * (o.rel_tol + o.abs_tol));
}

Vec constrain(const Manifold& m, Vec x) {
    if (!m.is_implicit()) return x;
    const auto& im = m.imp();
    const Vec f = im.value_at(x);
    if (f.norm() == 0.0) return x;
    const Mat a = im.jac_at(x);
    x -= linalg::pinv(a) * f;
    return x;
}

}  // namespace

ode::Trajectory exp_trajectory(const Manifold& m, const Vec& q, const Vec& v,
                               double t1, const GeodesicOptions& opts) {
    m.check_on_manifold(q, drift_check_tol(m, opts.ode));
    m.check_in_chart(q);
    check_tangent(m, q, v);
    const int d = m.cdim();
    ode::IvpSpec spec;
    spec.rhs = detail::geodesic_rhs(m);
    spec.t0 = 0.0;
    spec.t1 = t1;
    Vec y0(2 * d);
    y0.head(d) = q;
    y0.segment(d, d) = v;
    spec.y0 = y0;
    ode::IntegratorOptions o = opts.ode;
    o.dense_output = true;
    ode::Trajectory traj = ode::integrate(spec, o);
    check_drift(m, traj, opts.drift_tol);
    return traj;
}

Vec exp_map(const Manifold& m, const Vec& q, const Vec& v, double t,
            const GeodesicOptions& opts) {
    if (t == 0.0 || v.norm() == 0.0) {
        m.check_on_manifold(q, drift_check_tol(m, opts.ode));
        check_tangent(m, q, v);
        return q;
    }
    const ode::Trajectory traj = exp_trajectory(m, q, v, t, opts);
    return constrain(m, traj.final_state().head(m.cdim()));
}

ManifoldPoint exp_map(const Manifold& m, const TangentVector& v, double t,
                      const GeodesicOptions& opts) {
    return ManifoldPoint{exp_map(m, v.base.coords, v.dir, t, opts)};
}

Vec reverse_log(const Manifold& m, const Vec& y, const Vec& log_yx,
                const GeodesicOptions& opts) {
    if (log_yx.norm() == 0.0) return Vec::Zero(m.cdim());
    const ode::Trajectory traj = exp_trajectory(m, y, log_yx, 1.0, opts);
    const int d = m.cdim();
    const Vec x_end = traj.final_state().head(d);
    Vec vel = traj.final_state().segment(d, d);
    if (m.is_implicit()) {
        const auto& im = m.imp();
        const Mat a = im.jac_at(x_end);
        vel -= linalg::pinv(a) * (a * vel);  // momentum -> velocity
    }
    return -vel;
}

namespace {

Vec log_map_direct(const Manifold& m, const Vec& q, const Vec& x,
                   const ShootOptions& opts, const Vec* init) {
    m.check_on_manifold(q, drift_check_tol(m, opts.geo.ode));
    m.check_on_manifold(x, drift_check_tol(m, opts.geo.ode));
    const Frame fq = make_frame(m, q);
    std::vector<Vec> basis(fq.eta());
    for (int i = 0; i < fq.eta(); ++i) basis[i] = fq.basis.col(i);

    Vec c;  // iterate, coordinates in the frame at q
    if (init) {
        c = fq.to_coords(*init);
    } else if (m.is_implicit()) {
        c = fq.to_coords(x - q);  // tangent projection of the chord
    } else {
        c = fq.to_coords(x - q);  // chart difference
    }

    // Below this, residual reductions drown in integration error; a
    // Gauss-Newton iterate there is the best answer this precision allows.
    const double stall_floor =
        std::max(opts.tol, 20.0 * (opts.geo.ode.abs_tol +
                                   opts.geo.ode.rel_tol * (1.0 + x.norm())));
    double best = std::numeric_limits<double>::infinity();
    Vec residual;
    for (int it = 0; it < opts.max_iter; ++it) {
        const detail::VariationBatch batch =
            detail::integrate_variation(m, q, fq.from_coords(c), basis, 1.0, opts.geo.ode);
        residual = batch.x_end - x;
        const double rn = residual.norm();
        best = std::min(best, rn);
        if (rn < opts.tol) return fq.from_coords(c);

        // Gauss–Newton step from the exact differential
        const Vec delta = -linalg::pinv(batch.cols) * residual;
        double alpha = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half) {
            const Vec c_try = c + alpha * delta;
            Vec r_try;
            try {
                r_try = exp_map(m, q, fq.from_coords(c_try), 1.0, opts.geo) - x;
            } catch (const Error&) {
                alpha *= 0.5;
                continue;
            }
            if (r_try.norm() < rn) {
                c = c_try;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            // damped gradient fallback: descend on |r|^2
            const Vec grad = batch.cols.transpose() * residual;
            double beta = 1.0 / std::max(1.0, grad.norm());
            bool moved = false;
            for (int half = 0; half < 30; ++half) {
                const Vec c_try = c - beta * grad;
                Vec r_try;
                try {
                    r_try = exp_map(m, q, fq.from_coords(c_try), 1.0, opts.geo) - x;
                } catch (const Error&) {
                    beta *= 0.5;
                    continue;
                }
                if (r_try.norm() < rn) {
                    c = c_try;
                    moved = true;
                    break;
                }
                beta *= 0.5;
            }
            if (!moved) {
                if (rn <= stall_floor) return fq.from_coords(c);
                throw NoConvergenceError(
                    "log_map: shooting stalled (possible cut-locus proximity); best residual " +
                        std::to_string(best),
                    best);
            }
        }
    }
    throw NoConvergenceError(
        "log_map: no convergence after " + std::to_string(opts.max_iter) +
            " iterations (possible cut-locus proximity); best residual " + std::to_string(best),
        best);
}

// Chord-midpoint continuation: solve toward the Newton-projected chord
// midpoint first and extend that velocity to seed the full problem.
Vec log_map_continued(const Manifold& m, const Vec& q, const Vec& x,
                      const ShootOptions& opts, const Vec* init, int depth) {
    try {
        return log_map_direct(m, q, x, opts, init);
    } catch (const NoConvergenceError&) {
        if (depth <= 0 || !m.is_implicit()) throw;
        Vec mid = constrain(m, Vec(0.5 * (q + x)));
        mid = constrain(m, mid);
        if (m.constraint_residual(mid) > m.tol().constraint * 10.0) throw;
        const Vec v_half = log_map_continued(m, q, mid, opts, nullptr, depth - 1);
        const Vec seed = 2.0 * v_half;
        return log_map_continued(m, q, x, opts, &seed, depth - 1);
    }
}

}  // namespace

Vec log_map(const Manifold& m, const Vec& q, const Vec& x, const ShootOptions& opts,
            const Vec* init) {
    return log_map_continued(m, q, x, opts, init, 3);
}

double geodesic_distance(const Manifold& m, const Vec& q, const Vec& x,
                         const ShootOptions& opts) {
    const Vec v = log_map(m, q, x, opts);
    return m.norm(q, v);
}

}  // namespace riem
