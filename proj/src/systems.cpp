#include "systems.hpp"

#include <cmath>

#include "riem/error.hpp"
#include "riem/linalg.hpp"

namespace riem::detail {

namespace {

// T^P-style contraction: out_k = -sum_{ij} G(k,i,j) a_i b_j.
Vec tp(const Tensor3& g, const Vec& a, const Vec& b) {
    const int e = g.dim0();
    Vec out = Vec::Zero(e);
    for (int k = 0; k < e; ++k) {
        double acc = 0.0;
        for (int i = 0; i < e; ++i)
            for (int j = 0; j < e; ++j) acc += g(k, i, j) * a(i) * b(j);
        out(k) = -acc;
    }
    return out;
}

// T^H-style contraction: -(sum_k a_k H[k]) b.
Vec th(const std::vector<Mat>& hs, const Vec& a, const Vec& b) {
    Vec out = Vec::Zero(b.size());
    for (size_t k = 0; k < hs.size(); ++k) out.noalias() -= a(k) * (hs[k] * b);
    return out;
}

// Directional derivative of D_xF along z: row k is (H_k z)^T.
Mat jac_dir(const std::vector<Mat>& hs, const Vec& z) {
    Mat out(static_cast<int>(hs.size()), z.size());
    for (size_t k = 0; k < hs.size(); ++k) out.row(k) = (hs[k] * z).transpose();
    return out;
}

struct ImplicitCore {
    Mat a;       // D_xF
    Mat p;       // D_xF^+
    Vec mu;      // -(D_xF^T)^+ p
    Vec xdot;    // (I - P A) p
    std::vector<Mat> hs;
};

ImplicitCore implicit_core(const ImplicitManifold& im, const Vec& x, const Vec& mom) {
    ImplicitCore c;
    c.a = im.jac_at(x);
    c.p = pinv_fast(c.a);
    c.xdot = mom - c.p * (c.a * mom);
    c.mu = -(c.p.transpose() * mom);
    c.hs = im.hess_at(x);
    return c;
}

}  // namespace

Mat pinv_fast(const Mat& a) {
    if (a.rows() == 1) {
        const double s = a.row(0).squaredNorm();
        if (s > 1e-300) return a.transpose() / s;
    }
    return linalg::pinv(a);
}

ode::Rhs geodesic_rhs(const Manifold& m) {
    if (m.is_implicit()) {
        return [m](double, const Vec& s) {
            const auto& im = m.imp();
            const int d = im.m;
            const Vec x = s.head(d), mom = s.segment(d, d);
            const ImplicitCore c = implicit_core(im, x, mom);
            Vec out(2 * d);
            out.head(d) = c.xdot;
            out.segment(d, d) = th(c.hs, c.mu, c.xdot);
            return out;
        };
    }
    return [m](double, const Vec& s) {
        const auto& pm = m.par();
        const int d = pm.eta;
        const Vec x = s.head(d), v = s.segment(d, d);
        m.check_in_chart(x);
        Vec out(2 * d);
        out.head(d) = v;
        if (pm.christoffel_zero)
            out.segment(d, d).setZero();
        else
            out.segment(d, d) = tp(pm.christoffel_at(x), v, v);
        return out;
    };
}

ode::Rhs jacobi_rhs(const Manifold& m, int blocks) {
    if (m.is_implicit()) {
        return [m, blocks](double, const Vec& s) {
            const auto& im = m.imp();
            const int d = im.m;
            const Vec x = s.head(d), mom = s.segment(d, d);
            const ImplicitCore c = implicit_core(im, x, mom);
            const Vec ap = c.a * mom;
            Vec out(s.size());
            out.head(d) = c.xdot;
            out.segment(d, d) = th(c.hs, c.mu, c.xdot);
            for (int b = 0; b < blocks; ++b) {
                const int off = 2 * d + 2 * d * b;
                const Vec y = s.segment(off, d), z = s.segment(off + d, d);
                const Mat az = jac_dir(c.hs, z);
                const Mat lam = linalg::decell_lambda(c.a, az, c.p);
                const Vec zdot =
                    (y - c.p * (c.a * y)) - lam * ap - c.p * (az * mom);
                Vec ydot = th(c.hs, c.mu, zdot);
                if (!im.hess_dir_zero)
                    ydot += th(im.hess_dir_at(x, z), c.mu, c.xdot);
                const Vec m2 = -(c.p.transpose() * y) - lam.transpose() * mom;
                ydot += th(c.hs, m2, c.xdot);
                out.segment(off, d) = ydot;
                out.segment(off + d, d) = zdot;
            }
            return out;
        };
    }
    return [m, blocks](double, const Vec& s) {
        const auto& pm = m.par();
        const int d = pm.eta;
        const Vec x = s.head(d), v = s.segment(d, d);
        m.check_in_chart(x);
        const Tensor3 g = pm.christoffel_at(x);
        Vec out(s.size());
        out.head(d) = v;
        out.segment(d, d) = tp(g, v, v);
        for (int b = 0; b < blocks; ++b) {
            const int off = 2 * d + 2 * d * b;
            const Vec y = s.segment(off, d), z = s.segment(off + d, d);
            const Tensor3 gz = pm.christoffel_dir_at(x, z);
            out.segment(off, d) = tp(gz, v, v) + 2.0 * tp(g, y, v);
            out.segment(off + d, d) = y;
        }
        return out;
    };
}

ode::Rhs jacobi2_rhs(const Manifold& m, int blocks) {
    if (m.is_implicit()) {
        return [m, blocks](double, const Vec& s) {
            const auto& im = m.imp();
            const int d = im.m;
            const Vec x = s.head(d), mom = s.segment(d, d);
            const ImplicitCore c = implicit_core(im, x, mom);
            const Vec ap = c.a * mom;
            Vec out(s.size());
            out.head(d) = c.xdot;
            out.segment(d, d) = th(c.hs, c.mu, c.xdot);

            // shared u block
            const Vec yu = s.segment(2 * d, d), zu = s.segment(3 * d, d);
            const Mat au = jac_dir(c.hs, zu);
            const Mat lu = linalg::decell_lambda(c.a, au, c.p);
            const Vec zudot = (yu - c.p * (c.a * yu)) - lu * ap - c.p * (au * mom);
            const std::vector<Mat> hdu =
                im.hess_dir_zero ? std::vector<Mat>{} : im.hess_dir_at(x, zu);
            const Vec ds_mp = -(c.p.transpose() * yu) - lu.transpose() * mom;
            Vec yudot = th(c.hs, c.mu, zudot) + th(c.hs, ds_mp, c.xdot);
            if (!im.hess_dir_zero) yudot += th(hdu, c.mu, c.xdot);
            out.segment(2 * d, d) = yudot;
            out.segment(3 * d, d) = zudot;

            for (int b = 0; b < blocks; ++b) {
                const int off = 4 * d + 4 * d * b;
                const Vec yw = s.segment(off, d), zw = s.segment(off + d, d);
                const Vec qv = s.segment(off + 2 * d, d), rv = s.segment(off + 3 * d, d);

                const Mat aw = jac_dir(c.hs, zw);
                const Mat lw = linalg::decell_lambda(c.a, aw, c.p);
                const Vec zwdot = (yw - c.p * (c.a * yw)) - lw * ap - c.p * (aw * mom);
                const std::vector<Mat> hdw =
                    im.hess_dir_zero ? std::vector<Mat>{} : im.hess_dir_at(x, zw);
                const Vec dr_mp = -(c.p.transpose() * yw) - lw.transpose() * mom;
                Vec ywdot = th(c.hs, c.mu, zwdot) + th(c.hs, dr_mp, c.xdot);
                if (!im.hess_dir_zero) ywdot += th(hdw, c.mu, c.xdot);

                // full mixed derivative of D_xF along the two-parameter
                // variation: pure third-derivative part plus the transport
                // term along r
                const Mat ar = jac_dir(c.hs, rv);
                Mat dfull = ar;
                if (!im.hess_dir_zero) dfull += jac_dir(hdu, zw);
                const Mat lt = linalg::decell_lambda2(c.a, aw, au, dfull, c.p);

                Vec rdot = (qv - c.p * (c.a * qv));
                rdot -= lu * (c.a * yw) + c.p * (au * yw);
                rdot -= lw * (c.a * yu) + c.p * (aw * yu);
                rdot -= lt * ap + lw * (au * mom) + lu * (aw * mom) + c.p * (dfull * mom);

                const Vec dsdr_mp = -(lt.transpose() * mom) - lw.transpose() * yu -
                                    lu.transpose() * yw - c.p.transpose() * qv;

                Vec qdot = th(c.hs, c.mu, rdot) + th(c.hs, ds_mp, zwdot) +
                           th(c.hs, dsdr_mp, c.xdot) + th(c.hs, dr_mp, zudot);
                if (!im.hess_dir_zero) {
                    qdot += th(hdu, c.mu, zwdot);
                    qdot += th(hdw, ds_mp, c.xdot);
                    qdot += th(hdw, c.mu, zudot);
                    qdot += th(hdu, dr_mp, c.xdot);
                    qdot += th(im.hess_dir_at(x, rv), c.mu, c.xdot);
                }
                if (!im.hess_dir2_zero)
                    qdot += th(im.hess_dir2_at(x, zu, zw), c.mu, c.xdot);

                out.segment(off, d) = ywdot;
                out.segment(off + d, d) = zwdot;
                out.segment(off + 2 * d, d) = qdot;
                out.segment(off + 3 * d, d) = rdot;
            }
            return out;
        };
    }
    return [m, blocks](double, const Vec& s) {
        const auto& pm = m.par();
        const int d = pm.eta;
        const Vec x = s.head(d), v = s.segment(d, d);
        m.check_in_chart(x);
        const Tensor3 g = pm.christoffel_at(x);
        Vec out(s.size());
        out.head(d) = v;
        out.segment(d, d) = tp(g, v, v);

        const Vec yu = s.segment(2 * d, d), zu = s.segment(3 * d, d);
        const Tensor3 gu = pm.christoffel_dir_at(x, zu);
        out.segment(2 * d, d) = tp(gu, v, v) + 2.0 * tp(g, yu, v);
        out.segment(3 * d, d) = yu;

        for (int b = 0; b < blocks; ++b) {
            const int off = 4 * d + 4 * d * b;
            const Vec yw = s.segment(off, d), zw = s.segment(off + d, d);
            const Vec qv = s.segment(off + 2 * d, d), rv = s.segment(off + 3 * d, d);
            const Tensor3 gw = pm.christoffel_dir_at(x, zw);
            const Tensor3 gr = pm.christoffel_dir_at(x, rv);
            const Tensor3 g2 = pm.christoffel_dir2_at(x, zu, zw);
            out.segment(off, d) = tp(gw, v, v) + 2.0 * tp(g, yw, v);
            out.segment(off + d, d) = yw;
            out.segment(off + 2 * d, d) = tp(g2, v, v) + tp(gr, v, v) +
                                          2.0 * tp(gw, yu, v) + 2.0 * tp(gu, yw, v) +
                                          2.0 * tp(g, qv, v) + 2.0 * tp(g, yw, yu);
            out.segment(off + 3 * d, d) = qv;
        }
        return out;
    };
}

VariationBatch integrate_variation(const Manifold& m, const Vec& q, const Vec& v,
                                   const std::vector<Vec>& dirs, double t,
                                   const ode::IntegratorOptions& opts,
                                   bool keep_dense) {
    const int d = m.cdim();
    const int k = static_cast<int>(dirs.size());
    VariationBatch out;
    if (t == 0.0 || v.norm() == 0.0) {
        // constant geodesic: J_t = t w exactly
        out.x_end = q;
        out.w_end = v;
        out.cols.resize(d, k);
        for (int i = 0; i < k; ++i) out.cols.col(i) = t * dirs[i];
        if (keep_dense) {
            Vec s0 = Vec::Zero(2 * d + 2 * d * k);
            s0.head(d) = q;
            s0.segment(d, d) = v;
            out.traj.times = {0.0, t};
            out.traj.states = {s0, s0};
            out.traj.derivs = {Vec::Zero(s0.size()), Vec::Zero(s0.size())};
            for (int i = 0; i < k; ++i) {
                out.traj.states[0].segment(2 * d + 2 * d * i, d) = dirs[i];
                out.traj.states[1].segment(2 * d + 2 * d * i, d) = dirs[i];
                out.traj.states[1].segment(2 * d + 2 * d * i + d, d) = t * dirs[i];
                out.traj.derivs[0].segment(2 * d + 2 * d * i + d, d) = dirs[i];
                out.traj.derivs[1].segment(2 * d + 2 * d * i + d, d) = dirs[i];
            }
        }
        return out;
    }
    ode::IvpSpec spec;
    spec.rhs = jacobi_rhs(m, k);
    spec.t0 = 0.0;
    spec.t1 = t;
    Vec y0(2 * d + 2 * d * k);
    y0.head(d) = q;
    y0.segment(d, d) = v;
    for (int i = 0; i < k; ++i) {
        y0.segment(2 * d + 2 * d * i, d) = dirs[i];     // y_0 = w
        y0.segment(2 * d + 2 * d * i + d, d).setZero(); // z_0 = 0
    }
    spec.y0 = y0;
    ode::IntegratorOptions o = opts;
    o.dense_output = keep_dense || o.dense_output;
    ode::Trajectory traj = ode::integrate(spec, o);
    const Vec& fin = traj.final_state();
    out.x_end = fin.head(d);
    out.w_end = fin.segment(d, d);
    out.cols.resize(d, k);
    for (int i = 0; i < k; ++i) out.cols.col(i) = fin.segment(2 * d + 2 * d * i + d, d);
    if (keep_dense) out.traj = std::move(traj);
    return out;
}

SecondVariationBatch integrate_second_variation(const Manifold& m, const Vec& q,
                                                const Vec& v,
                                                const std::vector<Vec>& wdirs,
                                                const Vec& u, double t,
                                                const ode::IntegratorOptions& opts) {
    const int d = m.cdim();
    const int k = static_cast<int>(wdirs.size());
    SecondVariationBatch out;
    ode::IvpSpec spec;
    spec.rhs = jacobi2_rhs(m, k);
    spec.t0 = 0.0;
    spec.t1 = t;
    Vec y0 = Vec::Zero(4 * d + 4 * d * k);
    y0.head(d) = q;
    y0.segment(d, d) = v;
    y0.segment(2 * d, d) = u;  // u block IVs (u, 0)
    for (int j = 0; j < k; ++j) y0.segment(4 * d + 4 * d * j, d) = wdirs[j];  // (w, 0, 0, 0)
    spec.y0 = y0;
    const ode::Trajectory traj = ode::integrate(spec, opts);
    const Vec& fin = traj.final_state();
    out.x_end = fin.head(d);
    out.cols.resize(d, k);
    for (int j = 0; j < k; ++j)
        out.cols.col(j) = fin.segment(4 * d + 4 * d * j + 3 * d, d);  // r part
    return out;
}

}  // namespace riem::detail
