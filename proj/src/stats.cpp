#include "riem/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "riem/error.hpp"
#include "riem/linalg.hpp"
#include "systems.hpp"

namespace riem {

namespace {

Vec combine(const std::vector<Vec>& basis, const Vec& coeffs) {
    Vec out = Vec::Zero(basis.empty() ? 0 : basis[0].size());
    for (size_t i = 0; i < basis.size(); ++i) out += coeffs(static_cast<int>(i)) * basis[i];
    return out;
}

// value, gradient and dExp columns of the restricted residual at w
struct ResidualState {
    Vec w;
    double value = 0.0;
    Vec gradient;
    Vec y;
    Vec log_yx;
    Mat dexp_cols;
};

ResidualState eval_residual(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                            const Vec& w, const ProjectOptions& opts,
                            const Vec* warm_log) {
    ResidualState st;
    st.w = w;
    const Vec w_vec = combine(s.basis, w);
    const auto batch =
        detail::integrate_variation(m, s.center, w_vec, s.basis, 1.0, opts.shoot.geo.ode);
    st.y = batch.x_end;
    st.log_yx = log_map(m, st.y, x, opts.shoot, warm_log);
    st.value = m.inner(st.y, st.log_yx, st.log_yx);
    st.dexp_cols = batch.cols;
    st.gradient.resize(s.k());
    for (int i = 0; i < s.k(); ++i)
        st.gradient(i) = -2.0 * m.inner(st.y, batch.cols.col(i), st.log_yx);
    return st;
}

Mat hessian_columns(const Manifold& m, const Vec& x, const Vec& mu,
                    const std::vector<Vec>& basis, const Vec& w_vec, int ncols,
                    const ProjectOptions& opts, const detail::VariationBatch* fwd,
                    const Vec* log_yx_known);

// mode-agnostic singular-inverse guard
Mat guarded_inverse(const Mat& a, const char* who) {
    const Eigen::JacobiSVD<Mat> svd(a);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) < 1e-12 * sv(0))
        throw SingularityError(std::string(who) + ": singular matrix");
    return a.inverse();
}

}  // namespace

Vec karcher_mean(const Manifold& m, const std::vector<Vec>& data,
                 const KarcherOptions& opts) {
    if (data.empty()) throw InvalidInputError("karcher_mean: empty dataset");
    const size_t n = data.size();
    Vec mu = data[0];
    std::vector<Vec> warm(n);
    std::vector<bool> has_warm(n, false);
    for (int it = 0; it < opts.max_iter; ++it) {
        Vec mean = Vec::Zero(m.cdim());
        for (size_t j = 0; j < n; ++j) {
            const Vec lj =
                log_map(m, mu, data[j], opts.shoot, has_warm[j] ? &warm[j] : nullptr);
            warm[j] = lj;
            has_warm[j] = true;
            mean += lj;
        }
        mean /= static_cast<double>(n);
        if (m.norm(mu, mean) < opts.tol) return mu;
        mu = exp_map(m, mu, mean, 1.0, opts.shoot.geo);
    }
    throw NoConvergenceError("karcher_mean: no convergence", 0.0);
}

Vec residual_gradient(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                      const Vec& w, const ProjectOptions& opts) {
    return eval_residual(m, x, s, w, opts, nullptr).gradient;
}

ResidualEval residual_eval(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                           const Vec& w, const ProjectOptions& opts, bool with_hessian) {
    const ResidualState st = eval_residual(m, x, s, w, opts, nullptr);
    ResidualEval out;
    out.w = st.w;
    out.value = st.value;
    out.gradient = st.gradient;
    if (with_hessian) {
        const std::vector<Vec> full = complete_tangent_basis(m, s.center, s.basis);
        const Mat cols = hessian_columns(m, x, s.center, full, combine(s.basis, w),
                                         s.k(), opts, nullptr, &st.log_yx);
        out.hessian = cols.topRows(s.k());
    }
    return out;
}

Projection project(const Manifold& m, const Vec& x, const GeodesicSubspace& s,
                   const ProjectOptions& opts) {
    if (s.k() == 0) throw InvalidInputError("project: empty subspace basis");
    const Frame fmu = make_frame(m, s.center);

    if (s.k() == m.eta()) {  // full tangent space: the projection is x itself
        const Vec l = log_map(m, s.center, x, opts.shoot);
        Projection pr;
        pr.w.resize(s.k());
        for (int i = 0; i < s.k(); ++i) pr.w(i) = m.inner(s.center, s.basis[i], l);
        pr.point = x;
        pr.log_yx = Vec::Zero(m.cdim());
        pr.value = 0.0;
        return pr;
    }

    // initial guess: a supplied warm start, else the tangent-space
    // orthogonal projection of Log_mu x
    Vec w(s.k());
    if (opts.init_w && opts.init_w->size() == s.k()) {
        w = *opts.init_w;
    } else {
        const Vec l0 = log_map(m, s.center, x, opts.shoot);
        for (int i = 0; i < s.k(); ++i) w(i) = m.inner(s.center, s.basis[i], l0);
    }

    const Vec* log_seed =
        opts.init_log && opts.init_log->size() == m.cdim() ? opts.init_log : nullptr;
    ResidualState st = eval_residual(m, x, s, w, opts, log_seed);
    double best = st.gradient.norm();
    for (int it = 0; it < opts.max_iter; ++it) {
        const double gn = st.gradient.norm();
        best = std::min(best, gn);
        if (gn < opts.grad_tol) {
            Projection pr;
            pr.point = st.y;
            pr.w = st.w;
            pr.log_yx = st.log_yx;
            pr.value = st.value;
            pr.iterations = it;
            return pr;
        }
        // value-decrease backtracking; decrements below the evaluation
        // noise cannot be verified by value, so the endgame accepts steps
        // that halve the gradient instead. The log accuracy floor mirrors
        // the shooting stall floor.
        const double log_floor =
            std::max(opts.shoot.tol,
                     20.0 * (opts.shoot.geo.ode.abs_tol +
                             opts.shoot.geo.ode.rel_tol * (1.0 + x.norm())));
        const double value_noise =
            4.0 * log_floor * (1.0 + std::sqrt(std::max(0.0, st.value)));
        double alpha = 1.0;
        bool accepted = false;
        ResidualState fallback;
        bool have_fallback = false;
        for (int bt = 0; bt < opts.max_backtrack; ++bt) {
            const Vec w_try = st.w - alpha * st.gradient;
            ResidualState st_try = eval_residual(m, x, s, w_try, opts, &st.log_yx);
            if (st_try.value < st.value - value_noise) {
                st = std::move(st_try);
                accepted = true;
                break;
            }
            if (!have_fallback && st_try.gradient.norm() < 0.5 * gn) {
                fallback = std::move(st_try);
                have_fallback = true;
            }
            alpha *= 0.5;
            if (have_fallback && bt >= 6) break;     // endgame: take the gradient step
            if (alpha * gn < 1e-12 * (1.0 + st.w.norm())) break;  // step below resolution
        }
        if (!accepted && have_fallback) {
            st = std::move(fallback);
            accepted = true;
        }
        if (!accepted) {
            if (gn <= 1e3 * opts.grad_tol) {  // descent exhausted at the noise floor
                Projection pr;
                pr.point = st.y;
                pr.w = st.w;
                pr.log_yx = st.log_yx;
                pr.value = st.value;
                pr.iterations = it;
                return pr;
            }
            throw NoConvergenceError(
                "project: line search stalled; best gradient norm " + std::to_string(best),
                best);
        }
    }
    throw NoConvergenceError("project: no convergence; best gradient norm " +
                                 std::to_string(best),
                             best);
}

namespace {

// Columns 0..ncols-1 of the residual Hessian in the given basis; the
// forward batch (Exp at w over the full basis) and a seed for Log_x y can
// be supplied by callers that already have them.
Mat hessian_columns(const Manifold& m, const Vec& x, const Vec& mu,
                    const std::vector<Vec>& basis, const Vec& w_vec, int ncols,
                    const ProjectOptions& opts, const detail::VariationBatch* fwd,
                    const Vec* log_yx_known) {
    const int eta = m.eta();
    const auto& ode_opts = opts.shoot.geo.ode;
    detail::VariationBatch local;
    if (!fwd) {
        local = detail::integrate_variation(m, mu, w_vec, basis, 1.0, ode_opts);
        fwd = &local;
    }
    const Vec y = fwd->x_end;
    const Frame fy = make_frame(m, y);
    const Frame fx = make_frame(m, x);
    std::vector<Vec> bx(eta);
    for (int i = 0; i < eta; ++i) bx[i] = fx.basis.col(i);

    // Log_x y: reverse the known geodesic y -> x when available (exact up
    // to integration error, no shooting), else shoot.
    const Vec log_xy = log_yx_known
                           ? reverse_log(m, y, *log_yx_known, opts.shoot.geo)
                           : log_map(m, x, y, opts.shoot);
    const auto bxv = detail::integrate_variation(m, x, log_xy, bx, 1.0, ode_opts);
    Mat mx(eta, eta);
    for (int i = 0; i < eta; ++i) mx.col(i) = fy.to_coords(bxv.cols.col(i));
    const Mat dlog_xy = guarded_inverse(mx, "residual_hessian");

    Mat cmu(eta, eta);
    for (int j = 0; j < eta; ++j) cmu.col(j) = fy.to_coords(fwd->cols.col(j));
    const Mat p = dlog_xy * cmu;  // d(Log_x Exp_mu .) in the chosen bases

    const Vec lx = fx.to_coords(log_xy);
    Mat h(eta, ncols);
    for (int i = 0; i < ncols; ++i) {
        const auto vmu =
            detail::integrate_second_variation(m, mu, w_vec, basis, basis[i], 1.0, ode_opts);
        const Vec uprime = fx.from_coords(p.col(i));
        const auto vx =
            detail::integrate_second_variation(m, x, log_xy, bx, uprime, 1.0, ode_opts);
        for (int j = 0; j < eta; ++j) {
            const Vec rhs = vmu.cols.col(j) - vx.cols * p.col(j);
            const Vec psi_prime = dlog_xy * fy.to_coords(rhs);
            h(j, i) = 2.0 * (psi_prime.dot(lx) + p.col(j).dot(p.col(i)));
        }
    }
    return h;
}

}  // namespace

Mat residual_hessian(const Manifold& m, const Vec& x, const Vec& mu, const Vec& w_coords,
                     const std::vector<Vec>* basis_in, const ProjectOptions& opts) {
    const int eta = m.eta();
    const std::vector<Vec> basis = basis_in ? *basis_in : tangent_basis(m, mu);
    if (static_cast<int>(basis.size()) != eta || w_coords.size() != eta)
        throw InvalidInputError("residual_hessian: need a full tangent basis");
    return hessian_columns(m, x, mu, basis, combine(basis, w_coords), eta, opts, nullptr,
                           nullptr);
}

ProjectionDifferential projection_differential(const Manifold& m, const Vec& x,
                                               const Vec& mu,
                                               const std::vector<Vec>& v_basis,
                                               const Vec& v0,
                                               const ProjectOptions& opts,
                                               const Projection* precomputed) {
    const int eta = m.eta();
    const int k = static_cast<int>(v_basis.size());
    if (k + 1 > eta) throw InvalidInputError("projection_differential: subspace too large");

    Vec v0u = v0;
    for (const Vec& b : v_basis) v0u -= m.inner(mu, b, v0u) * b;
    const double v0n = m.norm(mu, v0u);
    if (v0n < 1e-10)
        throw InvalidInputError("projection_differential: v0 lies in the spanned subspace");
    v0u /= v0n;

    std::vector<Vec> given = v_basis;
    given.push_back(v0u);
    const std::vector<Vec> full = complete_tangent_basis(m, mu, given);
    const int np = eta - (k + 1);

    GeodesicSubspace s{mu, given};
    const Projection pr = precomputed && precomputed->w.size() == k + 1
                              ? *precomputed
                              : project(m, x, s, opts);

    // One forward batch serves the Hessian columns, the full-space
    // gradient, and the dExp applications.
    const Vec w_vec = combine(given, pr.w);
    const auto bg =
        detail::integrate_variation(m, mu, w_vec, full, 1.0, opts.shoot.geo.ode);

    // only the first k+1 Hessian columns enter the theorem; the rest of B
    // follows from symmetry
    const Vec* known = pr.log_yx.size() ? &pr.log_yx : nullptr;
    const Mat hcols =
        hessian_columns(m, x, mu, full, w_vec, k + 1, opts, &bg, known);
    const Mat hr = hcols.topRows(k + 1);
    {
        const Eigen::JacobiSVD<Mat> svd(hr);
        const auto& sv = svd.singularValues();
        if (sv(sv.size() - 1) < 1e-10 * sv(0))
            throw DegenerateConfigurationError(
                "projection_differential: restricted Hessian is rank-deficient");
    }
    const Mat hr_inv = hr.inverse();

    ProjectionDifferential out;
    out.perp.assign(full.begin() + k + 1, full.end());
    out.v0_unit = v0u;
    out.w0 = pr.w;
    out.pi_point = pr.point;
    out.hess_cols = hcols;

    if (np == 0) {
        out.dpi.resize(m.cdim(), 0);
        return out;
    }

    // full-space residual gradient at w0: the projection already carries
    // Log_y x
    const Vec log_yx = pr.log_yx.size()
                           ? pr.log_yx
                           : log_map(m, bg.x_end, x, opts.shoot);
    Vec grad_perp(np);
    for (int j = 0; j < np; ++j)
        grad_perp(j) = -2.0 * m.inner(bg.x_end, bg.cols.col(k + 1 + j), log_yx);

    const Vec vbar = hr_inv.col(k);
    Mat e(eta, np);
    e.topRows(k + 1) = -hr_inv * hcols.bottomRows(np).transpose();
    e.bottomRows(np) = Mat::Identity(np, np);

    const Vec dexp_vbar = bg.cols.leftCols(k + 1) * vbar;
    out.dpi = -dexp_vbar * grad_perp.transpose() + pr.w(k) * (bg.cols * e);
    return out;
}

Vec variance_gradient(const Manifold& m, const Vec& y, const Vec& x, const Vec& mu,
                      const std::vector<Vec>& v_basis, const Vec& v0,
                      const ProjectOptions& opts, const Projection* precomputed) {
    const ProjectionDifferential pd =
        projection_differential(m, x, mu, v_basis, v0, opts, precomputed);
    const int np = static_cast<int>(pd.perp.size());
    Vec g = Vec::Zero(m.cdim());
    if (np == 0) return g;

    // Log_y(pi) without shooting when y is the subspace center
    Vec vy;
    if ((y - mu).norm() == 0.0) {
        std::vector<Vec> given = v_basis;
        given.push_back(pd.v0_unit);
        vy = combine(given, pd.w0);
    } else {
        vy = log_map(m, y, pd.pi_point, opts.shoot);
    }

    const auto batch = detail::integrate_variation(
        m, y, vy, [&] {
            std::vector<Vec> b;
            const Frame f = make_frame(m, y);
            for (int i = 0; i < m.eta(); ++i) b.push_back(f.basis.col(i));
            return b;
        }(),
        1.0, opts.shoot.geo.ode);
    const Frame fpi = make_frame(m, pd.pi_point);
    const Frame fy = make_frame(m, y);
    Mat my(m.eta(), m.eta());
    for (int i = 0; i < m.eta(); ++i) my.col(i) = fpi.to_coords(batch.cols.col(i));
    const Mat dlog_y = guarded_inverse(my, "variance_gradient");

    const Vec ly = fy.to_coords(vy);
    for (int j = 0; j < np; ++j) {
        const Vec cj = dlog_y * fpi.to_coords(pd.dpi.col(j));
        g += (2.0 * cj.dot(ly)) * pd.perp[j];
    }
    return g;
}

std::pair<std::vector<double>, std::vector<Vec>> tangent_pca(
    const std::vector<Vec>& coords) {
    if (coords.empty()) throw InvalidInputError("tangent_pca: empty input");
    const int d = static_cast<int>(coords[0].size());
    Mat c = Mat::Zero(d, d);
    for (const Vec& l : coords) c += l * l.transpose();
    c /= static_cast<double>(coords.size());
    Eigen::SelfAdjointEigenSolver<Mat> eig(c);
    std::vector<double> vals;
    std::vector<Vec> vecs;
    for (int i = d - 1; i >= 0; --i) {  // descending eigenvalues
        Vec v = eig.eigenvectors().col(i);
        int arg = 0;
        for (int j = 1; j < d; ++j)
            if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
        if (v(arg) < 0.0) v = -v;
        vals.push_back(eig.eigenvalues()(i));
        vecs.push_back(v);
    }
    return {vals, vecs};
}

namespace {

// mean projected objective over the dataset for the subspace {dirs, v}
struct PgaObjective {
    const Manifold& m;
    const std::vector<Vec>& data;
    const Vec& mu;
    const std::vector<Vec>& dir_vecs;  // fixed directions as tangent vectors
    const Frame& fmu;
    PgaMode mode;
    const PgaOptions& opts;
    std::vector<Projection> warm;  // per-point projections at the current direction

    double operator()(const Vec& v_coords, std::vector<Projection>* out) {
        GeodesicSubspace s{mu, dir_vecs};
        s.basis.push_back(fmu.from_coords(v_coords));
        double acc = 0.0;
        std::vector<Projection> fresh = warm;
        for (size_t j = 0; j < data.size(); ++j) {
            ProjectOptions po = opts.proj;
            if (warm[j].w.size() == s.k()) po.init_w = &warm[j].w;
            Projection pr;
            try {
                pr = project(m, data[j], s, po);
            } catch (const Error& e) {
                throw NoConvergenceError(
                    "pga: projection failed for datum " + std::to_string(j) + ": " + e.what(),
                    0.0);
            }
            acc += mode == PgaMode::reconstruction ? pr.value : pr.w.squaredNorm();
            fresh[j] = std::move(pr);
        }
        if (out) *out = std::move(fresh);
        return acc / static_cast<double>(data.size());
    }
};

}  // namespace

PgaModel pga(const Manifold& m, const std::vector<Vec>& data, const PgaOptions& opts) {
    if (data.empty()) throw InvalidInputError("pga: empty dataset");
    const int eta = m.eta();
    const int count = opts.count > 0 ? std::min(opts.count, eta) : eta;

    PgaModel model;
    model.mode = opts.mode;
    model.mean = karcher_mean(m, data, opts.karcher);
    const Frame fmu = make_frame(m, model.mean);

    std::vector<Vec> logs;
    logs.reserve(data.size());
    for (size_t j = 0; j < data.size(); ++j)
        logs.push_back(fmu.to_coords(log_map(m, model.mean, data[j], opts.proj.shoot)));

    std::vector<Vec> dir_coords;
    std::vector<Vec> dir_vecs;

    for (int i = 0; i < count; ++i) {
        // logs projected to the complement of the chosen directions
        std::vector<Vec> proj_logs;
        proj_logs.reserve(logs.size());
        for (const Vec& l : logs) {
            Vec p = l;
            for (const Vec& d : dir_coords) p -= d.dot(p) * d;
            proj_logs.push_back(p);
        }
        auto [evals, evecs] = tangent_pca(proj_logs);

        Vec v = evecs[0];
        for (const Vec& d : dir_coords) v -= d.dot(v) * d;
        if (v.norm() < 1e-12) {
            // PCA direction degenerate against the chosen ones; fall back to
            // any unit vector of the complement
            for (int c = 0; c < eta && v.norm() < 1e-12; ++c) {
                v = Vec::Unit(eta, c);
                for (const Vec& d : dir_coords) v -= d.dot(v) * d;
            }
        }
        v.normalize();

        int iters = 0;
        bool converged = true;
        const bool optimize = opts.mode != PgaMode::linearized && eta - i - 1 > 0;
        if (optimize) {
            PgaObjective obj{m, data, model.mean, dir_vecs, fmu, opts.mode, opts, {}};
            obj.warm.assign(data.size(), Projection());
            double f = obj(v, &obj.warm);

            // net objective progress below this over a 10-iteration window
            // is indistinguishable from evaluation noise
            const double noise_allow = 10.0 * opts.proj.shoot.tol;

            // A symmetric dataset can park the PCA init exactly on a saddle
            // of the exact objective, where the gradient vanishes and escape
            // by amplified rounding noise is impractically slow. Probe a few
            // rotations of the init toward the second PCA direction and keep
            // the best start; clean optima keep the unrotated init.
            if (evecs.size() > 1 && opts.init_nudge > 0.0) {
                Vec nudge = evecs[1];
                for (const Vec& d : dir_coords) nudge -= d.dot(nudge) * d;
                nudge -= v.dot(nudge) * v;
                if (nudge.norm() > 1e-12) {
                    nudge.normalize();
                    std::vector<Projection> best_warm = obj.warm;
                    const double quarter = 0.25 * M_PI;
                    for (const double delta :
                         {quarter / 2, -quarter / 2, quarter, -quarter,
                          1.5 * quarter, -1.5 * quarter}) {
                        const Vec v_alt =
                            (std::cos(delta) * v + std::sin(delta) * nudge).normalized();
                        std::vector<Projection> w_alt;
                        double f_alt;
                        obj.warm.assign(data.size(), Projection());
                        try {
                            f_alt = obj(v_alt, &w_alt);
                        } catch (const Error&) {
                            continue;  // unreachable start, keep the best so far
                        }
                        const bool better =
                            opts.mode == PgaMode::reconstruction ? f_alt < f : f_alt > f;
                        if (better) {
                            v = v_alt;
                            f = f_alt;
                            best_warm = std::move(w_alt);
                        }
                    }
                    obj.warm = std::move(best_warm);
                }
            }

            converged = false;
            double window_f = f;
            int window_len = 0;
            for (; iters < opts.max_outer; ++iters) {
                Vec gbar = Vec::Zero(eta);
                for (size_t j = 0; j < data.size(); ++j) {
                    ProjectOptions po = opts.proj;
                    const Projection* pre = nullptr;
                    if (obj.warm[j].w.size() == i + 1) {
                        po.init_w = &obj.warm[j].w;
                        pre = &obj.warm[j];
                    }
                    const Vec& yj = opts.mode == PgaMode::reconstruction ? data[j] : model.mean;
                    Vec gj;
                    try {
                        gj = variance_gradient(m, yj, data[j], model.mean, dir_vecs,
                                               fmu.from_coords(v), po, pre);
                    } catch (const Error& e) {
                        throw NoConvergenceError("pga: gradient failed for datum " +
                                                     std::to_string(j) + ": " + e.what(),
                                                 0.0);
                    }
                    gbar += fmu.to_coords(gj);
                }
                gbar /= static_cast<double>(data.size());
                const double sign = opts.mode == PgaMode::reconstruction ? -1.0 : 1.0;

                double alpha = 1.0;
                bool accepted = false;
                Vec v_try;
                double f_try = 0.0;
                std::vector<Projection> w_try;
                for (int bt = 0; bt < opts.max_backtrack; ++bt) {
                    if (opts.update == PgaUpdate::add_normalize) {
                        v_try = (v + sign * alpha * gbar).normalized();
                    } else {
                        Vec g_perp = sign * alpha * gbar;
                        g_perp -= v.dot(g_perp) * v;
                        const double a = g_perp.norm();
                        v_try = a < 1e-300 ? v
                                           : Vec(std::cos(a) * v +
                                                 std::sin(a) * (g_perp / a));
                    }
                    try {
                        f_try = obj(v_try, &w_try);
                    } catch (const Error&) {
                        alpha *= 0.5;
                        continue;  // trial subspace unreachable; shorten the step
                    }
                    const bool better =
                        opts.mode == PgaMode::reconstruction ? f_try < f : f_try > f;
                    if (better) {
                        accepted = true;
                        break;
                    }
                    alpha *= 0.5;
                    if (alpha * gbar.norm() < 1e-10) break;
                }
                if (!accepted) {
                    converged = true;  // no ascent left above the noise floor
                    break;
                }
                const double step = (v_try - v).norm();
                v = v_try;
                f = f_try;
                obj.warm = std::move(w_try);
                if (step < opts.step_tol) {
                    converged = true;
                    break;
                }
                if (++window_len >= 10) {
                    const double gain = opts.mode == PgaMode::reconstruction
                                            ? window_f - f
                                            : f - window_f;
                    if (gain < noise_allow * (1.0 + std::abs(f))) {
                        converged = true;
                        break;
                    }
                    window_f = f;
                    window_len = 0;
                }
            }
        }

        dir_coords.push_back(v);
        dir_vecs.push_back(fmu.from_coords(v));
        model.iterations.push_back(iters);
        model.converged.push_back(converged);
    }

    // exact projected variance of every nested subspace
    for (int i = 0; i < count; ++i) {
        GeodesicSubspace s{model.mean,
                           std::vector<Vec>(dir_vecs.begin(), dir_vecs.begin() + i + 1)};
        double acc = 0.0;
        for (size_t j = 0; j < data.size(); ++j) acc += project(m, data[j], s, opts.proj).w.squaredNorm();
        model.variances.push_back(acc / static_cast<double>(data.size()));
    }
    model.directions = dir_vecs;
    return model;
}

}  // namespace riem
