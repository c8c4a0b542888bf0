#include "riem/ode.hpp"

#include <algorithm>
#include <cmath>

#include "riem/error.hpp"

namespace riem::ode {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640,
                 e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

Vec eval_rhs(const Rhs& f, double t, const Vec& y) {
    Vec dy = f(t, y);
    if (dy.size() != y.size())
        throw InvalidInputError("integrate: rhs dimension mismatch");
    if (!dy.allFinite()) throw IntegrationError("integrate: non-finite rhs", t, y);
    return dy;
}

double error_norm(const Vec& err, const Vec& y0, const Vec& y1,
                  const IntegratorOptions& opts) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
        const double sc =
            opts.abs_tol + opts.rel_tol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        const double q = err(i) / sc;
        acc += q * q;
    }
    return std::sqrt(acc / std::max<Eigen::Index>(1, err.size()));
}

Trajectory integrate_rk45(const IvpSpec& spec, const IntegratorOptions& opts) {
    const double dir = spec.t1 >= spec.t0 ? 1.0 : -1.0;
    const double span = std::abs(spec.t1 - spec.t0);

    Trajectory out;
    double t = spec.t0;
    Vec y = spec.y0;
    Vec k1 = eval_rhs(spec.rhs, t, y);

    out.times.push_back(t);
    out.states.push_back(y);
    if (opts.dense_output) out.derivs.push_back(k1);

    if (span == 0.0) return out;

    double h = dir * std::min(0.1, span);
    const double h_min = span * 1e-15;

    for (long step = 0; step < opts.max_steps; ++step) {
        if (std::abs(h) < h_min)
            throw IntegrationError("integrate: step underflow", t, y);
        bool last = false;
        if ((t + h - spec.t1) * dir >= 0.0) {
            h = spec.t1 - t;
            last = true;
        }

        const Vec k2 = eval_rhs(spec.rhs, t + c2 * h, y + h * (a21 * k1));
        const Vec k3 = eval_rhs(spec.rhs, t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const Vec k4 =
            eval_rhs(spec.rhs, t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vec k5 = eval_rhs(spec.rhs, t + c5 * h,
                                y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vec k6 = eval_rhs(
            spec.rhs, t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vec y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vec k7 = eval_rhs(spec.rhs, t + h, y_new);  // FSAL
        const Vec err =
            h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double en = error_norm(err, y, y_new, opts);
        if (en <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            if (opts.dense_output) {
                out.times.push_back(t);
                out.states.push_back(y);
                out.derivs.push_back(k1);
            }
            if (last) {
                if (!opts.dense_output) {
                    out.times.push_back(t);
                    out.states.push_back(y);
                }
                return out;
            }
        }
        const double factor =
            en > 0.0 ? std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0) : 5.0;
        h *= factor;
    }
    throw IntegrationError("integrate: max_steps exceeded", t, y);
}

Trajectory integrate_rk4(const IvpSpec& spec, const IntegratorOptions& opts) {
    const double span = spec.t1 - spec.t0;
    Trajectory out;
    double t = spec.t0;
    Vec y = spec.y0;
    out.times.push_back(t);
    out.states.push_back(y);
    if (opts.dense_output) out.derivs.push_back(eval_rhs(spec.rhs, t, y));
    if (span == 0.0) return out;

    const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(span) / opts.step)));
    if (n > opts.max_steps) throw IntegrationError("integrate: max_steps exceeded", t, y);
    const double h = span / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        const Vec k1 = eval_rhs(spec.rhs, t, y);
        const Vec k2 = eval_rhs(spec.rhs, t + h / 2, y + (h / 2) * k1);
        const Vec k3 = eval_rhs(spec.rhs, t + h / 2, y + (h / 2) * k2);
        const Vec k4 = eval_rhs(spec.rhs, t + h, y + h * k3);
        y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t = spec.t0 + span * static_cast<double>(i + 1) / static_cast<double>(n);
        if (opts.dense_output || i == n - 1) {
            out.times.push_back(t);
            out.states.push_back(y);
            if (opts.dense_output) out.derivs.push_back(eval_rhs(spec.rhs, t, y));
        }
    }
    return out;
}

}  // namespace

size_t Trajectory::locate(double t) const {
    if (times.size() < 2) return 0;
    const bool fwd = times.back() >= times.front();
    size_t lo = 0, hi = times.size() - 1;
    while (hi - lo > 1) {
        const size_t mid = (lo + hi) / 2;
        if (fwd ? times[mid] <= t : times[mid] >= t)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

Vec Trajectory::sample(double t) const {
    if (derivs.size() != states.size())
        throw InvalidInputError("Trajectory::sample: dense output not stored");
    if (states.size() == 1) return states[0];
    const size_t i = locate(t);
    const double t0 = times[i], t1 = times[i + 1], h = t1 - t0;
    if (h == 0.0) return states[i];
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 1 - 3 * s2 + 2 * s3, h10 = s - 2 * s2 + s3;
    const double h01 = 3 * s2 - 2 * s3, h11 = -s2 + s3;
    return h00 * states[i] + h * h10 * derivs[i] + h01 * states[i + 1] +
           h * h11 * derivs[i + 1];
}

Vec Trajectory::sample_derivative(double t) const {
    if (derivs.size() != states.size())
        throw InvalidInputError("Trajectory::sample_derivative: dense output not stored");
    if (states.size() == 1) return derivs.empty() ? Vec::Zero(states[0].size()) : derivs[0];
    const size_t i = locate(t);
    const double t0 = times[i], t1 = times[i + 1], h = t1 - t0;
    if (h == 0.0) return derivs[i];
    const double s = (t - t0) / h;
    const double s2 = s * s;
    const double d00 = (-6 * s + 6 * s2) / h, d10 = 1 - 4 * s + 3 * s2;
    const double d01 = (6 * s - 6 * s2) / h, d11 = -2 * s + 3 * s2;
    return d00 * states[i] + d10 * derivs[i] + d01 * states[i + 1] + d11 * derivs[i + 1];
}

Trajectory integrate(const IvpSpec& spec, const IntegratorOptions& opts) {
    if (spec.y0.size() == 0) throw InvalidInputError("integrate: empty initial state");
    if (!spec.y0.allFinite()) throw InvalidInputError("integrate: non-finite initial state");
    if (opts.rel_tol <= 0 || opts.abs_tol <= 0 || opts.step <= 0 || opts.max_steps <= 0)
        throw InvalidInputError("integrate: options out of range");
    switch (opts.method) {
        case Method::rk4_fixed:
            return integrate_rk4(spec, opts);
        case Method::rk45_adaptive:
            return integrate_rk45(spec, opts);
    }
    throw InvalidInputError("integrate: unknown method");
}

}  // namespace riem::ode
