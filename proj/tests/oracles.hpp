#pragma once

// Test-only oracles: finite-difference derivatives, closed-form sphere
// geometry, and a deterministic random source. These stay independent of
// the library code paths they check.

#include <cmath>
#include <functional>
#include <random>

#include "riem/geodesic.hpp"
#include "riem/linalg.hpp"
#include "riem/manifold.hpp"

namespace oracle {

using riem::Mat;
using riem::Vec;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed), dist_(0.0, 1.0) {}
    double normal() { return dist_(eng_); }
    Vec vec(int n) {
        Vec v(n);
        for (int i = 0; i < n; ++i) v(i) = normal();
        return v;
    }
    Mat mat(int r, int c) {
        Mat m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(i, j) = normal();
        return m;
    }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> dist_;
};

// central-difference directional derivative of a matrix-valued map
inline Mat fd_dir(const std::function<Mat(double)>& f, double h) {
    return (f(h) - f(-h)) / (2.0 * h);
}

// mixed second-order central difference of a two-parameter matrix family
inline Mat fd_mixed(const std::function<Mat(double, double)>& f, double h) {
    return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
}

inline double rel_err(const Mat& got, const Mat& want) {
    const double scale = want.norm();
    return scale > 0 ? (got - want).norm() / scale : (got - want).norm();
}

inline double rel_err(const Vec& got, const Vec& want) {
    const double scale = want.norm();
    return scale > 0 ? (got - want).norm() / scale : (got - want).norm();
}

// Unit-sphere closed forms (embedding coordinates).
inline Vec sphere_exp(const Vec& q, const Vec& v) {
    const double r = v.norm();
    if (r == 0.0) return q;
    return std::cos(r) * q + std::sin(r) / r * v;
}

inline Vec sphere_log(const Vec& q, const Vec& x) {
    const double c = std::clamp(q.dot(x), -1.0, 1.0);
    const double ang = std::acos(c);
    Vec perp = x - c * q;
    const double pn = perp.norm();
    if (pn < 1e-15) return Vec::Zero(q.size());
    return ang * perp / pn;
}

// d_v Exp_q(w) on the unit sphere: radial part parallel-transported,
// normal part scaled by sin r / r.
inline Vec sphere_dexp(const Vec& q, const Vec& v, const Vec& w) {
    const double r = v.norm();
    if (r == 0.0) return w;
    const Vec vhat = v / r;
    const double a = w.dot(vhat);
    const Vec wperp = w - a * vhat;
    return a * (std::cos(r) * vhat - std::sin(r) * q) + std::sin(r) / r * wperp;
}

// random point on the unit sphere plus a random tangent vector
inline void sphere_config(Rng& rng, Vec& q, Vec& v, double vmax = 1.2) {
    q = rng.vec(3).normalized();
    Vec raw = rng.vec(3);
    v = raw - raw.dot(q) * q;
    const double n = v.norm();
    if (n > 1e-12) v *= vmax * 0.8 / n;
}

}  // namespace oracle
