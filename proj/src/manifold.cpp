#include "riem/manifold.hpp"

#include <cmath>

#include "riem/error.hpp"
#include "riem/linalg.hpp"

namespace riem {

namespace {
constexpr double kFdStep1 = 1e-6;  // first-order fallback step
constexpr double kFdStep2 = 1e-4;  // second-order fallback step

std::vector<Mat> zero_mats(int count, int dim) {
    return std::vector<Mat>(count, Mat::Zero(dim, dim));
}
}  // namespace

Tensor3 ParametricManifold::christoffel_at(const Vec& x) const {
    if (christoffel_zero) return Tensor3(eta, eta, eta);
    if (!christoffel) throw CapabilityError("parametric manifold lacks Christoffel symbols");
    return christoffel(x);
}

Tensor3 ParametricManifold::christoffel_dir_at(const Vec& x, const Vec& z) const {
    if (christoffel_dir_zero || christoffel_zero) return Tensor3(eta, eta, eta);
    if (christoffel_dir) return christoffel_dir(x, z);
    // central-difference fallback on the symbols
    const Tensor3 gp = christoffel_at(x + kFdStep1 * z);
    const Tensor3 gm = christoffel_at(x - kFdStep1 * z);
    Tensor3 out(eta, eta, eta);
    for (int k = 0; k < eta; ++k)
        for (int i = 0; i < eta; ++i)
            for (int j = 0; j < eta; ++j)
                out(k, i, j) = (gp(k, i, j) - gm(k, i, j)) / (2.0 * kFdStep1);
    return out;
}

Tensor3 ParametricManifold::christoffel_dir2_at(const Vec& x, const Vec& z1,
                                                const Vec& z2) const {
    if (christoffel_dir2_zero || christoffel_zero) return Tensor3(eta, eta, eta);
    if (christoffel_dir2) return christoffel_dir2(x, z1, z2);
    const Tensor3 gp = christoffel_dir_at(x + kFdStep2 * z1, z2);
    const Tensor3 gm = christoffel_dir_at(x - kFdStep2 * z1, z2);
    Tensor3 out(eta, eta, eta);
    for (int k = 0; k < eta; ++k)
        for (int i = 0; i < eta; ++i)
            for (int j = 0; j < eta; ++j)
                out(k, i, j) = (gp(k, i, j) - gm(k, i, j)) / (2.0 * kFdStep2);
    return out;
}

Vec ImplicitManifold::value_at(const Vec& x) const {
    if (!value) throw CapabilityError("implicit manifold lacks a constraint map");
    return value(x);
}

Mat ImplicitManifold::jac_at(const Vec& x) const {
    if (jac) return jac(x);
    return linalg::fd_jacobian([this](const Vec& p) { return value_at(p); }, x, kFdStep1);
}

std::vector<Mat> ImplicitManifold::hess_at(const Vec& x) const {
    if (hess) return hess(x);
    std::vector<Mat> out(n, Mat(m, m));
    const Mat jp = linalg::fd_jacobian(
        [this](const Vec& p) {
            const Mat j = jac_at(p);
            Vec flat(j.size());
            for (int k = 0; k < j.rows(); ++k)
                for (int c = 0; c < j.cols(); ++c) flat(k * j.cols() + c) = j(k, c);
            return flat;
        },
        x, kFdStep2);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) out[k](i, j) = jp(k * m + i, j);
    return out;
}

std::vector<Mat> ImplicitManifold::hess_dir_at(const Vec& x, const Vec& z) const {
    if (hess_dir_zero) return zero_mats(n, m);
    if (hess_dir) return hess_dir(x, z);
    const std::vector<Mat> hp = hess_at(x + kFdStep2 * z);
    const std::vector<Mat> hm = hess_at(x - kFdStep2 * z);
    std::vector<Mat> out(n);
    for (int k = 0; k < n; ++k) out[k] = (hp[k] - hm[k]) / (2.0 * kFdStep2);
    return out;
}

std::vector<Mat> ImplicitManifold::hess_dir2_at(const Vec& x, const Vec& z1,
                                                const Vec& z2) const {
    if (hess_dir2_zero) return zero_mats(n, m);
    if (hess_dir2) return hess_dir2(x, z1, z2);
    const std::vector<Mat> hp = hess_dir_at(x + kFdStep2 * z1, z2);
    const std::vector<Mat> hm = hess_dir_at(x - kFdStep2 * z1, z2);
    std::vector<Mat> out(n);
    for (int k = 0; k < n; ++k) out[k] = (hp[k] - hm[k]) / (2.0 * kFdStep2);
    return out;
}

Manifold::Manifold(ParametricManifold rep, std::string name)
    : rep_(std::make_shared<std::variant<ParametricManifold, ImplicitManifold>>(
          std::move(rep))),
      name_(std::move(name)) {
    if (par().eta <= 0) throw InvalidInputError("parametric manifold: eta must be positive");
}

Manifold::Manifold(ImplicitManifold rep, std::string name)
    : rep_(std::make_shared<std::variant<ParametricManifold, ImplicitManifold>>(
          std::move(rep))),
      name_(std::move(name)) {
    if (imp().m <= 0 || imp().n <= 0 || imp().eta() <= 0)
        throw InvalidInputError("implicit manifold: need m > n > 0");
}

bool Manifold::is_implicit() const {
    return std::holds_alternative<ImplicitManifold>(*rep_);
}

int Manifold::eta() const { return is_implicit() ? imp().eta() : par().eta; }
int Manifold::cdim() const { return is_implicit() ? imp().m : par().eta; }

const ParametricManifold& Manifold::par() const {
    return std::get<ParametricManifold>(*rep_);
}
const ImplicitManifold& Manifold::imp() const {
    return std::get<ImplicitManifold>(*rep_);
}

Mat Manifold::metric_at(const Vec& x) const {
    if (is_implicit()) return Mat::Identity(cdim(), cdim());
    if (!par().metric) throw CapabilityError("parametric manifold lacks a metric");
    return par().metric(x);
}

double Manifold::inner(const Vec& x, const Vec& a, const Vec& b) const {
    if (is_implicit()) return a.dot(b);
    return a.dot(metric_at(x) * b);
}

double Manifold::norm(const Vec& x, const Vec& v) const {
    return std::sqrt(std::max(0.0, inner(x, v, v)));
}

double Manifold::constraint_residual(const Vec& x) const {
    if (!is_implicit()) return 0.0;
    return imp().value_at(x).norm();
}

void Manifold::check_on_manifold(const Vec& x, double tol) const {
    if (x.size() != cdim()) throw InvalidInputError("point has wrong dimension");
    if (constraint_residual(x) > (tol > 0.0 ? tol : tol_.constraint))
        throw ConstraintViolationError("point is off the manifold beyond tolerance");
}

void Manifold::check_in_chart(const Vec& x) const {
    if (!is_implicit() && par().in_chart && !par().in_chart(x))
        throw ChartExitError("point outside the chart domain");
}

Vec tangent_project(const Manifold& m, const Vec& x, const Vec& v) {
    if (!m.is_implicit()) return v;  // chart tangent space is the whole R^eta
    m.check_on_manifold(x);
    const Mat a = m.imp().jac_at(x);
    const Mat p = linalg::pinv(a);
    return v - p * (a * v);
}

TangentVector tangent_project(const Manifold& m, const ManifoldPoint& x, const Vec& v) {
    return TangentVector{x, tangent_project(m, x.coords, v)};
}

std::vector<Vec> tangent_basis(const Manifold& m, const Vec& x) {
    return complete_tangent_basis(m, x, {});
}

std::vector<Vec> complete_tangent_basis(const Manifold& m, const Vec& x,
                                        const std::vector<Vec>& given) {
    const int d = m.cdim();
    std::vector<Vec> cands;
    cands.reserve(d);
    if (m.is_implicit()) {
        const Mat a = m.imp().jac_at(x);
        const Mat p = linalg::pinv(a);
        for (int i = 0; i < d; ++i) {
            Vec e = Vec::Zero(d);
            e(i) = 1.0;
            cands.push_back(e - p * (a * e));
        }
    } else {
        for (int i = 0; i < d; ++i) {
            Vec e = Vec::Zero(d);
            e(i) = 1.0;
            cands.push_back(e);
        }
    }
    auto ip = [&m, &x](const Vec& a, const Vec& b) { return m.inner(x, a, b); };
    std::vector<Vec> fresh = linalg::gram_schmidt(given, cands, ip, m.tol().basis_skip);
    std::vector<Vec> basis = given;
    basis.insert(basis.end(), fresh.begin(), fresh.end());
    if (static_cast<int>(basis.size()) != m.eta())
        throw DegeneratePointError("tangent basis: rank-deficient point");
    return basis;
}

}  // namespace riem
