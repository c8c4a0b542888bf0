#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "riem/types.hpp"

namespace riem {

/// Chart-based representation. The metric and Christoffel symbols are
/// required; the directional derivatives of the symbols are optional and
/// fall back to nested central differences of `christoffel` (with the
/// corresponding accuracy loss). Setting the *_zero flags declares the
/// derivative identically zero, which skips both the callback and the
/// fallback.
struct ParametricManifold {
    int eta = 0;
    std::function<Mat(const Vec&)> metric;           // g(x), eta x eta SPD
    std::function<Tensor3(const Vec&)> christoffel;  // G(k,i,j) = Gamma^k_ij
    // directional derivative of the symbols along z / along (z1 then z2)
    std::function<Tensor3(const Vec&, const Vec&)> christoffel_dir;
    std::function<Tensor3(const Vec&, const Vec&, const Vec&)> christoffel_dir2;
    std::function<bool(const Vec&)> in_chart;  // optional chart-domain guard
    bool christoffel_zero = false;
    bool christoffel_dir_zero = false;
    bool christoffel_dir2_zero = false;

    Tensor3 christoffel_at(const Vec& x) const;
    Tensor3 christoffel_dir_at(const Vec& x, const Vec& z) const;
    Tensor3 christoffel_dir2_at(const Vec& x, const Vec& z1, const Vec& z2) const;
};

/// Level-set representation M = F^{-1}(0) for F: R^m -> R^n with full-rank
/// Jacobian on M. `value` is required; derivative callbacks fall back to
/// nested central differences. hess_dir supplies the z-directional
/// derivative of the component Hessians (third partials of F contracted
/// with z); hess_dir2 the second directional derivative (fourth partials
/// contracted twice). The *_zero flags mark tensors that vanish
/// identically, as they do for quadric constraints.
struct ImplicitManifold {
    int m = 0;
    int n = 0;
    std::function<Vec(const Vec&)> value;             // F(x), size n
    std::function<Mat(const Vec&)> jac;               // D_xF, n x m
    std::function<std::vector<Mat>(const Vec&)> hess; // H_x(F^k), n of m x m
    std::function<std::vector<Mat>(const Vec&, const Vec&)> hess_dir;
    std::function<std::vector<Mat>(const Vec&, const Vec&, const Vec&)> hess_dir2;
    bool hess_dir_zero = false;
    bool hess_dir2_zero = false;

    int eta() const { return m - n; }
    Vec value_at(const Vec& x) const;
    Mat jac_at(const Vec& x) const;
    std::vector<Mat> hess_at(const Vec& x) const;
    std::vector<Mat> hess_dir_at(const Vec& x, const Vec& z) const;
    std::vector<Mat> hess_dir2_at(const Vec& x, const Vec& z1, const Vec& z2) const;
};

struct ManifoldTolerances {
    double constraint = 1e-9;  // |F(x)| for on-manifold checks
    double tangency = 1e-9;    // |dF(x) v| for tangency checks
    double basis_skip = 1e-8;  // Gram–Schmidt drop threshold
};

/// Value-semantic handle to either representation. Evaluation calls are
/// pure; copies share the immutable representation.
class Manifold {
public:
    explicit Manifold(ParametricManifold rep, std::string name = "parametric");
    explicit Manifold(ImplicitManifold rep, std::string name = "implicit");

    bool is_implicit() const;
    int eta() const;    // intrinsic dimension
    int cdim() const;   // coordinate dimension (eta or embedding m)
    const std::string& name() const { return name_; }
    const ManifoldTolerances& tol() const { return tol_; }

    const ParametricManifold& par() const;
    const ImplicitManifold& imp() const;

    /// Inner product on T_xM: g(x)-weighted for charts, the restriction of
    /// the ambient dot product for level sets.
    double inner(const Vec& x, const Vec& a, const Vec& b) const;
    double norm(const Vec& x, const Vec& v) const;
    Mat metric_at(const Vec& x) const;

    /// |F(x)| for level sets, 0 for charts.
    double constraint_residual(const Vec& x) const;
    /// tol <= 0 means the manifold default; loose integration setups pass
    /// a tolerance matched to their drift.
    void check_on_manifold(const Vec& x, double tol = 0.0) const;
    void check_in_chart(const Vec& x) const;

private:
    std::shared_ptr<const std::variant<ParametricManifold, ImplicitManifold>> rep_;
    std::string name_;
    ManifoldTolerances tol_;
};

/// Orthogonal projection onto T_xM via (I - dF^+ dF); idempotent.
TangentVector tangent_project(const Manifold& m, const ManifoldPoint& x, const Vec& v);
Vec tangent_project(const Manifold& m, const Vec& x, const Vec& v);

/// Deterministic orthonormal basis of T_xM: Gram–Schmidt over the
/// canonical coordinate directions in index order (tangent-projected
/// first in the implicit case).
std::vector<Vec> tangent_basis(const Manifold& m, const Vec& x);

/// Extend `given` (assumed orthonormal) to a full orthonormal basis of
/// T_xM with the same deterministic completion rule.
std::vector<Vec> complete_tangent_basis(const Manifold& m, const Vec& x,
                                        const std::vector<Vec>& given);

/// Built-in manifolds: surface_sc (needs c), m4, sphere_param, flat
/// (needs dimension).
Manifold builtin(const std::string& name, const std::vector<double>& params = {});

/// Registry of named implicit constraints for definition files.
void register_implicit(const std::string& name,
                       std::function<ImplicitManifold(const std::vector<double>&)> maker);
Manifold make_registered(const std::string& name, const std::vector<double>& params);

}  // namespace riem
