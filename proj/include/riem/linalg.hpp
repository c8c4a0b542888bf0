#pragma once

#include <functional>

#include "riem/types.hpp"

namespace riem::linalg {

/// Moore–Penrose pseudoinverse. Singular values below
/// max(rows, cols) * eps * sigma_max are treated as zero, so
/// rank-deficient inputs degrade gracefully.
Mat pinv(const Mat& a);

/// First derivative of the pseudoinverse: if A_s is a differentiable
/// matrix family then d/ds (A_s^+) = lambda(A_s, dA_s/ds).
Mat decell_lambda(const Mat& a, const Mat& b);

/// Same, with A^+ supplied by the caller (hot loops compute it once).
Mat decell_lambda(const Mat& a, const Mat& b, const Mat& a_pinv);

/// Mixed second derivative of the pseudoinverse of a two-parameter
/// family A(t,s): with b = dA/dt, c = dA/ds and d = d^2A/(ds dt),
/// returns d^2/(ds dt) A(t,s)^+ at the base point.
Mat decell_lambda2(const Mat& a, const Mat& b, const Mat& c, const Mat& d);
Mat decell_lambda2(const Mat& a, const Mat& b, const Mat& c, const Mat& d,
                   const Mat& a_pinv);

/// Central-difference Jacobian of f at x with step h.
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x,
                double h = 1e-6);

/// Gram–Schmidt with a caller-supplied inner product. Candidates are
/// consumed in order; vectors whose residual norm falls below skip_tol
/// are dropped. `fixed` vectors are assumed orthonormal already and are
/// not re-emitted.
std::vector<Vec> gram_schmidt(
    const std::vector<Vec>& fixed, const std::vector<Vec>& candidates,
    const std::function<double(const Vec&, const Vec&)>& inner,
    double skip_tol = 1e-8);

}  // namespace riem::linalg
