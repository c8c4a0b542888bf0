#include "riem/linalg.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>

#include "riem/error.hpp"

namespace riem::linalg {

namespace {

void require_finite(const Mat& a, const char* who) {
    if (!a.allFinite()) throw InvalidInputError(std::string(who) + ": non-finite entries");
}

void require_same_shape(const Mat& a, const Mat& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidInputError(std::string(who) + ": shape mismatch");
}

// X(A,B) = B^T (A^+)^T A^+ + A^+ (A^+)^T B^T
Mat x_term(const Mat& b, const Mat& p) {
    return b.transpose() * p.transpose() * p + p * p.transpose() * b.transpose();
}

// Y(A,B,C,D) = D^T (A^+)^T A^+ + B^T (L^T A^+ + (A^+)^T L)
//            + (L (A^+)^T + A^+ L^T) B^T + A^+ (A^+)^T D^T
// with L = lambda(A,C).
Mat y_term(const Mat& b, const Mat& d, const Mat& p, const Mat& lc) {
    return d.transpose() * p.transpose() * p +
           b.transpose() * (lc.transpose() * p + p.transpose() * lc) +
           (lc * p.transpose() + p * lc.transpose()) * b.transpose() +
           p * p.transpose() * d.transpose();
}

}  // namespace

Mat pinv(const Mat& a) {
    if (a.size() == 0) throw InvalidInputError("pinv: empty matrix");
    require_finite(a, "pinv");
    Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double eps = std::numeric_limits<double>::epsilon();
    const double cutoff =
        static_cast<double>(std::max(a.rows(), a.cols())) * eps * (sv.size() ? sv(0) : 0.0);
    Vec inv_sv(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        inv_sv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

Mat decell_lambda(const Mat& a, const Mat& b) { return decell_lambda(a, b, pinv(a)); }

Mat decell_lambda(const Mat& a, const Mat& b, const Mat& p) {
    require_same_shape(a, b, "decell_lambda");
    require_finite(b, "decell_lambda");
    const Mat x = x_term(b, p);
    return -p * b * p + x - p * a * x * a * p;
}

Mat decell_lambda2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
    return decell_lambda2(a, b, c, d, pinv(a));
}

Mat decell_lambda2(const Mat& a, const Mat& b, const Mat& c, const Mat& d,
                   const Mat& p) {
    require_same_shape(a, b, "decell_lambda2");
    require_same_shape(a, c, "decell_lambda2");
    require_same_shape(a, d, "decell_lambda2");
    require_finite(b, "decell_lambda2");
    require_finite(c, "decell_lambda2");
    require_finite(d, "decell_lambda2");
    const Mat lc = decell_lambda(a, c, p);
    const Mat x = x_term(b, p);
    const Mat y = y_term(b, d, p, lc);
    return -lc * b * p - p * d * p - p * b * lc + y -
           (lc * a + p * c) * x * a * p - p * a * y * a * p -
           p * a * x * (c * p + a * lc);
}

Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
    if (h <= 0.0) throw InvalidInputError("fd_jacobian: step must be positive");
    Mat jac;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Vec xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        const Vec fp = f(xp);
        const Vec fm = f(xm);
        if (!fp.allFinite() || !fm.allFinite())
            throw EvaluationError("fd_jacobian: non-finite function value");
        if (jac.size() == 0) jac.resize(fp.size(), x.size());
        jac.col(j) = (fp - fm) / (2.0 * h);
    }
    return jac;
}

std::vector<Vec> gram_schmidt(
    const std::vector<Vec>& fixed, const std::vector<Vec>& candidates,
    const std::function<double(const Vec&, const Vec&)>& inner, double skip_tol) {
    std::vector<Vec> basis = fixed;
    std::vector<Vec> fresh;
    for (const Vec& cand : candidates) {
        Vec v = cand;
        for (int pass = 0; pass < 2; ++pass)  // re-orthogonalize once
            for (const Vec& b : basis) v -= inner(b, v) * b;
        const double nrm = std::sqrt(std::max(0.0, inner(v, v)));
        if (nrm < skip_tol) continue;
        v /= nrm;
        basis.push_back(v);
        fresh.push_back(v);
    }
    return fresh;
}

}  // namespace riem::linalg
