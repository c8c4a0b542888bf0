#pragma once

#include <Eigen/Dense>

#include <vector>

namespace riem {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Point on a manifold, stored as chart coordinates (parametric
/// representation) or embedding coordinates (implicit representation).
struct ManifoldPoint {
    Vec coords;
};

/// Tangent vector attached to a base point, same coordinate convention
/// as the point itself.
struct TangentVector {
    ManifoldPoint base;
    Vec dir;
};

/// Dense rank-3 tensor with value semantics. Index order is (k, i, j);
/// used for Christoffel symbols G(k,i,j) = Gamma^k_ij and their
/// directional derivatives.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int d0, int d1, int d2)
        : d0_(d0), d1_(d1), d2_(d2), v_(static_cast<size_t>(d0) * d1 * d2, 0.0) {}

    double& operator()(int k, int i, int j) { return v_[idx(k, i, j)]; }
    double operator()(int k, int i, int j) const { return v_[idx(k, i, j)]; }

    int dim0() const { return d0_; }
    int dim1() const { return d1_; }
    int dim2() const { return d2_; }

private:
    size_t idx(int k, int i, int j) const {
        return (static_cast<size_t>(k) * d1_ + i) * d2_ + j;
    }
    int d0_ = 0, d1_ = 0, d2_ = 0;
    std::vector<double> v_;
};

}  // namespace riem
