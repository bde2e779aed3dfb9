#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sdyn {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Rotation of the plane by angle `w`.
inline Mat2 rotation2(double w) {
  const double c = std::cos(w), s = std::sin(w);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

/// Rotate a 2-vector by +pi/2.
inline Vec2 perp(const Vec2& u) { return Vec2(-u[1], u[0]); }

/// Dense symmetric third-order tensor T_ijk = T_{perm(ijk)}.
/// Sizes stay small (landscape dimensions), so full storage is fine.
class ThirdTensor {
 public:
  ThirdTensor() = default;
  explicit ThirdTensor(int n) : n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

  int dim() const { return n_; }

  double operator()(int i, int j, int k) const { return data_[idx(i, j, k)]; }
  double& at(int i, int j, int k) { return data_[idx(i, j, k)]; }

  /// Assign value to entry (i,j,k) and all its index permutations.
  void set_sym(int i, int j, int k, double v) {
    at(i, j, k) = v; at(i, k, j) = v;
    at(j, i, k) = v; at(j, k, i) = v;
    at(k, i, j) = v; at(k, j, i) = v;
  }

  void add_sym(int i, int j, int k, double v) {
    set_sym(i, j, k, operator()(i, j, k) + v);
  }

  /// Contracted matrix (T[u])_ij = sum_k T_ijk u_k.
  Mat contract(const Vec& u) const {
    Mat m = Mat::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int k = 0; k < n_; ++k) s += operator()(i, j, k) * u[k];
        m(i, j) = s;
      }
    return m;
  }

  /// Contracted vector T[u,v].
  Vec contract(const Vec& u, const Vec& v) const { return contract(u) * v; }

  /// Fully contracted scalar T[u,v,w].
  double contract(const Vec& u, const Vec& v, const Vec& w) const {
    return u.dot(contract(v) * w);
  }

  double max_abs() const {
    double m = 0.0;
    for (double d : data_) m = std::max(m, std::abs(d));
    return m;
  }

  /// Largest deviation from index-permutation symmetry (0 for tensors
  /// assembled through set_sym).
  double symmetry_defect() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        for (int k = 0; k < n_; ++k) {
          const double t = operator()(i, j, k);
          m = std::max(m, std::abs(t - operator()(j, i, k)));
          m = std::max(m, std::abs(t - operator()(i, k, j)));
          m = std::max(m, std::abs(t - operator()(k, j, i)));
        }
    return m;
  }

 private:
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * n_ + j) * n_ + k;
  }
  int n_ = 0;
  std::vector<double> data_;
};

}  // namespace sdyn
