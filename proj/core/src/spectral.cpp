#include "saddledyn/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <limits>
#include <stdexcept>

namespace sdyn {

EigenSystem eigen_decompose(const Mat& H) {
  if (H.rows() != H.cols())
    throw std::invalid_argument("eigen_decompose: matrix must be square");
  Eigen::SelfAdjointEigenSolver<Mat> es(H);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigen_decompose: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

static Vec canonical_sign(Vec v) {
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-14) {
      if (v[i] < 0.0) v = -v;
      break;
    }
  }
  return v;
}

SpectralInfo lowest_pairs(const Mat& H) {
  SpectralInfo out;
  if (H.rows() == 1) {
    out.lambda1 = H(0, 0);
    out.lambda2 = std::numeric_limits<double>::infinity();
    out.gap = out.lambda2;
    out.v1 = Vec::Ones(1);
    out.v2 = Vec::Zero(1);
    out.index = H(0, 0) < 0.0 ? 1 : 0;
    return out;
  }
  const EigenSystem es = eigen_decompose(H);
  out.lambda1 = es.values[0];
  out.lambda2 = es.values[1];
  out.gap = out.lambda2 - out.lambda1;
  out.v1 = canonical_sign(Vec(es.vectors.col(0)));
  out.v2 = canonical_sign(Vec(es.vectors.col(1)));
  out.index = 0;
  for (int i = 0; i < es.values.size(); ++i)
    if (es.values[i] < 0.0) ++out.index;
  return out;
}

Vec align_sign(Vec v, const Vec& v_prev) {
  const double d = v.dot(v_prev);
  if (d < 0.0) v = -v;
  return v;
}

Mat invariant_subspace(const Mat& H, double center, double radius,
                       int expected_rank) {
  const EigenSystem es = eigen_decompose(H);
  std::vector<int> sel;
  for (int i = 0; i < es.values.size(); ++i) {
    if (std::abs(es.values[i] - (center - radius)) < 1e-9 ||
        std::abs(es.values[i] - (center + radius)) < 1e-9)
      throw std::invalid_argument(
          "invariant_subspace: eigenvalue within 1e-9 of a window endpoint");
    if (es.values[i] >= center - radius && es.values[i] <= center + radius)
      sel.push_back(i);
  }
  if (expected_rank >= 0 && static_cast<int>(sel.size()) != expected_rank)
    throw std::runtime_error("invariant_subspace: rank mismatch (selected " +
                             std::to_string(sel.size()) + ", expected " +
                             std::to_string(expected_rank) + ")");
  Mat basis(H.rows(), static_cast<int>(sel.size()));
  for (size_t c = 0; c < sel.size(); ++c) basis.col(c) = es.vectors.col(sel[c]);
  return basis;
}

}  // namespace sdyn
