#pragma once

#include "saddledyn/types.hpp"

namespace sdyn {

/// Lowest two eigenpairs of a symmetric matrix, spectral gap and Morse index.
/// For 1x1 matrices lambda2 and gap are +infinity (no crossing possible).
struct SpectralInfo {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;  // lambda2 - lambda1
  Vec v1, v2;
  int index = 0;  // number of negative eigenvalues

  /// gap < 1e-9 * max(1, |lambda1|): the ISD is undefined here.
  bool degenerate() const {
    return gap < 1e-9 * std::max(1.0, std::abs(lambda1));
  }
};

/// Full symmetric eigendecomposition (ascending eigenvalues).
struct EigenSystem {
  Vec values;
  Mat vectors;  // columns
};
EigenSystem eigen_decompose(const Mat& H);

/// Lowest two eigenpairs with canonical eigenvector sign (first component of
/// magnitude > 1e-14 made positive).
SpectralInfo lowest_pairs(const Mat& H);

/// v or -v, whichever has nonnegative inner product with v_prev; exact ties
/// return v unchanged.
Vec align_sign(Vec v, const Vec& v_prev);

/// Orthonormal basis of the span of eigenvectors with eigenvalues in
/// [center - radius, center + radius]. If expected_rank >= 0 and the window
/// selects a different number of eigenvalues, throws std::runtime_error
/// ("rank mismatch").
Mat invariant_subspace(const Mat& H, double center, double radius,
                       int expected_rank = -1);

}  // namespace sdyn
