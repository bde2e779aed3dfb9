#pragma once

#include <string>

#include "saddledyn/landscape.hpp"
#include "saddledyn/spectral.hpp"

namespace sdyn {

/// Third derivatives at a singularity in the adapted 2D frame.
struct CubicCoeffs {
  double e111 = 0.0;
  double e112 = 0.0;
  double e122 = 0.0;
  double e222 = 0.0;
};

/// A = [[(E111-E122)/2, (E112-E222)/2], [E112, E122]]; det A = Delta / 2.
Mat2 matrix_A(const CubicCoeffs& c);

/// Delta = det grad F(0) = E111 E122 + E112 E222 - E112^2 - E122^2.
double discriminant(const CubicCoeffs& c);

enum class SingClass { StableSpiral, UnstableSpiral, Center, SaddleLike, Degenerate };
std::string to_string(SingClass c);

/// Linear-stability class of B = R(-alpha) A: det B < 0 saddle-like; det B > 0
/// stable/unstable spiral by the sign of the eigenvalue real parts, center when
/// they vanish; det B = 0 degenerate.
SingClass classify(const Mat2& A, double alpha);

/// Everything known about a located eigenvalue-crossing singularity. The
/// in-plane frame (first two columns) is gauge-fixed: rotated so the isotropic
/// part of A becomes a positive multiple of the identity and reflected so
/// sin(alpha) >= 0; coefficients are then comparable across perturbations.
struct SingularityReport {
  Vec z;               // location
  double lambda = 0.0; // repeated eigenvalue
  double grad_norm = 0.0;
  double alpha = 0.0;  // angle of the in-plane gradient
  CubicCoeffs coeffs;
  double delta_disc = 0.0;  // discriminant
  Mat2 A;
  Mat frame;           // orthonormal columns e1..eN, e1/e2 span the crossing plane
  SingClass cls = SingClass::Degenerate;
  int iterations = 0;
  double residual = 0.0;
};

enum class LocateStatus { Ok, NoConvergence, DegenerateJacobian, RankMismatch };
std::string to_string(LocateStatus s);

struct LocateResult {
  LocateStatus status = LocateStatus::NoConvergence;
  SingularityReport report;
  bool ok() const { return status == LocateStatus::Ok; }
};

struct LocateOptions {
  double fd_step = 1e-6;     // finite-difference Newton Jacobian
  double tol = 1e-11;        // residual norm target
  int max_iterations = 50;
  double degenerate_jacobian_tol = 1e-12;
};

/// Newton iteration on F(x) = (H11 - H22, H12) for 2D models.
LocateResult locate_2d(const EnergyModel& model, const Vec2& guess,
                       const LocateOptions& opts = {});

/// N-dimensional location: adapted rank-2 frame from the spectral window
/// around the two lowest eigenvalues at the guess, then Newton on the N
/// residuals <e1,H e2>, <e1,H e1> - <e2,H e2>, <e_i, grad E> (i >= 3).
LocateResult locate_nd(const EnergyModel& model, const Vec& guess,
                       const LocateOptions& opts = {});

/// The residual map used by locate_nd, exposed so tests can probe it
/// independently (finite-difference sensitivities, oracle checks).
class NdResidual {
 public:
  /// Fixes the spectral window and reference frame from the Hessian at the
  /// guess; throws std::runtime_error("rank mismatch...") when the window does
  /// not isolate exactly two eigenvalues.
  NdResidual(const EnergyModel& model, const Vec& guess);

  Vec operator()(const Vec& z) const;
  /// Orthonormal adapted frame at z (columns; first two span the window space).
  Mat frame(const Vec& z) const;

  double window_center() const { return center_; }
  double window_radius() const { return radius_; }

 private:
  const EnergyModel& model_;
  double center_ = 0.0;
  double radius_ = 0.0;
  Mat ref_;  // reference vectors for the Loewdin orthonormalization
};

}  // namespace sdyn
