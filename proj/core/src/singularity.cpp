#include "saddledyn/singularity.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>

namespace sdyn {

Mat2 matrix_A(const CubicCoeffs& c) {
  Mat2 a;
  a << 0.5 * (c.e111 - c.e122), 0.5 * (c.e112 - c.e222), c.e112, c.e122;
  return a;
}

double discriminant(const CubicCoeffs& c) {
  return c.e111 * c.e122 + c.e112 * c.e222 - c.e112 * c.e112 - c.e122 * c.e122;
}

std::string to_string(SingClass c) {
  switch (c) {
    case SingClass::StableSpiral: return "StableSpiral";
    case SingClass::UnstableSpiral: return "UnstableSpiral";
    case SingClass::Center: return "Center";
    case SingClass::SaddleLike: return "SaddleLike";
    case SingClass::Degenerate: return "Degenerate";
  }
  return "Unknown";
}

std::string to_string(LocateStatus s) {
  switch (s) {
    case LocateStatus::Ok: return "Ok";
    case LocateStatus::NoConvergence: return "NoConvergence";
    case LocateStatus::DegenerateJacobian: return "DegenerateJacobian";
    case LocateStatus::RankMismatch: return "RankMismatch";
  }
  return "Unknown";
}

SingClass classify(const Mat2& A, double alpha) {
  const Mat2 B = rotation2(-alpha) * A;
  const double scale = std::max(1.0, B.norm());
  const double det = B.determinant();
  const double tr = B.trace();
  if (std::abs(det) <= 1e-12 * scale * scale) return SingClass::Degenerate;
  if (det < 0.0) return SingClass::SaddleLike;
  // det > 0: both eigenvalue real parts share the sign of the trace.
  if (std::abs(tr) <= 1e-12 * scale) return SingClass::Center;
  return tr > 0.0 ? SingClass::StableSpiral : SingClass::UnstableSpiral;
}

namespace {

CubicCoeffs plane_coeffs(const ThirdTensor& T, const Vec& e1, const Vec& e2) {
  CubicCoeffs c;
  c.e111 = T.contract(e1, e1, e1);
  c.e112 = T.contract(e1, e1, e2);
  c.e122 = T.contract(e1, e2, e2);
  c.e222 = T.contract(e2, e2, e2);
  return c;
}

// Rotate the in-plane frame so the isotropic part of A becomes d*I (d > 0),
// then reflect so sin(alpha) >= 0. Returns the final (e1, e2).
void gauge_fix_plane(const ThirdTensor& T, const Vec& grad, Vec& e1, Vec& e2) {
  auto rotate_to_iso = [&](Vec& a, Vec& b) {
    const CubicCoeffs c = plane_coeffs(T, a, b);
    const Mat2 A = matrix_A(c);
    const double p = 0.5 * (A(0, 0) + A(1, 1));
    const double q = 0.5 * (A(1, 0) - A(0, 1));
    if (std::hypot(p, q) < 1e-14) return;  // no isotropic part; keep frame
    const double t = std::atan2(q, p);
    const Vec a2 = std::cos(t) * a + std::sin(t) * b;
    const Vec b2 = -std::sin(t) * a + std::cos(t) * b;
    a = a2;
    b = b2;
  };
  rotate_to_iso(e1, e2);
  const double sa = e2.dot(grad);
  if (sa < -1e-12 * std::max(1.0, grad.norm())) {
    e2 = -e2;
    rotate_to_iso(e1, e2);  // reflection flips the isotropic angle
  }
}

SingularityReport assemble_report(const EnergyModel& model, const Vec& z,
                                  Vec e1, Vec e2, Mat frame_rest,
                                  int iterations, double residual) {
  SingularityReport rep;
  rep.z = z;
  rep.iterations = iterations;
  rep.residual = residual;

  const Vec g = model.gradient(z);
  const ThirdTensor T = model.third(z);
  gauge_fix_plane(T, g, e1, e2);

  const Mat H = model.hessian(z);
  rep.lambda = 0.5 * (e1.dot(H * e1) + e2.dot(H * e2));
  rep.grad_norm = g.norm();
  rep.alpha = std::atan2(e2.dot(g), e1.dot(g));
  rep.coeffs = plane_coeffs(T, e1, e2);
  rep.A = matrix_A(rep.coeffs);
  rep.delta_disc = discriminant(rep.coeffs);
  rep.cls = classify(rep.A, rep.alpha);

  const int n = model.dimension();
  rep.frame = Mat(n, n);
  rep.frame.col(0) = e1;
  rep.frame.col(1) = e2;
  for (int c = 0; c + 2 < n; ++c) rep.frame.col(2 + c) = frame_rest.col(c);
  return rep;
}

}  // namespace

LocateResult locate_2d(const EnergyModel& model, const Vec2& guess,
                       const LocateOptions& opts) {
  if (model.dimension() != 2)
    throw std::invalid_argument("locate_2d requires a 2D model");
  LocateResult out;

  auto F = [&](const Vec2& x) {
    const Mat H = model.hessian(x);
    return Vec2(H(0, 0) - H(1, 1), H(0, 1));
  };

  Vec2 z = guess;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    const Vec2 f = F(z);
    if (f.norm() < opts.tol) {
      out.status = LocateStatus::Ok;
      out.report = assemble_report(model, z, Vec::Unit(2, 0), Vec::Unit(2, 1),
                                   Mat(2, 0), it, f.norm());
      return out;
    }
    Mat2 J;
    for (int j = 0; j < 2; ++j) {
      Vec2 dp = z, dm = z;
      dp[j] += opts.fd_step;
      dm[j] -= opts.fd_step;
      J.col(j) = (F(dp) - F(dm)) / (2.0 * opts.fd_step);
    }
    if (std::abs(J.determinant()) < opts.degenerate_jacobian_tol) {
      out.status = LocateStatus::DegenerateJacobian;
      return out;
    }
    z -= J.inverse() * f;
    if (!z.allFinite()) break;
  }
  out.status = LocateStatus::NoConvergence;
  return out;
}

NdResidual::NdResidual(const EnergyModel& model, const Vec& guess)
    : model_(model) {
  const EigenSystem es = eigen_decompose(model.hessian(guess));
  const int n = model.dimension();
  if (n < 3)
    throw std::invalid_argument("NdResidual requires dimension >= 3");
  center_ = 0.5 * (es.values[0] + es.values[1]);
  const double R = es.values[2] - center_;
  radius_ = 0.5 * R;
  if (!(es.values[1] - es.values[0] < R))
    throw std::runtime_error(
        "rank mismatch: two lowest eigenvalues not isolated by the window");
  ref_ = es.vectors;
}

Mat NdResidual::frame(const Vec& z) const {
  const int n = model_.dimension();
  const Mat basis = invariant_subspace(model_.hessian(z), center_, radius_, 2);
  const Mat P = basis * basis.transpose();

  Mat tilde(n, n);
  for (int i = 0; i < n; ++i) {
    if (i < 2)
      tilde.col(i) = P * ref_.col(i);
    else
      tilde.col(i) = ref_.col(i) - P * ref_.col(i);
  }
  // Loewdin symmetric orthonormalization keeps the split between the window
  // space (first two columns) and its complement.
  const Mat O = tilde.transpose() * tilde;
  Eigen::SelfAdjointEigenSolver<Mat> es(O);
  const Mat Oinvhalf = es.eigenvectors() *
                       es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                       es.eigenvectors().transpose();
  return tilde * Oinvhalf;
}

Vec NdResidual::operator()(const Vec& z) const {
  const int n = model_.dimension();
  const Mat e = frame(z);
  const Mat H = model_.hessian(z);
  const Vec g = model_.gradient(z);
  Vec f(n);
  f[0] = e.col(0).dot(H * e.col(1));
  f[1] = e.col(0).dot(H * e.col(0)) - e.col(1).dot(H * e.col(1));
  for (int i = 2; i < n; ++i) f[i] = e.col(i).dot(g);
  return f;
}

LocateResult locate_nd(const EnergyModel& model, const Vec& guess,
                       const LocateOptions& opts) {
  LocateResult out;
  const int n = model.dimension();

  std::optional<NdResidual> res;
  try {
    res.emplace(model, guess);
  } catch (const std::runtime_error&) {
    out.status = LocateStatus::RankMismatch;
    return out;
  }

  Vec z = guess;
  for (int it = 0; it <= opts.max_iterations; ++it) {
    Vec f;
    try {
      f = (*res)(z);
    } catch (const std::runtime_error&) {
      out.status = LocateStatus::RankMismatch;
      return out;
    }
    if (f.norm() < opts.tol) {
      const Mat e = res->frame(z);
      Mat rest(n, n - 2);
      for (int c = 2; c < n; ++c) rest.col(c - 2) = e.col(c);
      out.status = LocateStatus::Ok;
      out.report = assemble_report(model, z, e.col(0), e.col(1), rest, it, f.norm());
      return out;
    }
    Mat J(n, n);
    for (int j = 0; j < n; ++j) {
      Vec dp = z, dm = z;
      dp[j] += opts.fd_step;
      dm[j] -= opts.fd_step;
      J.col(j) = ((*res)(dp) - (*res)(dm)) / (2.0 * opts.fd_step);
    }
    const Eigen::FullPivLU<Mat> lu(J);
    if (!lu.isInvertible()) {
      out.status = LocateStatus::DegenerateJacobian;
      return out;
    }
    z -= lu.solve(f);
    if (!z.allFinite()) break;
  }
  out.status = LocateStatus::NoConvergence;
  return out;
}

}  // namespace sdyn
