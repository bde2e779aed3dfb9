#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>

#include "saddledyn/types.hpp"

namespace sdyn {

/// Catalog of builtin analytic landscapes. Every variant carries closed-form
/// derivatives up to third order; `Custom` models (energy-only callables) fall
/// back to central finite differences.
struct ModelSpec {
  enum class Kind {
    DoubleWell1D,       // E(x) = (1-x^2)^2
    DoubleWell2D,       // E(x,y) = (1-x^2)^2 + alpha y^2, alpha > 0
    CoerciveQuartic,    // E(x,y) = (x^2+y^2)^2 + x^2 - y^2 - x + y
    CubicSingularity,   // cos(a)x1 + sin(a)x2 + l/2 |x|^2 + (s x1^3 + x1 x2^2)/2
    IsotropicCanonical, // CubicSingularity with s = 1
    MultiDE0,           // planar cubic-singularity block + quadratic/cubic tail
    Perturbed,          // base + delta * perturbation
    Quadratic,          // x'Hx/2 + b'x
    Bump,               // prod_i x_i^3 (default perturbation shape)
  };

  Kind kind = Kind::DoubleWell1D;

  double alpha = 0.0;   // angle of the linear term / well stiffness
  double lambda = 0.0;  // repeated eigenvalue at the constructed singularity
  double s = 1.0;       // CubicSingularity x1^3 coefficient (times 1/2)

  // MultiDE0: linear/quadratic planar block with isotropic in-plane cubic
  //   plane_cubic_a x1^3 + plane_cubic_b x1^2 x2 + plane_cubic_a x1 x2^2 + plane_cubic_b x2^3,
  // tail 1/2 x_c' H0 x_c + 1/6 sum G0_ijk x_i x_j x_k over the converging block.
  // Defaults reproduce the canonical form (x1^3 + x1 x2^2)/2.
  double plane_cubic_a = 0.5;
  double plane_cubic_b = 0.0;
  Mat H0;                              // (N-2) x (N-2), must exceed max(lambda,0)
  std::vector<double> G0;              // dense (N-2)^3, symmetric; may be empty

  // Quadratic
  Mat H;
  Vec b;

  // Perturbed
  std::shared_ptr<const ModelSpec> base;
  std::shared_ptr<const ModelSpec> perturbation;  // null => Bump of matching dim
  double delta = 0.0;

  int dim = 0;  // Bump needs an explicit dimension

  /// Throws std::invalid_argument naming the violated invariant.
  void validate() const;
  int dimension() const;
  std::string kind_name() const;

  // ---- convenience constructors ------------------------------------------
  static ModelSpec double_well_1d();
  static ModelSpec double_well_2d(double alpha);
  static ModelSpec coercive_quartic();
  static ModelSpec cubic_singularity(double alpha, double lambda, double s);
  static ModelSpec isotropic_canonical(double alpha, double lambda);
  static ModelSpec multid_e0(double alpha0, double lambda0, Mat H0,
                             std::vector<double> G0 = {},
                             double plane_a = 0.5, double plane_b = 0.0);
  static ModelSpec quadratic(Mat H, Vec b);
  static ModelSpec bump(int dim);
  static ModelSpec perturbed(ModelSpec base, double delta,
                             std::shared_ptr<const ModelSpec> pert = nullptr);
  /// N = 3 landscape with a quasi-periodic GAD orbit around its singularity:
  /// cos(a)x + sin(a)y + (x^2 + y^2 + 1.1 z^2)/2 + (x^2 y + y^3)/2 + z^3,
  /// a = 3 pi / 4.
  static ModelSpec cycling_example_3d();
};

namespace detail {
class ModelImpl;
}

/// Immutable energy landscape with derivative tensors up to order 3.
/// Cheap to copy; all evaluators are pure and safe to share across threads.
class EnergyModel {
 public:
  EnergyModel() = default;

  int dimension() const;
  const ModelSpec& spec() const;

  double energy(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;
  ThirdTensor third(const Vec& x) const;

  bool valid() const { return impl_ != nullptr; }

 private:
  friend EnergyModel make_model(const ModelSpec&);
  friend EnergyModel make_custom_model(int, std::function<double(const Vec&)>, double);
  explicit EnergyModel(std::shared_ptr<const detail::ModelImpl> impl)
      : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::ModelImpl> impl_;
};

/// Builds a model from a validated spec; throws std::invalid_argument on
/// parameter violations.
EnergyModel make_model(const ModelSpec& spec);

/// Energy-only user model; derivatives by central finite differences of step h.
EnergyModel make_custom_model(int dim, std::function<double(const Vec&)> energy,
                              double fd_step = 1e-5);

/// Uniform derivative access: order 0 -> energy, 1 -> gradient, 2 -> hessian,
/// 3 -> third. Rejects non-finite input and order > 3.
using EvalResult = std::variant<double, Vec, Mat, ThirdTensor>;
EvalResult eval(const EnergyModel& model, const Vec& x, int order);

/// Max relative discrepancy between the order-k analytic tensor and central
/// finite differences of the order-(k-1) evaluator, k = 1..3.
struct DerivativeReport {
  double grad_err = 0.0;
  double hess_err = 0.0;
  double third_err = 0.0;
  double max_err() const { return std::max({grad_err, hess_err, third_err}); }
};
DerivativeReport check_derivatives(const EnergyModel& model, const Vec& x, double h);

}  // namespace sdyn
