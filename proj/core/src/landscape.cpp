#include "saddledyn/landscape.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace sdyn {

namespace detail {

class ModelImpl {
 public:
  explicit ModelImpl(ModelSpec spec) : spec_(std::move(spec)) {}
  virtual ~ModelImpl() = default;
  virtual double energy(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual Mat hessian(const Vec& x) const = 0;
  virtual ThirdTensor third(const Vec& x) const = 0;
  const ModelSpec& spec() const { return spec_; }
  int dim() const { return spec_.dimension(); }

 private:
  ModelSpec spec_;
};

namespace {

class DoubleWell1DImpl final : public ModelImpl {
 public:
  using ModelImpl::ModelImpl;
  double energy(const Vec& x) const override {
    const double u = 1.0 - x[0] * x[0];
    return u * u;
  }
  Vec gradient(const Vec& x) const override {
    Vec g(1);
    g[0] = 4.0 * x[0] * x[0] * x[0] - 4.0 * x[0];
    return g;
  }
  Mat hessian(const Vec& x) const override {
    Mat h(1, 1);
    h(0, 0) = 12.0 * x[0] * x[0] - 4.0;
    return h;
  }
  ThirdTensor third(const Vec& x) const override {
    ThirdTensor t(1);
    t.set_sym(0, 0, 0, 24.0 * x[0]);
    return t;
  }
};

class DoubleWell2DImpl final : public ModelImpl {
 public:
  using ModelImpl::ModelImpl;
  double energy(const Vec& x) const override {
    const double u = 1.0 - x[0] * x[0];
    return u * u + spec().alpha * x[1] * x[1];
  }
  Vec gradient(const Vec& x) const override {
    Vec g(2);
    g[0] = 4.0 * x[0] * x[0] * x[0] - 4.0 * x[0];
    g[1] = 2.0 * spec().alpha * x[1];
    return g;
  }
  Mat hessian(const Vec& x) const override {
    Mat h = Mat::Zero(2, 2);
    h(0, 0) = 12.0 * x[0] * x[0] - 4.0;
    h(1, 1) = 2.0 * spec().alpha;
    return h;
  }
  ThirdTensor third(const Vec& x) const override {
    ThirdTensor t(2);
    t.set_sym(0, 0, 0, 24.0 * x[0]);
    return t;
  }
};

class CoerciveQuarticImpl final : public ModelImpl {
 public:
  using ModelImpl::ModelImpl;
  double energy(const Vec& p) const override {
    const double x = p[0], y = p[1], r2 = x * x + y * y;
    return r2 * r2 + x * x - y * y - x + y;
  }
  Vec gradient(const Vec& p) const override {
    const double x = p[0], y = p[1], r2 = x * x + y * y;
    Vec g(2);
    g[0] = 4.0 * x * r2 + 2.0 * x - 1.0;
    g[1] = 4.0 * y * r2 - 2.0 * y + 1.0;
    return g;
  }
  Mat hessian(const Vec& p) const override {
    const double x = p[0], y = p[1], r2 = x * x + y * y;
    Mat h(2, 2);
    h(0, 0) = 4.0 * r2 + 8.0 * x * x + 2.0;
    h(0, 1) = h(1, 0) = 8.0 * x * y;
    h(1, 1) = 4.0 * r2 + 8.0 * y * y - 2.0;
    return h;
  }
  ThirdTensor third(const Vec& p) const override {
    ThirdTensor t(2);
    t.set_sym(0, 0, 0, 24.0 * p[0]);
    t.set_sym(0, 0, 1, 8.0 * p[1]);
    t.set_sym(0, 1, 1, 8.0 * p[0]);
    t.set_sym(1, 1, 1, 24.0 * p[1]);
    return t;
  }
};

// cos(a) x1 + sin(a) x2 + l/2 (x1^2 + x2^2) + (s x1^3 + x1 x2^2) / 2
class CubicSingularityImpl final : public ModelImpl {
 public:
  using ModelImpl::ModelImpl;
  double energy(const Vec& p) const override {
    const double x = p[0], y = p[1];
    return std::cos(spec().alpha) * x + std::sin(spec().alpha) * y +
           0.5 * spec().lambda * (x * x + y * y) +
           0.5 * (spec().s * x * x * x + x * y * y);
  }
  Vec gradient(const Vec& p) const override {
    const double x = p[0], y = p[1];
    Vec g(2);
    g[0] = std::cos(spec().alpha) + spec().lambda * x +
           1.5 * spec().s * x * x + 0.5 * y * y;
    g[1] = std::sin(spec().alpha) + spec().lambda * y + x * y;
    return g;
  }
  Mat hessian(const Vec& p) const override {
    const double x = p[0], y = p[1];
    Mat h(2, 2);
    h(0, 0) = spec().lambda + 3.0 * spec().s * x;
    h(0, 1) = h(1, 0) = y;
    h(1, 1) = spec().lambda + x;
    return h;
  }
  ThirdTensor third(const Vec&) const override {
    ThirdTensor t(2);
    t.set_sym(0, 0, 0, 3.0 * spec().s);
    t.set_sym(0, 1, 1, 1.0);
    return t;
  }
};

// Planar singularity block with isotropic cubic (a,b) plus converging tail.
class MultiDE0Impl final : public ModelImpl {
 public:
  explicit MultiDE0Impl(ModelSpec sp) : ModelImpl(std::move(sp)) {
    nc_ = spec().H0.rows();
  }

  double g0(int i, int j, int k) const {
    if (spec().G0.empty()) return 0.0;
    return spec().G0[(static_cast<size_t>(i) * nc_ + j) * nc_ + k];
  }

  double energy(const Vec& p) const override {
    const double x1 = p[0], x2 = p[1];
    const double a = spec().plane_cubic_a, b = spec().plane_cubic_b;
    double e = std::cos(spec().alpha) * x1 + std::sin(spec().alpha) * x2 +
               0.5 * spec().lambda * (x1 * x1 + x2 * x2) +
               a * x1 * x1 * x1 + b * x1 * x1 * x2 + a * x1 * x2 * x2 +
               b * x2 * x2 * x2;
    for (int i = 0; i < nc_; ++i)
      for (int j = 0; j < nc_; ++j)
        e += 0.5 * spec().H0(i, j) * p[2 + i] * p[2 + j];
    for (int i = 0; i < nc_; ++i)
      for (int j = 0; j < nc_; ++j)
        for (int k = 0; k < nc_; ++k)
          e += g0(i, j, k) * p[2 + i] * p[2 + j] * p[2 + k] / 6.0;
    return e;
  }

  Vec gradient(const Vec& p) const override {
    const double x1 = p[0], x2 = p[1];
    const double a = spec().plane_cubic_a, b = spec().plane_cubic_b;
    Vec g = Vec::Zero(dim());
    g[0] = std::cos(spec().alpha) + spec().lambda * x1 +
           3.0 * a * x1 * x1 + 2.0 * b * x1 * x2 + a * x2 * x2;
    g[1] = std::sin(spec().alpha) + spec().lambda * x2 +
           b * x1 * x1 + 2.0 * a * x1 * x2 + 3.0 * b * x2 * x2;
    for (int i = 0; i < nc_; ++i) {
      double gi = 0.0;
      for (int j = 0; j < nc_; ++j) gi += spec().H0(i, j) * p[2 + j];
      for (int j = 0; j < nc_; ++j)
        for (int k = 0; k < nc_; ++k) gi += 0.5 * g0(i, j, k) * p[2 + j] * p[2 + k];
      g[2 + i] = gi;
    }
    return g;
  }

  Mat hessian(const Vec& p) const override {
    const double x1 = p[0], x2 = p[1];
    const double a = spec().plane_cubic_a, b = spec().plane_cubic_b;
    Mat h = Mat::Zero(dim(), dim());
    h(0, 0) = spec().lambda + 6.0 * a * x1 + 2.0 * b * x2;
    h(0, 1) = h(1, 0) = 2.0 * b * x1 + 2.0 * a * x2;
    h(1, 1) = spec().lambda + 2.0 * a * x1 + 6.0 * b * x2;
    for (int i = 0; i < nc_; ++i)
      for (int j = 0; j < nc_; ++j) {
        double hij = spec().H0(i, j);
        for (int k = 0; k < nc_; ++k) hij += g0(i, j, k) * p[2 + k];
        h(2 + i, 2 + j) = hij;
      }
    return h;
  }

  ThirdTensor third(const Vec&) const override {
    const double a = spec().plane_cubic_a, b = spec().plane_cubic_b;
    ThirdTensor t(dim());
    t.set_sym(0, 0, 0, 6.0 * a);
    t.set_sym(0, 0, 1, 2.0 * b);
    t.set_sym(0, 1, 1, 2.0 * a);
    t.set_sym(1, 1, 1, 6.0 * b);
    for (int i = 0; i < nc_; ++i)
      for (int j = i; j < nc_; ++j)
        for (int k = j; k < nc_; ++k) t.set_sym(2 + i, 2 + j, 2 + k, g0(i, j, k));
    return t;
  }

 private:
  int nc_ = 0;
};

class QuadraticImpl final : public ModelImpl {
 public:
  using ModelImpl::ModelImpl;
  double energy(const Vec& x) const override {
    return 0.5 * x.dot(spec().H * x) + spec().b.dot(x);
  }
  Vec gradient(const Vec& x) const override { return spec().H * x + spec().b; }
  Mat hessian(const Vec&) const override { return spec().H; }
  ThirdTensor third(const Vec&) const override { return ThirdTensor(dim()); }
};

// prod_i x_i^3: smooth bump with all low-order tensors vanishing at 0.
class BumpImpl final : public ModelImpl {
 public:
  using ModelImpl::ModelImpl;
  double energy(const Vec& x) const override {
    double e = 1.0;
    for (int i = 0; i < dim(); ++i) e *= x[i] * x[i] * x[i];
    return e;
  }
  Vec gradient(const Vec& x) const override {
    Vec g(dim());
    for (int i = 0; i < dim(); ++i) {
      double p = 3.0 * x[i] * x[i];
      for (int j = 0; j < dim(); ++j)
        if (j != i) p *= x[j] * x[j] * x[j];
      g[i] = p;
    }
    return g;
  }
  Mat hessian(const Vec& x) const override {
    Mat h(dim(), dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j) {
        double p = (i == j) ? 6.0 * x[i] : 9.0 * x[i] * x[i] * x[j] * x[j];
        for (int k = 0; k < dim(); ++k)
          if (k != i && k != j) p *= x[k] * x[k] * x[k];
        h(i, j) = h(j, i) = p;
      }
    return h;
  }
  ThirdTensor third(const Vec& x) const override {
    ThirdTensor t(dim());
    for (int i = 0; i < dim(); ++i)
      for (int j = i; j < dim(); ++j)
        for (int k = j; k < dim(); ++k) {
          double p = 1.0;
          if (i == j && j == k) {
            p = 6.0;
          } else if (i == j) {
            p = 6.0 * x[i] * 3.0 * x[k] * x[k];
          } else if (j == k) {
            p = 6.0 * x[j] * 3.0 * x[i] * x[i];
          } else {
            p = 27.0 * x[i] * x[i] * x[j] * x[j] * x[k] * x[k];
          }
          for (int m = 0; m < dim(); ++m)
            if (m != i && m != j && m != k) p *= x[m] * x[m] * x[m];
          t.set_sym(i, j, k, p);
        }
    return t;
  }
};

class PerturbedImpl final : public ModelImpl {
 public:
  PerturbedImpl(ModelSpec sp, EnergyModel base, EnergyModel pert)
      : ModelImpl(std::move(sp)), base_(std::move(base)), pert_(std::move(pert)) {}
  double energy(const Vec& x) const override {
    return base_.energy(x) + spec().delta * pert_.energy(x);
  }
  Vec gradient(const Vec& x) const override {
    return base_.gradient(x) + spec().delta * pert_.gradient(x);
  }
  Mat hessian(const Vec& x) const override {
    return base_.hessian(x) + spec().delta * pert_.hessian(x);
  }
  ThirdTensor third(const Vec& x) const override {
    ThirdTensor t = base_.third(x);
    const ThirdTensor p = pert_.third(x);
    ThirdTensor out(t.dim());
    for (int i = 0; i < t.dim(); ++i)
      for (int j = 0; j < t.dim(); ++j)
        for (int k = 0; k < t.dim(); ++k)
          out.at(i, j, k) = t(i, j, k) + spec().delta * p(i, j, k);
    return out;
  }

 private:
  EnergyModel base_, pert_;
};

class CustomImpl final : public ModelImpl {
 public:
  CustomImpl(ModelSpec sp, std::function<double(const Vec&)> e, double h)
      : ModelImpl(std::move(sp)), e_(std::move(e)), h_(h) {}
  double energy(const Vec& x) const override { return e_(x); }
  Vec gradient(const Vec& x) const override {
    Vec g(dim());
    Vec xp = x;
    for (int i = 0; i < dim(); ++i) {
      xp[i] = x[i] + h_; const double ep = e_(xp);
      xp[i] = x[i] - h_; const double em = e_(xp);
      xp[i] = x[i];
      g[i] = (ep - em) / (2.0 * h_);
    }
    return g;
  }
  Mat hessian(const Vec& x) const override {
    Mat h(dim(), dim());
    Vec xp = x;
    for (int k = 0; k < dim(); ++k) {
      xp[k] = x[k] + h_; const Vec gp = gradient(xp);
      xp[k] = x[k] - h_; const Vec gm = gradient(xp);
      xp[k] = x[k];
      h.col(k) = (gp - gm) / (2.0 * h_);
    }
    return 0.5 * (h + h.transpose());
  }
  ThirdTensor third(const Vec& x) const override {
    ThirdTensor t(dim());
    Vec xp = x;
    for (int k = 0; k < dim(); ++k) {
      xp[k] = x[k] + h_; const Mat hp = hessian(xp);
      xp[k] = x[k] - h_; const Mat hm = hessian(xp);
      xp[k] = x[k];
      const Mat d = (hp - hm) / (2.0 * h_);
      for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j) t.at(i, j, k) = d(i, j);
    }
    return t;
  }

 private:
  std::function<double(const Vec&)> e_;
  double h_;
};

}  // namespace
}  // namespace detail

// ---------------------------------------------------------------------------
// ModelSpec

void ModelSpec::validate() const {
  switch (kind) {
    case Kind::DoubleWell2D:
      if (!(alpha > 0.0))
        throw std::invalid_argument("DoubleWell2D requires alpha > 0");
      break;
    case Kind::MultiDE0: {
      if (H0.rows() != H0.cols() || H0.rows() < 1)
        throw std::invalid_argument("MultiDE0 requires a square H0 of size N-2 >= 1");
      if ((H0 - H0.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("MultiDE0 requires H0 symmetric");
      if (!G0.empty() &&
          G0.size() != static_cast<size_t>(H0.rows()) * H0.rows() * H0.rows())
        throw std::invalid_argument("MultiDE0 G0 must be dense (N-2)^3");
      Eigen::SelfAdjointEigenSolver<Mat> es(H0);
      const double floor = std::max(lambda, 0.0);
      if (!(es.eigenvalues().minCoeff() > floor))
        throw std::invalid_argument(
            "MultiDE0 requires H0 > max(lambda0, 0) I (violated invariant)");
      break;
    }
    case Kind::Perturbed:
      if (!base) throw std::invalid_argument("Perturbed requires a base spec");
      if (!(delta >= 0.0))
        throw std::invalid_argument("Perturbed requires delta >= 0");
      base->validate();
      if (perturbation) {
        perturbation->validate();
        if (perturbation->dimension() != base->dimension())
          throw std::invalid_argument(
              "Perturbed requires matching base/perturbation dimensions");
      }
      break;
    case Kind::Quadratic:
      if (H.rows() != H.cols() || H.rows() < 1)
        throw std::invalid_argument("Quadratic requires a square H");
      if ((H - H.transpose()).cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("Quadratic requires H symmetric");
      if (b.size() != H.rows())
        throw std::invalid_argument("Quadratic requires b of matching size");
      break;
    case Kind::Bump:
      if (dim < 1) throw std::invalid_argument("Bump requires dim >= 1");
      break;
    default:
      break;
  }
}

int ModelSpec::dimension() const {
  switch (kind) {
    case Kind::DoubleWell1D: return 1;
    case Kind::DoubleWell2D:
    case Kind::CoerciveQuartic:
    case Kind::CubicSingularity:
    case Kind::IsotropicCanonical: return 2;
    case Kind::MultiDE0: return 2 + static_cast<int>(H0.rows());
    case Kind::Perturbed: return base ? base->dimension() : 0;
    case Kind::Quadratic: return static_cast<int>(H.rows());
    case Kind::Bump: return dim;
  }
  return 0;
}

std::string ModelSpec::kind_name() const {
  switch (kind) {
    case Kind::DoubleWell1D: return "doublewell1d";
    case Kind::DoubleWell2D: return "doublewell2d";
    case Kind::CoerciveQuartic: return "coercive_quartic";
    case Kind::CubicSingularity: return "cubic_singularity";
    case Kind::IsotropicCanonical: return "isotropic_canonical";
    case Kind::MultiDE0: return "multid_e0";
    case Kind::Perturbed: return "perturbed";
    case Kind::Quadratic: return "quadratic";
    case Kind::Bump: return "bump";
  }
  return "unknown";
}

ModelSpec ModelSpec::double_well_1d() {
  ModelSpec s;
  s.kind = Kind::DoubleWell1D;
  return s;
}
ModelSpec ModelSpec::double_well_2d(double alpha) {
  ModelSpec s;
  s.kind = Kind::DoubleWell2D;
  s.alpha = alpha;
  return s;
}
ModelSpec ModelSpec::coercive_quartic() {
  ModelSpec s;
  s.kind = Kind::CoerciveQuartic;
  return s;
}
ModelSpec ModelSpec::cubic_singularity(double alpha, double lambda, double sc) {
  ModelSpec s;
  s.kind = Kind::CubicSingularity;
  s.alpha = alpha;
  s.lambda = lambda;
  s.s = sc;
  return s;
}
ModelSpec ModelSpec::isotropic_canonical(double alpha, double lambda) {
  ModelSpec s;
  s.kind = Kind::IsotropicCanonical;
  s.alpha = alpha;
  s.lambda = lambda;
  s.s = 1.0;
  return s;
}
ModelSpec ModelSpec::multid_e0(double alpha0, double lambda0, Mat H0,
                               std::vector<double> G0, double pa, double pb) {
  ModelSpec s;
  s.kind = Kind::MultiDE0;
  s.alpha = alpha0;
  s.lambda = lambda0;
  s.H0 = std::move(H0);
  s.G0 = std::move(G0);
  s.plane_cubic_a = pa;
  s.plane_cubic_b = pb;
  return s;
}
ModelSpec ModelSpec::quadratic(Mat H, Vec b) {
  ModelSpec s;
  s.kind = Kind::Quadratic;
  s.H = std::move(H);
  s.b = std::move(b);
  return s;
}
ModelSpec ModelSpec::bump(int dim) {
  ModelSpec s;
  s.kind = Kind::Bump;
  s.dim = dim;
  return s;
}
ModelSpec ModelSpec::perturbed(ModelSpec base, double delta,
                               std::shared_ptr<const ModelSpec> pert) {
  ModelSpec s;
  s.kind = Kind::Perturbed;
  s.base = std::make_shared<const ModelSpec>(std::move(base));
  s.perturbation = std::move(pert);
  s.delta = delta;
  return s;
}
ModelSpec ModelSpec::cycling_example_3d() {
  Mat H0(1, 1);
  H0(0, 0) = 1.1;
  std::vector<double> G0{6.0};  // z^3 = G_333 z^3 / 6
  return multid_e0(3.0 * std::numbers::pi / 4.0, 1.0, H0, G0, 0.0, 0.5);
}

// ---------------------------------------------------------------------------
// EnergyModel

int EnergyModel::dimension() const { return impl_->dim(); }
const ModelSpec& EnergyModel::spec() const { return impl_->spec(); }

static void require_finite(const Vec& x, int dim) {
  if (x.size() != dim) throw std::invalid_argument("eval: dimension mismatch");
  if (!x.allFinite()) throw std::invalid_argument("eval: non-finite input rejected");
}

double EnergyModel::energy(const Vec& x) const {
  require_finite(x, impl_->dim());
  return impl_->energy(x);
}
Vec EnergyModel::gradient(const Vec& x) const {
  require_finite(x, impl_->dim());
  return impl_->gradient(x);
}
Mat EnergyModel::hessian(const Vec& x) const {
  require_finite(x, impl_->dim());
  return impl_->hessian(x);
}
ThirdTensor EnergyModel::third(const Vec& x) const {
  require_finite(x, impl_->dim());
  return impl_->third(x);
}

EnergyModel make_model(const ModelSpec& spec) {
  spec.validate();
  using K = ModelSpec::Kind;
  switch (spec.kind) {
    case K::DoubleWell1D:
      return EnergyModel(std::make_shared<detail::DoubleWell1DImpl>(spec));
    case K::DoubleWell2D:
      return EnergyModel(std::make_shared<detail::DoubleWell2DImpl>(spec));
    case K::CoerciveQuartic:
      return EnergyModel(std::make_shared<detail::CoerciveQuarticImpl>(spec));
    case K::CubicSingularity:
    case K::IsotropicCanonical:
      return EnergyModel(std::make_shared<detail::CubicSingularityImpl>(spec));
    case K::MultiDE0:
      return EnergyModel(std::make_shared<detail::MultiDE0Impl>(spec));
    case K::Quadratic:
      return EnergyModel(std::make_shared<detail::QuadraticImpl>(spec));
    case K::Bump:
      return EnergyModel(std::make_shared<detail::BumpImpl>(spec));
    case K::Perturbed: {
      EnergyModel base = make_model(*spec.base);
      EnergyModel pert = spec.perturbation
                             ? make_model(*spec.perturbation)
                             : make_model(ModelSpec::bump(base.dimension()));
      return EnergyModel(std::make_shared<detail::PerturbedImpl>(
          spec, std::move(base), std::move(pert)));
    }
  }
  throw std::invalid_argument("make_model: unknown variant");
}

EnergyModel make_custom_model(int dim, std::function<double(const Vec&)> energy,
                              double fd_step) {
  if (dim < 1) throw std::invalid_argument("custom model requires dim >= 1");
  if (!(fd_step > 0.0)) throw std::invalid_argument("custom model requires h > 0");
  ModelSpec s;
  s.kind = ModelSpec::Kind::Bump;  // placeholder tag; spec not serializable
  s.dim = dim;
  return EnergyModel(
      std::make_shared<detail::CustomImpl>(s, std::move(energy), fd_step));
}

EvalResult eval(const EnergyModel& model, const Vec& x, int order) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("eval: order must be in 0..3");
  switch (order) {
    case 0: return model.energy(x);
    case 1: return model.gradient(x);
    case 2: return model.hessian(x);
    default: return model.third(x);
  }
}

DerivativeReport check_derivatives(const EnergyModel& model, const Vec& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("check_derivatives requires h > 0");
  const int n = model.dimension();
  DerivativeReport rep;

  auto rel = [](double diff, double scale) {
    return diff / std::max(1.0, scale);
  };

  // order 1: analytic gradient vs central differences of energy
  {
    const Vec g = model.gradient(x);
    Vec fd(n);
    Vec xp = x;
    for (int i = 0; i < n; ++i) {
      xp[i] = x[i] + h; const double ep = model.energy(xp);
      xp[i] = x[i] - h; const double em = model.energy(xp);
      xp[i] = x[i];
      fd[i] = (ep - em) / (2.0 * h);
    }
    rep.grad_err = rel((g - fd).cwiseAbs().maxCoeff(), g.cwiseAbs().maxCoeff());
  }
  // order 2: analytic hessian vs central differences of gradient
  {
    const Mat H = model.hessian(x);
    Mat fd(n, n);
    Vec xp = x;
    for (int k = 0; k < n; ++k) {
      xp[k] = x[k] + h; const Vec gp = model.gradient(xp);
      xp[k] = x[k] - h; const Vec gm = model.gradient(xp);
      xp[k] = x[k];
      fd.col(k) = (gp - gm) / (2.0 * h);
    }
    rep.hess_err = rel((H - fd).cwiseAbs().maxCoeff(), H.cwiseAbs().maxCoeff());
  }
  // order 3: analytic third tensor vs central differences of hessian
  {
    const ThirdTensor T = model.third(x);
    double diff = 0.0;
    Vec xp = x;
    for (int k = 0; k < n; ++k) {
      xp[k] = x[k] + h; const Mat hp = model.hessian(xp);
      xp[k] = x[k] - h; const Mat hm = model.hessian(xp);
      xp[k] = x[k];
      const Mat d = (hp - hm) / (2.0 * h);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          diff = std::max(diff, std::abs(T(i, j, k) - d(i, j)));
    }
    rep.third_err = rel(diff, T.max_abs());
  }
  return rep;
}

}  // namespace sdyn
