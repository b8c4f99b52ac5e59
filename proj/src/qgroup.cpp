#include "dkz/qgroup.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

namespace dkz {

namespace {

ComplexMatrix gauge_model(const ComplexMatrix& model, Complex d, Complex c) {
  // D (x) D = diag(1, d, d, d^2).
  const std::array<Complex, 4> w{1.0, d, d, d * d};
  ComplexMatrix out(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s) out(r, s) = c * model(r, s) * w[r] / w[s];
  return out;
}

// Real residual vector (re, im of the 16 entries) over x = (Re d, Im d, Re c, Im c).
struct GaugeFunctor {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const ComplexMatrix& target;
  const ComplexMatrix& model;

  GaugeFunctor(const ComplexMatrix& t, const ComplexMatrix& m) : target(t), model(m) {}
  int inputs() const { return 4; }
  int values() const { return 32; }

  int operator()(const InputType& x, ValueType& f) const {
    const ComplexMatrix g = gauge_model(model, {x(0), x(1)}, {x(2), x(3)}) - target;
    for (int k = 0; k < 16; ++k) {
      f(2 * k) = g(k).real();
      f(2 * k + 1) = g(k).imag();
    }
    return 0;
  }
};

}  // namespace

QParameter QParameter::from_kappa(Complex kappa) {
  if (kappa == Complex(0.0)) throw ValidationError("QParameter: kappa must be nonzero");
  return {std::exp(Complex(0.0, std::numbers::pi) / kappa), "exp(i pi/kappa)"};
}

ComplexMatrix uq_sl2_R(Complex q) {
  if (q == Complex(0.0)) throw ValidationError("uq_sl2_R: q must be nonzero");
  ComplexMatrix r = ComplexMatrix::Zero(4, 4);
  r(0, 0) = q;
  r(1, 1) = 1.0;
  r(2, 1) = q - 1.0 / q;
  r(2, 2) = 1.0;
  r(3, 3) = q;
  return r / std::sqrt(q);
}

double hecke_residual(const ComplexMatrix& r, Complex q) {
  if (r.rows() != 4 || r.cols() != 4) throw DimensionError("hecke_residual: R must be 4 x 4");
  const ComplexMatrix check = casimir_omega(2) * r;
  const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
  const Complex sq = std::sqrt(q);
  return frobenius((check - sq * id) * (check + id / (q * sq)));
}

ComplexMatrix convention_variant(const ComplexMatrix& r, ConventionVariant v) {
  if (r.rows() != 4 || r.cols() != 4) throw DimensionError("convention_variant: R must be 4 x 4");
  const ComplexMatrix p = casimir_omega(2);
  switch (v) {
    case ConventionVariant::Direct:
      return r;
    case ConventionVariant::Flipped:
      return p * r * p;
    case ConventionVariant::Inverse:
      return r.inverse();
    case ConventionVariant::FlippedInverse:
      return p * r.inverse() * p;
  }
  return r;
}

std::string variant_name(ConventionVariant v) {
  switch (v) {
    case ConventionVariant::Direct:
      return "R";
    case ConventionVariant::Flipped:
      return "P R P";
    case ConventionVariant::Inverse:
      return "R^-1";
    case ConventionVariant::FlippedInverse:
      return "P R^-1 P";
  }
  return "?";
}

GaugeFit fit_gauge(const ComplexMatrix& target, const ComplexMatrix& model, GaugeMode mode) {
  if (target.rows() != 4 || target.cols() != 4 || model.rows() != 4 || model.cols() != 4)
    throw DimensionError("fit_gauge: matrices must be 4 x 4");
  GaugeFit fit;
  if (mode == GaugeMode::Strict) {
    fit.residual = (target - model).cwiseAbs().maxCoeff();
    return fit;
  }
  GaugeFunctor f(target, model);
  Eigen::NumericalDiff<GaugeFunctor> nd(f);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<GaugeFunctor>> lm(nd);
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  lm.parameters.maxfev = 4000;
  Eigen::VectorXd x(4);
  x << 1.0, 0.0, 1.0, 0.0;
  lm.minimize(x);
  fit.d = {x(0), x(1)};
  fit.scale = {x(2), x(3)};
  fit.iterations = static_cast<int>(lm.iter);
  fit.residual = frobenius(gauge_model(model, fit.d, fit.scale) - target);
  return fit;
}

QGroupReport compare_stokes_to_qgroup(const ComplexMatrix& r, const QParameter& q) {
  if (r.rows() != 4 || r.cols() != 4) throw DimensionError("compare_stokes_to_qgroup: needs m = 2 (4 x 4 R)");
  QGroupReport rep;
  rep.q = q;
  rep.R = r;
  const ComplexMatrix base = uq_sl2_R(q.q);
  for (std::size_t k = 0; k < kAllVariants.size(); ++k) {
    auto& v = rep.variants[k];
    v.variant = kAllVariants[k];
    v.Rq = convention_variant(base, v.variant);
    v.strict = fit_gauge(r, v.Rq, GaugeMode::Strict).residual;
    v.gauge = fit_gauge(r, v.Rq, GaugeMode::DiagonalGauge);
    if (v.gauge.residual < rep.variants[rep.best].gauge.residual) rep.best = static_cast<int>(k);
  }
  return rep;
}

}  // namespace dkz
