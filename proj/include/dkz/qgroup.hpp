#pragma once

// The U_q(sl_2) R-matrix on C^2 (x) C^2 and its comparison with a computed
// Stokes multiplier up to diagonal gauge and an overall scalar.

#include <array>
#include <string>

#include "dkz/tensor.hpp"

namespace dkz {

struct QParameter {
  Complex q{1.0, 0.0};
  /// How q was obtained, e.g. "exp(i pi/kappa)".
  std::string convention = "explicit";

  /// q = e^{i pi / kappa}.
  static QParameter from_kappa(Complex kappa);
};

/// q^{-1/2} [[q,0,0,0],[0,1,0,0],[0,q-1/q,1,0],[0,0,0,q]] in the basis
/// e1e1, e1e2, e2e1, e2e2, principal square root. Throws ValidationError for q = 0.
ComplexMatrix uq_sl2_R(Complex q);

/// ||(PR - q^{1/2})(PR + q^{-3/2})||. PR has exactly these two eigenvalues
/// for R = uq_sl2_R(q).
double hecke_residual(const ComplexMatrix& r, Complex q);

enum class ConventionVariant { Direct, Flipped, Inverse, FlippedInverse };
inline constexpr std::array<ConventionVariant, 4> kAllVariants{ConventionVariant::Direct, ConventionVariant::Flipped,
                                                                ConventionVariant::Inverse,
                                                                ConventionVariant::FlippedInverse};

/// R, P R P, R^{-1}, P R^{-1} P.
ComplexMatrix convention_variant(const ComplexMatrix& r, ConventionVariant v);
std::string variant_name(ConventionVariant v);

enum class GaugeMode { Strict, DiagonalGauge };

struct GaugeFit {
  double residual = 0.0;
  /// D = diag(1, d) acting as D (x) D, and the overall scalar c:
  /// residual = ||c (D(x)D) R_q (D(x)D)^{-1} - R||.
  Complex d{1.0, 0.0};
  Complex scale{1.0, 0.0};
  int iterations = 0;
};

/// Levenberg-Marquardt over (d, c) from d = 1, c = 1. Strict mode returns
/// the max entrywise |target - model| with no gauge.
GaugeFit fit_gauge(const ComplexMatrix& target, const ComplexMatrix& model, GaugeMode mode);

struct VariantResult {
  ConventionVariant variant = ConventionVariant::Direct;
  ComplexMatrix Rq;
  double strict = 0.0;
  GaugeFit gauge;
};

struct QGroupReport {
  QParameter q;
  ComplexMatrix R;
  std::array<VariantResult, 4> variants;
  /// Index into variants of the smallest gauge residual.
  int best = 0;
};

/// Compare a computed 4x4 multiplier against all four variants of uq_sl2_R(q).
QGroupReport compare_stokes_to_qgroup(const ComplexMatrix& r, const QParameter& q);

}  // namespace dkz
