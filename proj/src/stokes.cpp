#include "dkz/stokes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

namespace dkz {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_pi(double a) {
  // (-pi, pi]
  a = std::remainder(a, 2 * kPi);
  if (a <= -kPi) a += 2 * kPi;
  return a;
}

double default_inner_radius(const IrregularODE& ode) {
  const double g = ode.max_gap();
  return g > 1.0 ? 1.0 / g : 1.0;
}

double block_identity_deviation(const ComplexMatrix& s, const IrregularODE& ode) {
  double worst = 0.0;
  for (Eigen::Index a = 0; a < s.rows(); ++a)
    for (Eigen::Index b = 0; b < s.cols(); ++b)
      if (ode.same_block(a, b)) worst = std::max(worst, std::abs(s(a, b) - (a == b ? 1.0 : 0.0)));
  return worst;
}

ComplexMatrix exp_i_pi(const ComplexMatrix& exponent, double factor) {
  ComplexMatrix x = Complex(0.0, factor * kPi) * exponent;
  return x.exp();
}

struct StokesPair {
  ComplexMatrix plus;
  ComplexMatrix minus;
};

StokesPair stokes_at(const IrregularODE& ode, const FormalSolution& fs, const MatchPoint& mp, double r_in,
                     const ComplexMatrix& formal_monodromy, const ToleranceSpec& tol, IntegrationStats* stats) {
  const CoverPoint right{mp.rho, 0.0};
  const CoverPoint left{mp.rho, -kPi};
  const CoverPoint left_again{mp.rho, -2 * kPi};
  const ComplexMatrix y_plus = evaluate_truncated(fs, right, mp.order);
  const ComplexMatrix y_minus = evaluate_truncated(fs, left, mp.order);

  const ComplexMatrix y_plus_cont = transport(ode, ray_to_ray_path(right, left, r_in), y_plus, tol, stats);
  const ComplexMatrix y_minus_cont = transport(ode, ray_to_ray_path(left, left_again, r_in), y_minus, tol, stats);

  StokesPair out;
  out.plus = y_plus_cont.fullPivLu().solve(y_minus);
  out.minus = (y_minus_cont * formal_monodromy).fullPivLu().solve(y_plus);
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

double SectorSpec::base_ray_arg() const { return half_plane == HalfPlane::Right ? 0.0 : -kPi; }

std::vector<double> anti_stokes_rays(const ComplexVector& lambda, double block_tol) {
  double scale = 1.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) scale = std::max(scale, std::abs(lambda(i)));
  std::vector<double> rays;
  for (Eigen::Index a = 0; a < lambda.size(); ++a)
    for (Eigen::Index b = 0; b < lambda.size(); ++b) {
      const Complex d = lambda(a) - lambda(b);
      if (std::abs(d) <= block_tol * scale) continue;
      rays.push_back(wrap_pi(kPi - std::arg(d)));
    }
  std::sort(rays.begin(), rays.end());
  std::vector<double> out;
  for (double r : rays)
    if (out.empty() || r - out.back() > 1e-12) out.push_back(r);
  // -pi + eps and pi describe the same ray.
  if (out.size() > 1 && out.front() + 2 * kPi - out.back() <= 1e-12) out.erase(out.begin());
  return out;
}

std::vector<double> anti_stokes_rays(const IrregularODE& ode) { return anti_stokes_rays(ode.lambda()); }

void check_base_ray(const IrregularODE& ode, double arg, double guard) {
  for (double r : anti_stokes_rays(ode)) {
    const double d = std::abs(wrap_pi(r - arg));
    if (d < guard)
      throw AntiStokesOnRay("anti-Stokes ray at arg " + std::to_string(r) + " lies within " + std::to_string(guard) +
                            " rad of the base ray arg " + std::to_string(arg));
  }
}

MatchPoint matching_radius(const FormalSolution& fs, double tail_tol, double rho_min, double rho_max) {
  if (!(rho_min > 0.0) || !(rho_max >= rho_min)) throw ValidationError("matching_radius: bad radius range");
  for (double rho = rho_min; rho <= rho_max; rho *= 1.25) {
    int k = 0;
    try {
      k = optimal_truncation(fs, rho);
    } catch (const MatchRadiusTooSmall&) {
      continue;
    }
    const double tail = k == 0 ? 0.0 : series_term(fs, rho, k);
    if (tail <= tail_tol) return {rho, k, tail};
  }
  throw MatchRadiusTooSmall("matching_radius: no radius up to " + std::to_string(rho_max) +
                            " reaches tail " + std::to_string(tail_tol));
}

ComplexPath ray_to_ray_path(CoverPoint from, CoverPoint to, double r_in) {
  if (!(r_in > 0.0)) throw ValidationError("ray_to_ray_path: inner radius must be positive");
  ComplexPath path;
  const Complex a = std::polar(r_in, from.arg);
  const Complex b = std::polar(r_in, to.arg);
  if (from.modulus != r_in) path.then(LineSegment{from.value(), a});
  if (from.arg != to.arg) path.then(ArcSegment{0.0, r_in, from.arg, to.arg});
  if (to.modulus != r_in) path.then(LineSegment{b, to.value()});
  return path;
}

ComplexMatrix canonical_solution(const IrregularODE& ode, SectorSpec sector, CoverPoint z_eval,
                                 const StokesOptions& opt) {
  opt.tol.validate();
  const double base = sector.base_ray_arg();
  check_base_ray(ode, base, opt.ray_guard);
  const FormalSolution fs = formal_series(ode, opt.max_order);
  MatchPoint mp;
  if (opt.rho > 0.0) {
    mp.rho = opt.rho;
    mp.order = optimal_truncation(fs, opt.rho);
    mp.tail = mp.order == 0 ? 0.0 : series_term(fs, opt.rho, mp.order);
  } else {
    mp = matching_radius(fs, opt.tail_tol, 1.0, opt.rho_max);
  }
  const CoverPoint start{mp.rho, base};
  const ComplexMatrix f0 = evaluate_truncated(fs, start, mp.order);
  const double r_in = opt.inner_radius > 0.0 ? opt.inner_radius : default_inner_radius(ode);
  return transport(ode, ray_to_ray_path(start, z_eval, r_in), f0, opt.tol);
}

StokesData stokes_matrices(const IrregularODE& ode, const StokesOptions& opt) {
  opt.tol.validate();
  check_base_ray(ode, 0.0, opt.ray_guard);
  check_base_ray(ode, -kPi, opt.ray_guard);

  const FormalSolution fs = formal_series(ode, opt.max_order);
  StokesData sd;
  sd.exponent = fs.exponent();
  sd.formal_monodromy = exp_i_pi(sd.exponent, 2.0);
  sd.inner_radius = opt.inner_radius > 0.0 ? opt.inner_radius : default_inner_radius(ode);
  sd.tol = opt.tol;
  sd.from_dkz2 = ode.origin.has_value() && ode.origin->is_dkz2();

  auto at_radius = [&](double rho) {
    MatchPoint mp;
    mp.rho = rho;
    mp.order = optimal_truncation(fs, rho);
    mp.tail = mp.order == 0 ? 0.0 : series_term(fs, rho, mp.order);
    return mp;
  };

  if (opt.rho > 0.0)
    sd.match = at_radius(opt.rho);
  else
    sd.match = matching_radius(fs, opt.tail_tol, 1.0, opt.rho_max);

  StokesPair s = stokes_at(ode, fs, sd.match, sd.inner_radius, sd.formal_monodromy, opt.tol, &sd.stats);
  if (opt.self_check > 0.0) {
    for (;;) {
      const MatchPoint wider = at_radius(2.0 * sd.match.rho);
      StokesPair s2 = stokes_at(ode, fs, wider, sd.inner_radius, sd.formal_monodromy, opt.tol, &sd.stats);
      sd.rho_stability = std::max(max_abs_diff(s.plus, s2.plus), max_abs_diff(s.minus, s2.minus));
      if (sd.rho_stability <= opt.self_check || sd.doublings >= opt.max_doublings) break;
      sd.match = wider;
      s = std::move(s2);
      ++sd.doublings;
    }
  }

  sd.S_plus = std::move(s.plus);
  sd.S_minus = std::move(s.minus);
  const ComplexMatrix half = exp_i_pi(sd.exponent, 1.0);
  sd.R = half * sd.S_plus;
  sd.R_minus = half * sd.S_minus;
  sd.block_identity_plus = block_identity_deviation(sd.S_plus, ode);
  sd.block_identity_minus = block_identity_deviation(sd.S_minus, ode);
  sd.det_plus = std::abs(sd.S_plus.determinant() - 1.0);
  sd.det_minus = std::abs(sd.S_minus.determinant() - 1.0);
  return sd;
}

const ComplexMatrix& stokes_multiplier(const StokesData& sd, StokesSign which) {
  if (!sd.from_dkz2) throw ValidationError("stokes_multiplier: Stokes data does not come from a dKZ_2 equation");
  return which == StokesSign::Plus ? sd.R : sd.R_minus;
}

ComplexMatrix stokes_monodromy(const StokesData& sd) { return sd.S_plus * sd.formal_monodromy * sd.S_minus; }

ComplexMatrix monodromy_at_zero(const IrregularODE& ode, double radius, const ToleranceSpec& tol) {
  const double r = radius > 0.0 ? radius : default_inner_radius(ode);
  return transport(ode, ComplexPath({ArcSegment{0.0, r, 0.0, 2 * kPi}}), tol);
}

double eigenvalue_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("eigenvalue_distance: multisets differ in size");
  const Eigen::Index n = a.size();
  std::vector<bool> used_a(n, false), used_b(n, false);
  double worst = 0.0;
  for (Eigen::Index round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    Eigen::Index bi = -1, bj = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used_a[i]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (used_b[j]) continue;
        const double d = std::abs(a(i) - b(j));
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    used_a[bi] = true;
    used_b[bj] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

double eigenvalue_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return eigenvalue_distance(ComplexVector(a.eigenvalues()), ComplexVector(b.eigenvalues()));
}

}  // namespace dkz
