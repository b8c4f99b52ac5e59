#pragma once

// Canonical sectorial solutions by asymptotic matching plus transport, and
// the Stokes matrices between the right and left half planes.
//
// Orientation: Y_+ lives on the right half plane (base ray arg 0), Y_- on the
// left half plane with base ray arg -pi. Continuation between them runs
// clockwise through the lower half plane, and
//   Y_-(z) = Y_+(z) S_+           at arg z = -pi,
//   Y_+(z) = Y_-(z) e^{2 pi i [A]} S_-   with Y_- continued to arg z = -2 pi.

#include <optional>
#include <vector>

#include "dkz/formal_series.hpp"
#include "dkz/integrator.hpp"

namespace dkz {

enum class HalfPlane { Right, Left };

struct SectorSpec {
  HalfPlane half_plane = HalfPlane::Right;

  /// 0 for Right, -pi for Left. This is also the branch of arg z used for z^[A].
  double base_ray_arg() const;
  static SectorSpec right() { return {HalfPlane::Right}; }
  static SectorSpec left() { return {HalfPlane::Left}; }
};

/// Directions arg z in (-pi, pi] where (lambda_a - lambda_b) z is negative
/// real, deduplicated and sorted. Empty when Lambda is scalar.
std::vector<double> anti_stokes_rays(const ComplexVector& lambda, double block_tol = 1e-12);
std::vector<double> anti_stokes_rays(const IrregularODE& ode);

/// Throws AntiStokesOnRay if an anti-Stokes ray lies within `guard` radians
/// of the ray arg = `arg`.
void check_base_ray(const IrregularODE& ode, double arg, double guard = 0.1);

struct MatchPoint {
  double rho = 0.0;
  int order = 0;
  /// ||H_order|| rho^{-order}.
  double tail = 0.0;
};

/// Smallest rho on the geometric grid rho_min * 1.25^k with optimal-truncation
/// tail <= tail_tol. Throws MatchRadiusTooSmall if rho_max is reached first.
MatchPoint matching_radius(const FormalSolution& fs, double tail_tol = 1e-10, double rho_min = 1.0,
                           double rho_max = 1e5);

struct StokesOptions {
  int max_order = kDefaultSeriesOrder;
  double tail_tol = 1e-10;
  /// Fixed matching radius when > 0.
  double rho = 0.0;
  double rho_max = 1e5;
  /// Radius of the inner arc used to move between rays.
  /// <= 0 picks min(1, 1/max|lambda_a - lambda_b|).
  double inner_radius = 0.0;
  double ray_guard = 0.1;
  /// Recompute at 2 rho and keep doubling while entries move by more than this.
  /// <= 0 disables the check.
  double self_check = 1e-8;
  int max_doublings = 4;
  ToleranceSpec tol;
};

/// Path from `from` radially in to |z| = r_in, along that circle to arg
/// to.arg, and radially out to `to`.
ComplexPath ray_to_ray_path(CoverPoint from, CoverPoint to, double r_in);

/// Value at z_eval of the canonical solution of the sector. z_eval must be
/// reachable from the base ray; its arg selects the branch. The formal value
/// is taken at the matching radius on the base ray and transported.
ComplexMatrix canonical_solution(const IrregularODE& ode, SectorSpec sector, CoverPoint z_eval,
                                 const StokesOptions& opt = {});

struct StokesData {
  ComplexMatrix S_plus;
  ComplexMatrix S_minus;
  /// [A] and e^{2 pi i [A]}.
  ComplexMatrix exponent;
  ComplexMatrix formal_monodromy;
  /// e^{pi i [A]} S_+ and e^{pi i [A]} S_-.
  ComplexMatrix R;
  ComplexMatrix R_minus;
  bool from_dkz2 = false;

  MatchPoint match;
  double inner_radius = 0.0;
  ToleranceSpec tol;
  IntegrationStats stats;
  int doublings = 0;
  /// Change of S_+-entries under rho -> 2 rho at the last check (0 if not run).
  double rho_stability = 0.0;

  /// max |(S - I)| over Lambda-blocks, and |det S - 1|.
  double block_identity_plus = 0.0;
  double block_identity_minus = 0.0;
  double det_plus = 0.0;
  double det_minus = 0.0;
};

StokesData stokes_matrices(const IrregularODE& ode, const StokesOptions& opt = {});

enum class StokesSign { Plus, Minus };

/// R or R_-. Throws ValidationError unless sd came from a dKZ_2 build.
const ComplexMatrix& stokes_multiplier(const StokesData& sd, StokesSign which);

/// S_+ e^{2 pi i [A]} S_-.
ComplexMatrix stokes_monodromy(const StokesData& sd);

/// Counterclockwise monodromy around z = 0: transport once around |z| = radius
/// starting and ending at z = radius. radius <= 0 picks min(1, 1/max gap).
ComplexMatrix monodromy_at_zero(const IrregularODE& ode, double radius = 0.0, const ToleranceSpec& tol = {});

/// Greedy nearest pairing of two eigenvalue multisets; the largest paired distance.
double eigenvalue_distance(const ComplexMatrix& a, const ComplexMatrix& b);
double eigenvalue_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace dkz
