#pragma once

// Adaptive Dormand-Prince 5(4) transport of matrix solutions along
// piecewise-smooth paths, in C^* for the irregular ODE and in the
// configuration space of n points for the dKZ connection.

#include <functional>
#include <variant>
#include <vector>

#include "dkz/formal_series.hpp"

namespace dkz {

struct ToleranceSpec {
  double rel_tol = 1e-13;
  double abs_tol = 1e-15;
  long max_steps = 2'000'000;

  /// rel_tol in [1e-14, 1e-2], abs_tol >= 0, max_steps > 0.
  void validate() const;
};

struct IntegrationStats {
  long steps = 0;
  long rejected = 0;
};

/// y' = f(t, y) from t0 to t1, y a matrix. h0 <= 0 picks |t1 - t0| / 100.
using MatrixRhs = std::function<ComplexMatrix(double, const ComplexMatrix&)>;
ComplexMatrix integrate(const MatrixRhs& f, double t0, double t1, ComplexMatrix y0, const ToleranceSpec& tol,
                        IntegrationStats* stats = nullptr, double h0 = 0.0);

struct LineSegment {
  Complex from;
  Complex to;
};

/// center + radius e^{i theta}, theta running from arg_from to arg_to.
struct ArcSegment {
  Complex center;
  double radius = 1.0;
  double arg_from = 0.0;
  double arg_to = 0.0;
};

using Segment = std::variant<LineSegment, ArcSegment>;

/// Point and velocity at parameter t in [0, 1].
Complex segment_point(const Segment& s, double t);
Complex segment_velocity(const Segment& s, double t);
double segment_length(const Segment& s);
/// Smallest |gamma(t) - p| over the segment.
double segment_distance(const Segment& s, Complex p);

class ComplexPath {
 public:
  ComplexPath() = default;
  /// Consecutive segments must join within 1e-12 * (1 + |joint|).
  explicit ComplexPath(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  Complex start() const;
  Complex end() const;
  double length() const;
  double distance_to(Complex p) const;
  /// Continuous change of arg(gamma - p) along the path.
  double arg_change(Complex p = 0.0) const;

  ComplexPath& then(Segment s);

 private:
  std::vector<Segment> segments_;
};

/// dF/dz = M(z) F along the path, F(start) = f0.
using CoefficientFn = std::function<ComplexMatrix(Complex)>;
ComplexMatrix transport(const CoefficientFn& coeff, const ComplexPath& path, const ComplexMatrix& f0,
                        const ToleranceSpec& tol = {}, IntegrationStats* stats = nullptr);

/// Solution operator of dF/dz = (Lambda + A/z) F along the path: F(end) = U F(start).
/// Throws PathCollision if the path comes within 1e-12 (1 + |start|) of z = 0.
ComplexMatrix transport(const IrregularODE& ode, const ComplexPath& path, const ToleranceSpec& tol = {},
                        IntegrationStats* stats = nullptr);
ComplexMatrix transport(const IrregularODE& ode, const ComplexPath& path, const ComplexMatrix& f0,
                        const ToleranceSpec& tol = {}, IntegrationStats* stats = nullptr);

/// End point of the path on the universal cover of C^*, starting from z0.
CoverPoint continue_point(CoverPoint z0, const ComplexPath& path);

/// One piece of a path in the configuration space: coordinate k follows coords[k].
struct ConfigSegment {
  std::vector<Segment> coords;
};

class ConfigPath {
 public:
  ConfigPath() = default;
  explicit ConfigPath(std::vector<ConfigSegment> segments);

  const std::vector<ConfigSegment>& segments() const { return segments_; }
  int points() const { return segments_.empty() ? 0 : static_cast<int>(segments_.front().coords.size()); }
  std::vector<Complex> start() const;
  std::vector<Complex> end() const;
  /// Smallest pairwise distance, sampled along each segment.
  double min_separation(int samples = 256) const;

 private:
  std::vector<ConfigSegment> segments_;
};

/// Piece where every coordinate moves on a straight line from `from` to `to`.
ConfigSegment config_line(const std::vector<Complex>& from, const std::vector<Complex>& to);

enum class SwapStyle {
  /// Slide z_{i+1} to z_i + g0, turn the pair by pi about its midpoint, slide z_i out.
  Shrunk,
  /// Turn z_i, z_{i+1} by pi about their midpoint.
  Direct,
};

/// Path exchanging z_i and z_{i+1} (1-based i) counterclockwise, z_{i+1}
/// passing above z_i. Ends at Z with entries i, i+1 swapped.
ConfigPath swap_path(const std::vector<Complex>& z, int i, double g0 = 1.0, SwapStyle style = SwapStyle::Shrunk);

/// Solution operator of  kappa dF = sum_i (u^(i) + sum_{j != i} Omega_ij/(z_i - z_j)) F dz_i
/// along the path. Throws PathCollision if two points come within
/// 1e-6 * scale, scale = max(1, max|z_i|).
ComplexMatrix dkz_holonomy(int m, std::span<const Complex> u, Complex kappa, const ConfigPath& path,
                           const ToleranceSpec& tol = {}, IntegrationStats* stats = nullptr);

}  // namespace dkz
