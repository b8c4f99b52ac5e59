#include "dkz/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dkz {

namespace {

constexpr double kPi = std::numbers::pi;

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561, kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
// b - b*, the embedded error weights.
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920, kE5 = -17253.0 / 339200,
                 kE6 = 22.0 / 525, kE7 = -1.0 / 40;

double error_norm(const ComplexMatrix& err, const ComplexMatrix& y0, const ComplexMatrix& y1,
                  const ToleranceSpec& tol) {
  double worst = 0.0;
  for (Eigen::Index c = 0; c < err.cols(); ++c)
    for (Eigen::Index r = 0; r < err.rows(); ++r) {
      const double sc = tol.abs_tol + tol.rel_tol * std::max(std::abs(y0(r, c)), std::abs(y1(r, c)));
      worst = std::max(worst, std::abs(err(r, c)) / sc);
    }
  return worst;
}

}  // namespace

void ToleranceSpec::validate() const {
  if (!(rel_tol >= 1e-14 && rel_tol <= 1e-2))
    throw ValidationError("rel_tol must lie in [1e-14, 1e-2], got " + std::to_string(rel_tol));
  if (!(abs_tol >= 0.0)) throw ValidationError("abs_tol must be >= 0");
  if (max_steps <= 0) throw ValidationError("max_steps must be positive");
}

ComplexMatrix integrate(const MatrixRhs& f, double t0, double t1, ComplexMatrix y, const ToleranceSpec& tol,
                        IntegrationStats* stats, double h0) {
  tol.validate();
  const double span = t1 - t0;
  if (span == 0.0) return y;
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = h0 > 0.0 ? h0 : std::abs(span) / 100.0;
  double t = t0;
  double err_prev = 1e-4;
  long steps = 0;
  long rejected = 0;

  ComplexMatrix k1 = f(t, y);
  while (dir * (t1 - t) > 0.0) {
    if (steps + rejected >= tol.max_steps)
      throw MaxStepsExceeded("integrate: exceeded " + std::to_string(tol.max_steps) + " steps");
    if (h < 1e-14 * std::max(1.0, std::abs(t)))
      throw StepUnderflow("integrate: step size underflow at t = " + std::to_string(t));
    const bool last = h >= dir * (t1 - t);
    const double hs = last ? dir * (t1 - t) : dir * h;

    const ComplexMatrix k2 = f(t + kC[1] * hs, y + hs * (kA21 * k1));
    const ComplexMatrix k3 = f(t + kC[2] * hs, y + hs * (kA31 * k1 + kA32 * k2));
    const ComplexMatrix k4 = f(t + kC[3] * hs, y + hs * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    const ComplexMatrix k5 = f(t + kC[4] * hs, y + hs * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    const ComplexMatrix k6 =
        f(t + kC[5] * hs, y + hs * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    ComplexMatrix y1 = y + hs * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const double t_new = last ? t1 : t + hs;
    ComplexMatrix k7 = f(t_new, y1);
    const ComplexMatrix err = hs * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

    const double e = error_norm(err, y, y1, tol);
    if (!std::isfinite(e)) {
      ++rejected;
      h *= 0.2;
      continue;
    }
    if (e <= 1.0) {
      y = std::move(y1);
      k1 = std::move(k7);
      t = t_new;
      ++steps;
      // PI control (Gustafsson), exponents 0.7/5 and 0.4/5.
      const double ee = std::max(e, 1e-10);
      double fac = 0.9 * std::pow(ee, -0.14) * std::pow(err_prev, 0.08);
      fac = std::clamp(fac, 0.2, 5.0);
      err_prev = ee;
      h = std::abs(hs) * fac;
    } else {
      ++rejected;
      h = std::abs(hs) * std::max(0.2, 0.9 * std::pow(e, -0.2));
    }
  }
  if (stats) {
    stats->steps += steps;
    stats->rejected += rejected;
  }
  return y;
}

Complex segment_point(const Segment& s, double t) {
  if (const auto* l = std::get_if<LineSegment>(&s)) return l->from + t * (l->to - l->from);
  const auto& a = std::get<ArcSegment>(s);
  return a.center + std::polar(a.radius, a.arg_from + t * (a.arg_to - a.arg_from));
}

Complex segment_velocity(const Segment& s, double t) {
  if (const auto* l = std::get_if<LineSegment>(&s)) return l->to - l->from;
  const auto& a = std::get<ArcSegment>(s);
  const double dth = a.arg_to - a.arg_from;
  return Complex(0.0, dth) * std::polar(a.radius, a.arg_from + t * dth);
}

double segment_length(const Segment& s) {
  if (const auto* l = std::get_if<LineSegment>(&s)) return std::abs(l->to - l->from);
  const auto& a = std::get<ArcSegment>(s);
  return a.radius * std::abs(a.arg_to - a.arg_from);
}

double segment_distance(const Segment& s, Complex p) {
  if (const auto* l = std::get_if<LineSegment>(&s)) {
    const Complex d = l->to - l->from;
    const double dd = std::norm(d);
    if (dd == 0.0) return std::abs(p - l->from);
    const double t = std::clamp(std::real(std::conj(d) * (p - l->from)) / dd, 0.0, 1.0);
    return std::abs(p - (l->from + t * d));
  }
  const auto& a = std::get<ArcSegment>(s);
  const double rho = std::abs(p - a.center);
  double best = std::min(std::abs(p - segment_point(s, 0.0)), std::abs(p - segment_point(s, 1.0)));
  if (rho > 0.0) {
    // The nearest point of the full circle is at arg(p - center) (mod 2 pi).
    const double phi = std::arg(p - a.center);
    const double lo = std::min(a.arg_from, a.arg_to);
    const double hi = std::max(a.arg_from, a.arg_to);
    const double k = std::ceil((lo - phi) / (2 * kPi));
    if (phi + 2 * kPi * k <= hi) best = std::min(best, std::abs(rho - a.radius));
  } else {
    best = a.radius;
  }
  return best;
}

ComplexPath::ComplexPath(std::vector<Segment> segments) {
  for (auto& s : segments) then(std::move(s));
}

ComplexPath& ComplexPath::then(Segment s) {
  if (const auto* a = std::get_if<ArcSegment>(&s); a && !(a->radius > 0.0))
    throw ValidationError("ComplexPath: arc radius must be positive");
  if (!segments_.empty()) {
    const Complex joint = end();
    const Complex next = segment_point(s, 0.0);
    if (std::abs(joint - next) > 1e-12 * (1.0 + std::abs(joint)))
      throw ValidationError("ComplexPath: segments do not join");
  }
  segments_.push_back(std::move(s));
  return *this;
}

Complex ComplexPath::start() const {
  if (segments_.empty()) throw ValidationError("ComplexPath: empty path");
  return segment_point(segments_.front(), 0.0);
}

Complex ComplexPath::end() const {
  if (segments_.empty()) throw ValidationError("ComplexPath: empty path");
  return segment_point(segments_.back(), 1.0);
}

double ComplexPath::length() const {
  double l = 0.0;
  for (const auto& s : segments_) l += segment_length(s);
  return l;
}

double ComplexPath::distance_to(Complex p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& s : segments_) d = std::min(d, segment_distance(s, p));
  return d;
}

double ComplexPath::arg_change(Complex p) const {
  if (distance_to(p) == 0.0) throw PathCollision("ComplexPath: path passes through the reference point");
  double total = 0.0;
  for (const auto& s : segments_) {
    if (const auto* a = std::get_if<ArcSegment>(&s); a && a->center == p) {
      total += a->arg_to - a->arg_from;
      continue;
    }
    // Sub-steps short enough that each turns by less than pi.
    const double len = segment_length(s);
    const double dist = std::max(segment_distance(s, p), 1e-300);
    const int pieces = std::max(8, static_cast<int>(std::ceil(4.0 * len / dist)));
    Complex prev = segment_point(s, 0.0) - p;
    for (int k = 1; k <= pieces; ++k) {
      const Complex cur = segment_point(s, static_cast<double>(k) / pieces) - p;
      total += std::arg(cur / prev);
      prev = cur;
    }
  }
  return total;
}

ComplexMatrix transport(const CoefficientFn& coeff, const ComplexPath& path, const ComplexMatrix& f0,
                        const ToleranceSpec& tol, IntegrationStats* stats) {
  ComplexMatrix y = f0;
  for (const auto& seg : path.segments()) {
    if (segment_length(seg) == 0.0) continue;
    auto rhs = [&](double t, const ComplexMatrix& f) -> ComplexMatrix {
      return segment_velocity(seg, t) * (coeff(segment_point(seg, t)) * f);
    };
    y = integrate(rhs, 0.0, 1.0, std::move(y), tol, stats);
  }
  return y;
}

ComplexMatrix transport(const IrregularODE& ode, const ComplexPath& path, const ToleranceSpec& tol,
                        IntegrationStats* stats) {
  return transport(ode, path, ComplexMatrix::Identity(ode.dim(), ode.dim()), tol, stats);
}

ComplexMatrix transport(const IrregularODE& ode, const ComplexPath& path, const ComplexMatrix& f0,
                        const ToleranceSpec& tol, IntegrationStats* stats) {
  if (f0.rows() != ode.dim()) throw DimensionError("transport: initial value has wrong row count");
  if (path.segments().empty()) return f0;
  if (path.distance_to(0.0) <= 1e-12 * (1.0 + std::abs(path.start())))
    throw PathCollision("transport: path meets the singular point z = 0");
  const ComplexVector& lambda = ode.lambda();
  const ComplexMatrix& a = ode.A();
  ComplexMatrix y = f0;
  for (const auto& seg : path.segments()) {
    if (segment_length(seg) == 0.0) continue;
    auto rhs = [&](double t, const ComplexMatrix& f) -> ComplexMatrix {
      const Complex z = segment_point(seg, t);
      const Complex dz = segment_velocity(seg, t);
      return dz * (lambda.asDiagonal() * f + (a * f) / z);
    };
    y = integrate(rhs, 0.0, 1.0, std::move(y), tol, stats);
  }
  return y;
}

CoverPoint continue_point(CoverPoint z0, const ComplexPath& path) {
  if (path.segments().empty()) return z0;
  if (std::abs(path.start() - z0.value()) > 1e-10 * (1.0 + z0.modulus))
    throw ValidationError("continue_point: path does not start at the given point");
  const Complex e = path.end();
  return {std::abs(e), z0.arg + path.arg_change(0.0)};
}

ConfigPath::ConfigPath(std::vector<ConfigSegment> segments) : segments_(std::move(segments)) {
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    if (segments_[k].coords.size() != segments_.front().coords.size() || segments_[k].coords.empty())
      throw ValidationError("ConfigPath: every segment must move the same number of points");
    if (k == 0) continue;
    for (std::size_t c = 0; c < segments_[k].coords.size(); ++c) {
      const Complex a = segment_point(segments_[k - 1].coords[c], 1.0);
      const Complex b = segment_point(segments_[k].coords[c], 0.0);
      if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) throw ValidationError("ConfigPath: segments do not join");
    }
  }
}

std::vector<Complex> ConfigPath::start() const {
  std::vector<Complex> out;
  for (const auto& s : segments_.front().coords) out.push_back(segment_point(s, 0.0));
  return out;
}

std::vector<Complex> ConfigPath::end() const {
  std::vector<Complex> out;
  for (const auto& s : segments_.back().coords) out.push_back(segment_point(s, 1.0));
  return out;
}

double ConfigPath::min_separation(int samples) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : segments_)
    for (int k = 0; k <= samples; ++k) {
      const double t = static_cast<double>(k) / samples;
      for (std::size_t i = 0; i < seg.coords.size(); ++i)
        for (std::size_t j = i + 1; j < seg.coords.size(); ++j)
          best = std::min(best, std::abs(segment_point(seg.coords[i], t) - segment_point(seg.coords[j], t)));
    }
  return best;
}

ConfigSegment config_line(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  if (from.size() != to.size()) throw DimensionError("config_line: size mismatch");
  ConfigSegment s;
  for (std::size_t k = 0; k < from.size(); ++k) s.coords.emplace_back(LineSegment{from[k], to[k]});
  return s;
}

ConfigPath swap_path(const std::vector<Complex>& z, int i, double g0, SwapStyle style) {
  const int n = static_cast<int>(z.size());
  if (i < 1 || i >= n) throw ValidationError("swap_path: index " + std::to_string(i) + " outside 1..n-1");
  if (!(g0 > 0.0)) throw ValidationError("swap_path: g0 must be positive");
  const std::size_t a = static_cast<std::size_t>(i - 1);
  const std::size_t b = a + 1;
  const Complex p = z[a];
  const Complex q = z[b];
  const double dist = std::abs(q - p);
  if (dist == 0.0) throw PathCollision("swap_path: points coincide");
  const Complex dir = (q - p) / dist;
  const double phi = std::arg(dir);

  auto rotation = [&](Complex c, double r) {
    ConfigSegment s;
    for (std::size_t k = 0; k < z.size(); ++k) s.coords.emplace_back(LineSegment{z[k], z[k]});
    s.coords[a] = ArcSegment{c, r, phi + kPi, phi + 2 * kPi};
    s.coords[b] = ArcSegment{c, r, phi, phi + kPi};
    return s;
  };

  if (style == SwapStyle::Direct || g0 >= dist) return ConfigPath({rotation(0.5 * (p + q), 0.5 * dist)});

  std::vector<Complex> w = z;
  w[b] = p + g0 * dir;
  std::vector<ConfigSegment> segs;
  segs.push_back(config_line(z, w));
  ConfigSegment turn = rotation(p + 0.5 * g0 * dir, 0.5 * g0);
  for (std::size_t k = 0; k < z.size(); ++k)
    if (k != a && k != b) turn.coords[k] = LineSegment{z[k], z[k]};
  segs.push_back(turn);
  std::vector<Complex> v = z;
  v[a] = p + g0 * dir;
  v[b] = p;
  std::vector<Complex> e = z;
  e[a] = q;
  e[b] = p;
  segs.push_back(config_line(v, e));
  return ConfigPath(std::move(segs));
}

ComplexMatrix dkz_holonomy(int m, std::span<const Complex> u, Complex kappa, const ConfigPath& path,
                           const ToleranceSpec& tol, IntegrationStats* stats) {
  const int n = path.points();
  if (n < 2) throw ValidationError("dkz_holonomy: need at least two points");
  if (static_cast<int>(u.size()) != m) throw DimensionError("dkz_holonomy: u must have m entries");
  const TensorSpace space(m, n);

  double scale = 1.0;
  for (const auto& seg : path.segments())
    for (const auto& c : seg.coords) scale = std::max({scale, std::abs(segment_point(c, 0.0)), std::abs(segment_point(c, 1.0))});
  if (path.min_separation() < 1e-6 * scale) throw PathCollision("dkz_holonomy: two points collide along the path");

  ComplexVector uvec(m);
  for (int k = 0; k < m; ++k) uvec(k) = u[k];
  const ComplexMatrix udiag = uvec.asDiagonal();
  std::vector<ComplexMatrix> us;
  for (int k = 1; k <= n; ++k) us.push_back(embed_single(udiag, k, space));
  std::vector<std::pair<std::pair<int, int>, ComplexMatrix>> omegas;
  const ComplexMatrix omega = casimir_omega(m);
  for (int k = 1; k <= n; ++k)
    for (int l = k + 1; l <= n; ++l) omegas.push_back({{k - 1, l - 1}, embed_pair(omega, {k, l}, space)});

  const Complex inv_kappa = 1.0 / kappa;
  ComplexMatrix y = ComplexMatrix::Identity(space.dim(), space.dim());
  for (const auto& seg : path.segments()) {
    auto rhs = [&](double t, const ComplexMatrix& f) -> ComplexMatrix {
      std::vector<Complex> zt(n), dz(n);
      for (int k = 0; k < n; ++k) {
        zt[k] = segment_point(seg.coords[k], t);
        dz[k] = segment_velocity(seg.coords[k], t);
      }
      ComplexMatrix mat = ComplexMatrix::Zero(space.dim(), space.dim());
      for (int k = 0; k < n; ++k)
        if (dz[k] != Complex(0.0)) mat += dz[k] * us[k];
      for (const auto& [ij, om] : omegas) {
        const Complex w = dz[ij.first] - dz[ij.second];
        if (w != Complex(0.0)) mat += (w / (zt[ij.first] - zt[ij.second])) * om;
      }
      return inv_kappa * (mat * f);
    };
    y = integrate(rhs, 0.0, 1.0, std::move(y), tol, stats);
  }
  return y;
}

}  // namespace dkz
