#include "oracle/kummer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracle/gamma.hpp"

namespace oracle {

namespace {

constexpr double pi = std::numbers::pi;

cplx connection(cplx b, cplx c) {
  const cplx rho = std::sqrt(b * c);
  return cplx(0.0, 2 * pi) / (gamma(1.0 + rho) * gamma(1.0 - rho));
}

// Formal series with zero diagonal in A: here [A] = 0, so
//   [L, H_{k+1}] = -A H_k - k H_k,  diagonal of H_{k+1} = -(A H_{k+1}^{off})_diag / (k+1).
std::vector<Mat2> series(cplx l1, cplx l2, cplx b, cplx c, int n) {
  Mat2 a;
  a << 0.0, b, c, 0.0;
  std::vector<Mat2> h{Mat2::Identity()};
  for (int k = 0; k < n; ++k) {
    const Mat2 rhs = -a * h[k] - static_cast<double>(k) * h[k];
    Mat2 next = Mat2::Zero();
    next(0, 1) = rhs(0, 1) / (l1 - l2);
    next(1, 0) = rhs(1, 0) / (l2 - l1);
    const Mat2 t = -(a * next);
    next(0, 0) = t(0, 0) / static_cast<double>(k + 1);
    next(1, 1) = t(1, 1) / static_cast<double>(k + 1);
    h.push_back(next);
  }
  return h;
}

Mat2 formal(const std::vector<Mat2>& h, cplx l1, cplx l2, double r, double arg) {
  const cplx z = std::polar(r, arg);
  int best = 1;
  for (int k = 1; k < static_cast<int>(h.size()); ++k)
    if (h[k].norm() * std::pow(r, -k) < h[best].norm() * std::pow(r, -best)) best = k;
  Mat2 s = Mat2::Zero();
  for (int k = 0; k <= best; ++k) s += h[k] * std::pow(z, -k);
  Mat2 e = Mat2::Zero();
  e(0, 0) = std::exp(z * l1);
  e(1, 1) = std::exp(z * l2);
  return s * e;
}

template <class Point, class Velocity>
Mat2 rk4(Mat2 y, const Mat2& lam, const Mat2& a, Point p, Velocity v, double length, double h) {
  const int steps = std::max(1, static_cast<int>(std::ceil(length / h)));
  const double dt = 1.0 / steps;
  auto f = [&](double t, const Mat2& x) -> Mat2 { return v(t) * ((lam + a / p(t)) * x); };
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    const Mat2 k1 = f(t, y);
    const Mat2 k2 = f(t + dt / 2, y + dt / 2 * k1);
    const Mat2 k3 = f(t + dt / 2, y + dt / 2 * k2);
    const Mat2 k4 = f(t + dt, y + dt * k3);
    y += dt / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

Mat2 continue_cw(Mat2 y, const Mat2& lam, const Mat2& a, double r, double r_in, double a0, double a1, double h) {
  const cplx d0 = std::polar(1.0, a0);
  const cplx d1 = std::polar(1.0, a1);
  y = rk4(y, lam, a, [&](double t) { return (r + (r_in - r) * t) * d0; }, [&](double) { return (r_in - r) * d0; },
          r - r_in, h);
  y = rk4(
      y, lam, a, [&](double t) { return std::polar(r_in, a0 + (a1 - a0) * t); },
      [&](double t) { return cplx(0.0, a1 - a0) * std::polar(r_in, a0 + (a1 - a0) * t); }, r_in * std::abs(a1 - a0),
      h);
  return rk4(y, lam, a, [&](double t) { return (r_in + (r - r_in) * t) * d1; },
             [&](double) { return (r - r_in) * d1; }, r - r_in, h);
}

}  // namespace

KummerStokes kummer_stokes(cplx l1, cplx l2, cplx b, cplx c) {
  const double im = (l1 - l2).imag();
  if (im == 0.0) throw std::invalid_argument("kummer_stokes: needs Im(l1 - l2) != 0");
  const cplx k = connection(b, c);
  KummerStokes out{Mat2::Identity(), Mat2::Identity()};
  if (im > 0) {
    out.S_plus(1, 0) = k * c;
    out.S_minus(0, 1) = k * b;
  } else {
    out.S_plus(0, 1) = k * b;
    out.S_minus(1, 0) = k * c;
  }
  return out;
}

KummerStokes direct_stokes_rk4(cplx l1, cplx l2, cplx b, cplx c, double rho, double h) {
  const auto hs = series(l1, l2, b, c, 60);
  Mat2 lam = Mat2::Zero();
  lam(0, 0) = l1;
  lam(1, 1) = l2;
  Mat2 a;
  a << 0.0, b, c, 0.0;
  const double r_in = std::min(1.0, 1.0 / std::abs(l1 - l2));
  const Mat2 y_plus = formal(hs, l1, l2, rho, 0.0);
  const Mat2 y_minus = formal(hs, l1, l2, rho, -pi);
  KummerStokes out;
  out.S_plus = continue_cw(y_plus, lam, a, rho, r_in, 0.0, -pi, h).inverse() * y_minus;
  // [A] = 0, so the formal monodromy is the identity.
  out.S_minus = continue_cw(y_minus, lam, a, rho, r_in, -pi, -2 * pi, h).inverse() * y_plus;
  return out;
}

}  // namespace oracle
