#include <doctest.h>

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "dkz/integrator.hpp"

using namespace dkz;

namespace {

constexpr double kPi = std::numbers::pi;

ComplexMatrix sample_matrix() {
  ComplexMatrix a(2, 2);
  a << 0.3, 0.2, Complex(0.1, 0.05), -0.4;
  return a;
}

}  // namespace

TEST_CASE("constant coefficients along a line") {
  const ComplexMatrix m = sample_matrix();
  const Complex l(2.0, -1.0);
  const ComplexMatrix f0 = ComplexMatrix::Identity(2, 2) * 2.0;
  const ComplexMatrix f = transport([&](Complex) -> ComplexMatrix { return m; }, ComplexPath({LineSegment{0.0, l}}), f0);
  CHECK(frobenius(f - (l * m).exp() * f0) < 1e-12);
}

TEST_CASE("scalar coefficient on a mixed path") {
  const Complex lam(0.4, 1.1);
  ComplexPath path;
  path.then(LineSegment{1.0, Complex(1, 2)}).then(ArcSegment{0.0, std::abs(Complex(1, 2)), std::arg(Complex(1, 2)), 3.0});
  ComplexMatrix f0(1, 1);
  f0(0, 0) = 1.0;
  const ComplexMatrix f = transport([&](Complex) -> ComplexMatrix { return ComplexMatrix::Constant(1, 1, lam); }, path, f0);
  CHECK(std::abs(f(0, 0) - std::exp(lam * (path.end() - path.start()))) < 1e-12);
}

TEST_CASE("Euler system monodromy") {
  const ComplexMatrix a = sample_matrix();
  const IrregularODE euler(ComplexVector::Zero(2), a);
  const ComplexMatrix m = transport(euler, ComplexPath({ArcSegment{0.0, 1.0, 0.0, 2 * kPi}}));
  CHECK(frobenius(m - (Complex(0, 2 * kPi) * a).exp()) < 1e-11);
}

TEST_CASE("concatenation, inversion and the determinant law") {
  ComplexVector lambda(2);
  lambda << Complex(0, 0.8), Complex(0, -0.8);
  ComplexMatrix a(2, 2);
  a << 0.0, 0.4, 0.4, 0.0;
  const IrregularODE ode(lambda, a);
  const ComplexPath p1({LineSegment{Complex(3, 0), Complex(1, -1)}});
  const ComplexPath p2({LineSegment{Complex(1, -1), Complex(-2, -0.5)}});
  ComplexPath both = p1;
  both.then(p2.segments()[0]);
  const ComplexMatrix u1 = transport(ode, p1);
  const ComplexMatrix u2 = transport(ode, p2);
  CHECK(frobenius(transport(ode, both) - u2 * u1) < 1e-11);
  const ComplexPath back({LineSegment{Complex(1, -1), Complex(3, 0)}});
  CHECK(frobenius(transport(ode, back) * u1 - ComplexMatrix::Identity(2, 2)) < 1e-11);
  // det U = exp(int tr(Lambda + A/z) dz) = exp(tr A log(z1/z0)), tr Lambda = 0.
  CHECK(std::abs(u1.determinant() - std::exp(a.trace() * std::log(Complex(1, -1) / Complex(3, 0)))) < 1e-11);
}

TEST_CASE("tighter tolerance converges on the Euler benchmark") {
  const ComplexMatrix a = sample_matrix();
  const IrregularODE euler(ComplexVector::Zero(2), a);
  const ComplexPath circle({ArcSegment{0.0, 1.0, 0.0, 2 * kPi}});
  const ComplexMatrix exact = (Complex(0, 2 * kPi) * a).exp();
  ToleranceSpec loose;
  loose.rel_tol = 1e-6;
  loose.abs_tol = 1e-9;
  ToleranceSpec tight = loose;
  tight.rel_tol = 0.5e-6;
  tight.abs_tol = 0.5e-9;
  const double e1 = frobenius(transport(euler, circle, loose) - exact);
  const double e2 = frobenius(transport(euler, circle, tight) - exact);
  CHECK(e1 > 0.0);
  CHECK(e2 < e1);
}

TEST_CASE("integrator guards") {
  ToleranceSpec bad;
  bad.rel_tol = 1e-16;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  const IrregularODE euler(ComplexVector::Zero(2), sample_matrix());
  CHECK_THROWS_AS(transport(euler, ComplexPath({LineSegment{-1.0, 1.0}})), PathCollision);
  ToleranceSpec few;
  few.max_steps = 3;
  CHECK_THROWS_AS(transport(euler, ComplexPath({ArcSegment{0.0, 1.0, 0.0, 2 * kPi}}), few), MaxStepsExceeded);
  CHECK_THROWS_AS(ComplexPath({LineSegment{0.0, 1.0}, LineSegment{2.0, 3.0}}), ValidationError);
}

TEST_CASE("argument bookkeeping") {
  const ComplexPath circle({ArcSegment{0.0, 2.0, 0.0, -2 * kPi}});
  CHECK(circle.arg_change() == doctest::Approx(-2 * kPi));
  const ComplexPath off({ArcSegment{Complex(1, 0), 0.5, 0.0, 2 * kPi}});
  CHECK(std::abs(off.arg_change()) < 1e-12);
  const ComplexPath line({LineSegment{Complex(1, -1), Complex(-1, -1)}});
  CHECK(line.arg_change() == doctest::Approx(-kPi / 2));
  const CoverPoint end = continue_point({std::sqrt(2.0), -kPi / 4}, line);
  CHECK(end.arg == doctest::Approx(-3 * kPi / 4));
}

TEST_CASE("dKZ holonomy basics") {
  const std::vector<Complex> u{{0, 1}, {0, -1}};
  const Complex kappa = 2.5;
  SUBCASE("constant path") {
    const std::vector<Complex> z{1.0, 3.0, 4.5};
    const ComplexMatrix h = dkz_holonomy(2, u, kappa, ConfigPath({config_line(z, z)}));
    CHECK(frobenius(h - ComplexMatrix::Identity(8, 8)) < 1e-14);
  }
  SUBCASE("flatness: a contractible loop") {
    const std::vector<Complex> z0{0.0, 2.0, 5.0};
    const std::vector<Complex> z1{0.0, Complex(2, 1), 5.0};
    const std::vector<Complex> z2{Complex(0.5, -0.5), Complex(2, 1), Complex(5, 0.3)};
    const ConfigPath loop({config_line(z0, z1), config_line(z1, z2), config_line(z2, z0)});
    CHECK(frobenius(dkz_holonomy(2, u, kappa, loop) - ComplexMatrix::Identity(8, 8)) < 1e-10);
  }
  SUBCASE("collision guard") {
    const std::vector<Complex> a{0.0, 2.0};
    const std::vector<Complex> b{0.0, 0.0};
    CHECK_THROWS_AS(dkz_holonomy(2, u, kappa, ConfigPath({config_line(a, b)})), PathCollision);
  }
  SUBCASE("swap path ends at the exchanged configuration") {
    const std::vector<Complex> z{1.0, 3.0, 6.0};
    for (auto style : {SwapStyle::Shrunk, SwapStyle::Direct}) {
      const ConfigPath p = swap_path(z, 1, 0.5, style);
      const auto e = p.end();
      CHECK(std::abs(e[0] - 3.0) < 1e-14);
      CHECK(std::abs(e[1] - 1.0) < 1e-14);
      CHECK(std::abs(e[2] - 6.0) < 1e-14);
      // z_2 passes above z_1.
      const auto& turn = p.segments()[style == SwapStyle::Shrunk ? 1 : 0];
      CHECK(segment_point(turn.coords[1], 0.5).imag() > 0.0);
      CHECK(segment_point(turn.coords[0], 0.5).imag() < 0.0);
    }
  }
}

TEST_CASE("two-point holonomy reduces to the single-variable equation") {
  // With w = z1 - z2 the swap is a half turn w -> e^{i pi} w, and the
  // centre of mass contributes exp((z2_end - z2_start)/kappa (u^(1) + u^(2))).
  const std::vector<Complex> u{{0, 1}, {0, -0.5}};
  const Complex kappa = 1.7;
  const std::vector<Complex> z{1.0, 3.0};
  const ConfigPath p = swap_path(z, 1, 1.0, SwapStyle::Direct);
  const ComplexMatrix h = dkz_holonomy(2, u, kappa, p);

  // z_1 - z_2 runs along the half circle of radius 2 from arg pi to arg 2 pi
  // (z_1 below, z_2 above); the centre of mass is fixed.
  const IrregularODE ode = dkz2_ode(2, u, kappa);
  const ComplexMatrix w = transport(ode, ComplexPath({ArcSegment{0.0, 2.0, kPi, 2 * kPi}}));
  const TensorSpace s(2, 2);
  ComplexVector uv(2);
  uv << u[0], u[1];
  const ComplexMatrix usum = embed_single(ComplexMatrix(uv.asDiagonal()), 1, s) + embed_single(ComplexMatrix(uv.asDiagonal()), 2, s);
  // kappa dF = (u1 dz1 + u2 dz2 + Omega dw / w) F, z1 = c + w/2, z2 = c - w/2:
  //   = ((u1 - u2)/2 dw + (u1 + u2) dc + Omega dw / w) F.
  // The single-variable equation in w uses u^(1) dw; the difference is -(u1+u2)/2 dw.
  const Complex dw = Complex(2.0, 0) - Complex(-2.0, 0);
  const ComplexMatrix shift = (-(dw / 2.0) / kappa * usum).exp();
  CHECK(frobenius(h - shift * w) < 1e-10);
}
