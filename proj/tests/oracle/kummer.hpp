#pragma once

// Stokes matrices of the rank-two system
//   dF/dz = (diag(l1, l2) + [[0, b], [c, 0]] / z) F,
// which reduces to Kummer's equation. With rho^2 = b c the connection
// coefficient is 2 pi i / (Gamma(1 + rho) Gamma(1 - rho)).
//
// Orientation matches the library: Y_+ on the right half plane, Y_- on the
// left half plane reached clockwise (arg z = -pi).

#include <Eigen/Dense>
#include <complex>

namespace oracle {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;

struct KummerStokes {
  Mat2 S_plus;
  Mat2 S_minus;
};

/// Requires Im(l1 - l2) != 0.
KummerStokes kummer_stokes(cplx l1, cplx l2, cplx b, cplx c);

/// Independent direct computation for the same system: the optimally
/// truncated formal series (its own recursion) plus fixed-step RK4 along
/// radial/arc paths. Used once to validate kummer_stokes.
KummerStokes direct_stokes_rk4(cplx l1, cplx l2, cplx b, cplx c, double rho = 30.0, double h = 2e-4);

}  // namespace oracle
