#pragma once

// Braid group representations b_i -> T_i R^{i,i+1} on V^{(x)n}, the
// Yang-Baxter and braid relation residuals, and the two numerical checks
// tying them to the dKZ connection: holonomy factorization at a far-apart
// base point and constancy of Stokes data along the pulled-back family.

#include <optional>
#include <string>
#include <vector>

#include "dkz/integrator.hpp"
#include "dkz/stokes.hpp"
#include "dkz/tensor.hpp"

namespace dkz {

/// Word in b_1..b_{n-1}: letter k > 0 is b_k, k < 0 is b_{|k|}^{-1}.
struct BraidWord {
  int n = 2;
  std::vector<int> letters;

  void validate() const;
  BraidWord inverse() const;
  /// Space separated letters, e.g. "1 -2 1".
  static BraidWord parse(int n, const std::string& text);
};

class BraidRepresentation {
 public:
  /// Throws DimensionError unless R is m^2 x m^2, ValidationError if R is singular.
  BraidRepresentation(ComplexMatrix r, TensorSpace space);

  const TensorSpace& space() const { return space_; }
  const ComplexMatrix& R() const { return r_; }
  /// rho(b_i) and rho(b_i)^{-1}, i = 1..n-1.
  const ComplexMatrix& generator(int i) const;
  const ComplexMatrix& generator_inverse(int i) const;

 private:
  ComplexMatrix r_;
  TensorSpace space_;
  std::vector<ComplexMatrix> gens_;
  std::vector<ComplexMatrix> inverses_;
};

BraidRepresentation build_representation(const ComplexMatrix& r, const TensorSpace& space);

/// Ordered product rho(w_1) rho(w_2) ... ; identity for the empty word.
ComplexMatrix evaluate_word(const BraidRepresentation& rep, const BraidWord& w);

/// ||R12 R13 R23 - R23 R13 R12|| / ||R||^3 on V^{(x)3}.
double ybe_residual(const ComplexMatrix& r, int m);

struct BraidResiduals {
  /// max over |i - j| > 1 of ||b_i b_j - b_j b_i|| / (||b_i|| ||b_j||); empty if n < 4.
  std::optional<double> far_commutation;
  /// max over i of ||b_i b_{i+1} b_i - b_{i+1} b_i b_{i+1}|| / (||b_i||^2 ||b_{i+1}||).
  double braid = 0.0;
};

/// Throws ValidationError if n < 3.
BraidResiduals braid_relation_residuals(const BraidRepresentation& rep);

/// Flat section of the dKZ_n system in the zone where z_1 < ... < z_n are far
/// apart: H(1) e^{Lambda} prod_{i<j} (z_j - z_i)^{[Omega_ij]/kappa}, with H the
/// optimally truncated formal series of the pulled-back system at xi = z.
ComplexMatrix zone_solution(int m, std::span<const Complex> u, Complex kappa, std::span<const double> z,
                            int max_order = kDefaultSeriesOrder);

struct HolonomyOptions {
  double g0 = 1.0;
  SwapStyle style = SwapStyle::Shrunk;
  int max_order = kDefaultSeriesOrder;
  ToleranceSpec tol;
  /// Base point z_k = positions[k] * s; empty means positions k = 1..n.
  std::vector<double> positions;
};

struct HolonomyPoint {
  double s = 0.0;
  double residual = 0.0;
};

struct HolonomyReport {
  ComplexMatrix R;
  std::vector<HolonomyPoint> points;
  /// Smallest residual(s_k) / residual(s_{k+1}) along the scan.
  double min_improvement = 0.0;
};

/// ||G^{-1} T_i M_i G - T_i R^{i,i+1}|| with M_i the holonomy along the swap
/// path of z_i, z_{i+1} and G the zone solution at the base point.
double holonomy_factorization_residual(int m, std::span<const Complex> u, Complex kappa, int n, int i, double s,
                                       const ComplexMatrix& r, const HolonomyOptions& opt = {});

/// The residual above on a scan of separations, with R taken from the dKZ_2 Stokes data.
HolonomyReport holonomy_factorization_test(int m, std::span<const Complex> u, Complex kappa, int n, int i,
                                           const std::vector<double>& s_values, const HolonomyOptions& opt = {},
                                           const StokesOptions& stokes = {});

/// xi_1 < ... < xi_{k+1} < xi_k < ... < xi_n (plain increasing order for k = 0).
bool in_chamber(std::span<const double> xi, int k);

struct IsomonodromyReport {
  std::vector<std::vector<double>> grid;
  std::vector<StokesData> stokes;
  /// max over pairs of grid points of max(||S_+ - S_+'||, ||S_- - S_-'||).
  double raw_deviation = 0.0;
  /// The same after S -> C^{-1} S C, C = prod_{i<j} |xi_i - xi_j|^{[Omega_ij]/kappa}.
  double normalized_deviation = 0.0;
};

/// Stokes data of the pulled-back system over a grid in chamber k.
/// Throws ValidationError if a grid point lies outside the chamber.
IsomonodromyReport isomonodromy_scan(int m, std::span<const Complex> u, Complex kappa, int k,
                                     const std::vector<std::vector<double>>& grid, const StokesOptions& opt = {});

}  // namespace dkz
