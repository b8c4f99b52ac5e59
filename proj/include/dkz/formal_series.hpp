#pragma once

// Formal solutions  F(z) = H(z) z^[A] e^{z Lambda},  H = 1 + H_1/z + H_2/z^2 + ...
// of the rank-one irregular system  dF/dz = (Lambda + A/z) F.

#include <optional>
#include <span>
#include <vector>

#include "dkz/tensor.hpp"

namespace dkz {

inline constexpr int kDefaultSeriesOrder = 64;

/// Where an ODE came from when it was built from the dKZ equations.
/// n == 2 with empty xi is the single-variable reduction in z1 - z2; otherwise
/// it is the pulled-back system at the parameter point xi.
struct DkzOrigin {
  int m = 2;
  int n = 2;
  std::vector<Complex> u;
  Complex kappa{1.0, 0.0};
  std::vector<double> xi;

  bool is_dkz2() const { return n == 2 && xi.empty(); }
};

/// dF/dz = (Lambda + A/z) F with Lambda diagonal. Indices are grouped into
/// blocks of equal Lambda eigenvalue.
class IrregularODE {
 public:
  /// Blocks are detected with tolerance block_tol * max(1, max|lambda|).
  IrregularODE(ComplexVector lambda, ComplexMatrix a, double block_tol = 1e-12);
  /// Explicit block partition. Throws SingularLambdaError if two blocks share
  /// an eigenvalue, ValidationError if a block is not constant.
  IrregularODE(ComplexVector lambda, ComplexMatrix a, std::vector<std::vector<Eigen::Index>> blocks,
               double block_tol = 1e-12);

  Eigen::Index dim() const { return lambda_.size(); }
  const ComplexVector& lambda() const { return lambda_; }
  ComplexMatrix Lambda() const { return lambda_.asDiagonal(); }
  const ComplexMatrix& A() const { return a_; }
  const std::vector<std::vector<Eigen::Index>>& blocks() const { return blocks_; }
  /// Block id of every index.
  const std::vector<int>& block_id() const { return block_id_; }
  bool same_block(Eigen::Index a, Eigen::Index b) const { return block_id_[a] == block_id_[b]; }
  /// Smallest |lambda_a - lambda_b| over pairs in different blocks (inf if one block).
  double min_gap() const;
  double max_gap() const;

  std::optional<DkzOrigin> origin;

 private:
  void index_blocks();

  ComplexVector lambda_;
  ComplexMatrix a_;
  std::vector<std::vector<Eigen::Index>> blocks_;
  std::vector<int> block_id_;
};

/// kappa dY/dz = (u^(1) + Omega/z) Y on V (x) V, i.e. Lambda = u^(1)/kappa, A = Omega/kappa.
IrregularODE dkz2_ode(int m, std::span<const Complex> u, Complex kappa);

/// The z-equation of the dKZ_n system pulled back along (z, xi) -> z xi:
/// Lambda = (1/kappa) sum_i xi_i u^(i), A = (1/kappa) sum_{i<j} Omega_ij.
IrregularODE pulled_back_ode(int m, std::span<const Complex> u, Complex kappa, std::span<const double> xi);

/// Entries of A on pairs (a, b) with lambda_a == lambda_b; zero elsewhere.
ComplexMatrix project_centralizer(const ComplexMatrix& a, const IrregularODE& ode);
ComplexMatrix project_centralizer(const ComplexMatrix& a, const ComplexVector& lambda, double block_tol = 1e-12);

/// A point on the universal cover of C^*: modulus and a definite argument.
/// The argument selects the branch of log z used for z^[A].
struct CoverPoint {
  double modulus = 1.0;
  double arg = 0.0;

  Complex value() const { return std::polar(modulus, arg); }
  Complex log() const { return {std::log(modulus), arg}; }
  static CoverPoint principal(Complex z) { return {std::abs(z), std::arg(z)}; }
};

class FormalSolution {
 public:
  FormalSolution(IrregularODE ode, std::vector<ComplexMatrix> coeffs, ComplexMatrix exponent);

  const IrregularODE& ode() const { return ode_; }
  /// H_k for k = 0..order(); H_0 is the identity.
  const ComplexMatrix& coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  /// [A], the projection of A to the centralizer of Lambda.
  const ComplexMatrix& exponent() const { return exponent_; }
  bool exponent_is_diagonal() const { return exponent_diagonal_; }

  /// z^[A] on the branch selected by z.arg.
  ComplexMatrix power(CoverPoint z) const;

 private:
  IrregularODE ode_;
  std::vector<ComplexMatrix> coeffs_;
  ComplexMatrix exponent_;
  bool exponent_diagonal_;
};

/// H_1..H_N from  [Lambda, H_{k+1}] = H_k [A] - A H_k - k H_k, with the block
/// diagonal part of H_{k+1} fixed by the next order's solvability condition.
/// Throws ResonanceError if that condition cannot be met.
FormalSolution formal_series(const IrregularODE& ode, int order = kDefaultSeriesOrder);

/// (sum_{j<=order} H_j z^{-j}) z^[A] e^{z Lambda}.
ComplexMatrix evaluate_truncated(const FormalSolution& fs, CoverPoint z, int order);

/// ||F' - (Lambda + A/z) F|| / ||F|| for the truncation F of the given order.
/// The defect is assembled coefficient-wise so it carries no cancellation
/// between O(1) terms.
double substitution_residual(const FormalSolution& fs, CoverPoint z, int order);

/// ||H_k|| |z|^{-k}.
double series_term(const FormalSolution& fs, double abs_z, int k);

/// The k <= fs.order() minimizing ||H_k|| |z|^{-k} (terms that vanish
/// identically are skipped; 0 if all of them vanish). Throws
/// MatchRadiusTooSmall if the terms grow from the first one on.
int optimal_truncation(const FormalSolution& fs, double abs_z);
int optimal_truncation(const IrregularODE& ode, Complex z, int max_order = kDefaultSeriesOrder);

}  // namespace dkz
