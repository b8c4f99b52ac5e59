#include "dkz/formal_series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace dkz {

namespace {

double lambda_scale(const ComplexVector& lambda) {
  double s = 1.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) s = std::max(s, std::abs(lambda(i)));
  return s;
}

// [Lambda, X] for diagonal Lambda.
ComplexMatrix commutator_with_diag(const ComplexVector& lambda, const ComplexMatrix& x) {
  ComplexMatrix out(x.rows(), x.cols());
  for (Eigen::Index b = 0; b < x.cols(); ++b)
    for (Eigen::Index a = 0; a < x.rows(); ++a) out(a, b) = (lambda(a) - lambda(b)) * x(a, b);
  return out;
}

ComplexMatrix block_part(const ComplexMatrix& x, const IrregularODE& ode) {
  ComplexMatrix out = ComplexMatrix::Zero(x.rows(), x.cols());
  for (const auto& blk : ode.blocks())
    for (auto a : blk)
      for (auto b : blk) out(a, b) = x(a, b);
  return out;
}

bool is_diagonal(const ComplexMatrix& x) {
  for (Eigen::Index b = 0; b < x.cols(); ++b)
    for (Eigen::Index a = 0; a < x.rows(); ++a)
      if (a != b && x(a, b) != Complex(0.0)) return false;
  return true;
}

}  // namespace

IrregularODE::IrregularODE(ComplexVector lambda, ComplexMatrix a, double block_tol)
    : lambda_(std::move(lambda)), a_(std::move(a)) {
  if (a_.rows() != lambda_.size() || a_.cols() != lambda_.size())
    throw DimensionError("IrregularODE: A must be square with the size of Lambda");
  const double tol = block_tol * lambda_scale(lambda_);
  std::vector<bool> used(static_cast<std::size_t>(lambda_.size()), false);
  for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
    if (used[i]) continue;
    std::vector<Eigen::Index> blk{i};
    used[i] = true;
    for (Eigen::Index j = i + 1; j < lambda_.size(); ++j)
      if (!used[j] && std::abs(lambda_(i) - lambda_(j)) <= tol) {
        blk.push_back(j);
        used[j] = true;
      }
    blocks_.push_back(std::move(blk));
  }
  index_blocks();
}

IrregularODE::IrregularODE(ComplexVector lambda, ComplexMatrix a, std::vector<std::vector<Eigen::Index>> blocks,
                           double block_tol)
    : lambda_(std::move(lambda)), a_(std::move(a)), blocks_(std::move(blocks)) {
  if (a_.rows() != lambda_.size() || a_.cols() != lambda_.size())
    throw DimensionError("IrregularODE: A must be square with the size of Lambda");
  index_blocks();
  const double tol = block_tol * lambda_scale(lambda_);
  for (Eigen::Index i = 0; i < dim(); ++i)
    for (Eigen::Index j = 0; j < dim(); ++j) {
      const bool close = std::abs(lambda_(i) - lambda_(j)) <= tol;
      if (same_block(i, j) && !close)
        throw ValidationError("IrregularODE: block with unequal eigenvalues");
      if (!same_block(i, j) && close)
        throw SingularLambdaError("IrregularODE: lambda_" + std::to_string(i) + " - lambda_" + std::to_string(j) +
                                  " vanishes across blocks");
    }
}

void IrregularODE::index_blocks() {
  block_id_.assign(static_cast<std::size_t>(dim()), -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    for (auto i : blocks_[b]) {
      if (i < 0 || i >= dim() || block_id_[i] != -1)
        throw ValidationError("IrregularODE: blocks must partition the index set");
      block_id_[i] = static_cast<int>(b);
    }
  for (int id : block_id_)
    if (id < 0) throw ValidationError("IrregularODE: blocks must partition the index set");
}

double IrregularODE::min_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < dim(); ++i)
    for (Eigen::Index j = i + 1; j < dim(); ++j)
      if (!same_block(i, j)) g = std::min(g, std::abs(lambda_(i) - lambda_(j)));
  return g;
}

double IrregularODE::max_gap() const {
  double g = 0.0;
  for (Eigen::Index i = 0; i < dim(); ++i)
    for (Eigen::Index j = i + 1; j < dim(); ++j) g = std::max(g, std::abs(lambda_(i) - lambda_(j)));
  return g;
}

IrregularODE dkz2_ode(int m, std::span<const Complex> u, Complex kappa) {
  if (static_cast<int>(u.size()) != m) throw DimensionError("dkz2_ode: u must have m entries");
  if (kappa == Complex(0.0)) throw ValidationError("dkz2_ode: kappa must be nonzero");
  const TensorSpace space(m, 2);
  ComplexVector lambda(space.dim());
  for (Eigen::Index r = 0; r < space.dim(); ++r) lambda(r) = u[space.digit(r, 1)] / kappa;
  IrregularODE ode(std::move(lambda), casimir_omega(m) / kappa);
  ode.origin = DkzOrigin{m, 2, {u.begin(), u.end()}, kappa, {}};
  return ode;
}

IrregularODE pulled_back_ode(int m, std::span<const Complex> u, Complex kappa, std::span<const double> xi) {
  if (static_cast<int>(u.size()) != m) throw DimensionError("pulled_back_ode: u must have m entries");
  if (kappa == Complex(0.0)) throw ValidationError("pulled_back_ode: kappa must be nonzero");
  const int n = static_cast<int>(xi.size());
  const TensorSpace space(m, n);
  ComplexVector lambda = ComplexVector::Zero(space.dim());
  for (Eigen::Index r = 0; r < space.dim(); ++r)
    for (int i = 1; i <= n; ++i) lambda(r) += xi[i - 1] * u[space.digit(r, i)];
  lambda /= kappa;
  IrregularODE ode(std::move(lambda), pair_sum(casimir_omega(m), space) / kappa);
  ode.origin = DkzOrigin{m, n, {u.begin(), u.end()}, kappa, {xi.begin(), xi.end()}};
  return ode;
}

ComplexMatrix project_centralizer(const ComplexMatrix& a, const IrregularODE& ode) {
  if (a.rows() != ode.dim() || a.cols() != ode.dim()) throw DimensionError("project_centralizer: size mismatch");
  return block_part(a, ode);
}

ComplexMatrix project_centralizer(const ComplexMatrix& a, const ComplexVector& lambda, double block_tol) {
  return project_centralizer(a, IrregularODE(lambda, a, block_tol));
}

FormalSolution::FormalSolution(IrregularODE ode, std::vector<ComplexMatrix> coeffs, ComplexMatrix exponent)
    : ode_(std::move(ode)),
      coeffs_(std::move(coeffs)),
      exponent_(std::move(exponent)),
      exponent_diagonal_(is_diagonal(exponent_)) {}

ComplexMatrix FormalSolution::power(CoverPoint z) const {
  const Complex logz = z.log();
  if (exponent_diagonal_) {
    ComplexVector d(exponent_.rows());
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = std::exp(exponent_(i, i) * logz);
    return d.asDiagonal();
  }
  ComplexMatrix scaled = exponent_ * logz;
  return scaled.exp();
}

FormalSolution formal_series(const IrregularODE& ode, int order) {
  if (order < 0) throw ValidationError("formal_series: order must be >= 0");
  const Eigen::Index d = ode.dim();
  const ComplexVector& lambda = ode.lambda();
  const ComplexMatrix& a = ode.A();
  const ComplexMatrix exponent = block_part(a, ode);
  const ComplexMatrix a_off = a - exponent;

  std::vector<ComplexMatrix> h;
  h.reserve(static_cast<std::size_t>(order) + 1);
  h.push_back(ComplexMatrix::Identity(d, d));

  for (int k = 0; k < order; ++k) {
    const ComplexMatrix& hk = h.back();
    const ComplexMatrix rhs = hk * exponent - a * hk - static_cast<double>(k) * hk;

    ComplexMatrix next = ComplexMatrix::Zero(d, d);
    for (Eigen::Index b = 0; b < d; ++b)
      for (Eigen::Index r = 0; r < d; ++r)
        if (!ode.same_block(r, b)) next(r, b) = rhs(r, b) / (lambda(r) - lambda(b));

    // Block-diagonal part D of H_{k+1}:
    //   (k+1) D + [A] D - D [A] = -(A_off O_{k+1})  on each block.
    const ComplexMatrix target = -(a_off * next);
    const double shift = static_cast<double>(k + 1);
    for (const auto& blk : ode.blocks()) {
      const auto bs = static_cast<Eigen::Index>(blk.size());
      ComplexMatrix ab(bs, bs), tb(bs, bs);
      for (Eigen::Index p = 0; p < bs; ++p)
        for (Eigen::Index q = 0; q < bs; ++q) {
          ab(p, q) = exponent(blk[p], blk[q]);
          tb(p, q) = target(blk[p], blk[q]);
        }
      const ComplexMatrix id = ComplexMatrix::Identity(bs, bs);
      const ComplexMatrix sys = shift * ComplexMatrix::Identity(bs * bs, bs * bs) +
                                Eigen::kroneckerProduct(id, ab).eval() -
                                Eigen::kroneckerProduct(ab.transpose(), id).eval();
      const ComplexVector rhs_vec = tb.reshaped();
      Eigen::FullPivLU<ComplexMatrix> lu(sys);
      lu.setThreshold(1e-12);
      ComplexVector sol;
      if (lu.isInvertible()) {
        sol = lu.solve(rhs_vec);
      } else {
        sol = sys.completeOrthogonalDecomposition().solve(rhs_vec);
        const double defect = (sys * sol - rhs_vec).norm();
        if (defect > 1e-10 * (1.0 + rhs_vec.norm()))
          throw ResonanceError("formal_series: block solvability fails at order " + std::to_string(k + 1) +
                               " (eigenvalues of [A] differ by " + std::to_string(k + 1) + ")");
      }
      const ComplexMatrix db = sol.reshaped(bs, bs);
      for (Eigen::Index p = 0; p < bs; ++p)
        for (Eigen::Index q = 0; q < bs; ++q) next(blk[p], blk[q]) = db(p, q);
    }
    h.push_back(std::move(next));
  }
  return FormalSolution(ode, std::move(h), exponent);
}

ComplexMatrix evaluate_truncated(const FormalSolution& fs, CoverPoint z, int order) {
  if (z.modulus <= 0.0) throw ValidationError("evaluate_truncated: z must be nonzero");
  if (order < 0 || order > fs.order()) throw ValidationError("evaluate_truncated: order outside 0..N");
  const Complex zv = z.value();
  const Complex zinv = 1.0 / zv;
  const Eigen::Index d = fs.ode().dim();
  // Horner in 1/z.
  ComplexMatrix s = fs.coeff(order);
  for (int j = order - 1; j >= 0; --j) s = (s * zinv + fs.coeff(j)).eval();
  ComplexVector e(d);
  for (Eigen::Index i = 0; i < d; ++i) e(i) = std::exp(zv * fs.ode().lambda()(i));
  return s * fs.power(z) * e.asDiagonal();
}

double substitution_residual(const FormalSolution& fs, CoverPoint z, int order) {
  if (z.modulus <= 0.0) throw ValidationError("substitution_residual: z must be nonzero");
  if (order < 0 || order > fs.order()) throw ValidationError("substitution_residual: order outside 0..N");
  const Complex zv = z.value();
  const Complex zinv = 1.0 / zv;
  const ComplexVector& lambda = fs.ode().lambda();
  const ComplexMatrix& a = fs.ode().A();
  const ComplexMatrix& ea = fs.exponent();
  const Eigen::Index d = fs.ode().dim();

  // F' - (Lambda + A/z) F = (sum_j C_j z^{-(j+1)}) z^[A] e^{z Lambda} with
  // C_j = H_j [A] - A H_j - j H_j - [Lambda, H_{j+1}]  (last term absent at j = order).
  ComplexMatrix defect = ComplexMatrix::Zero(d, d);
  for (int j = order; j >= 0; --j) {
    ComplexMatrix c = fs.coeff(j) * ea - a * fs.coeff(j) - static_cast<double>(j) * fs.coeff(j);
    if (j < order) c -= commutator_with_diag(lambda, fs.coeff(j + 1));
    defect = ((defect + c) * zinv).eval();
  }
  ComplexVector e(d);
  for (Eigen::Index i = 0; i < d; ++i) e(i) = std::exp(zv * lambda(i));
  const ComplexMatrix tail = fs.power(z) * e.asDiagonal();
  const ComplexMatrix f = evaluate_truncated(fs, z, order);
  return (defect * tail).norm() / f.norm();
}

double series_term(const FormalSolution& fs, double abs_z, int k) {
  return fs.coeff(k).norm() * std::pow(abs_z, -static_cast<double>(k));
}

int optimal_truncation(const FormalSolution& fs, double abs_z) {
  if (abs_z <= 0.0) throw ValidationError("optimal_truncation: |z| must be positive");
  int best = 0;
  double best_term = std::numeric_limits<double>::infinity();
  int first = 0;
  double first_term = 0.0;
  int second = 0;
  double second_term = 0.0;
  for (int k = 1; k <= fs.order(); ++k) {
    const double t = series_term(fs, abs_z, k);
    if (t == 0.0) continue;
    if (first == 0) {
      first = k;
      first_term = t;
    } else if (second == 0) {
      second = k;
      second_term = t;
    }
    if (t < best_term) {
      best_term = t;
      best = k;
    }
  }
  if (first == 0) return 0;
  if (best == first && second != 0 && second_term > first_term)
    throw MatchRadiusTooSmall("optimal_truncation: series terms grow from the first term at |z| = " +
                              std::to_string(abs_z));
  return best;
}

int optimal_truncation(const IrregularODE& ode, Complex z, int max_order) {
  return optimal_truncation(formal_series(ode, max_order), std::abs(z));
}

}  // namespace dkz
