#include "dkz/braid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace dkz {

namespace {

// prod_{i<j, a_i == a_j} w_ij^{1/kappa}, w_ij = |x_i - x_j|: the diagonal of
// prod_{i<j} w_ij^{[Omega_ij]/kappa}.
ComplexVector pair_power_diagonal(const TensorSpace& space, std::span<const double> x, Complex kappa) {
  ComplexVector out(space.dim());
  const Complex inv = 1.0 / kappa;
  for (Eigen::Index r = 0; r < space.dim(); ++r) {
    Complex log_sum = 0.0;
    for (int i = 1; i <= space.n(); ++i)
      for (int j = i + 1; j <= space.n(); ++j)
        if (space.digit(r, i) == space.digit(r, j)) log_sum += std::log(std::abs(x[j - 1] - x[i - 1])) * inv;
    out(r) = std::exp(log_sum);
  }
  return out;
}

double pair_deviation(const StokesData& a, const StokesData& b, const ComplexVector* ca, const ComplexVector* cb) {
  auto conj = [](const ComplexMatrix& s, const ComplexVector* c) -> ComplexMatrix {
    if (!c) return s;
    return c->cwiseInverse().asDiagonal() * s * c->asDiagonal();
  };
  const double p = frobenius(conj(a.S_plus, ca) - conj(b.S_plus, cb));
  const double m = frobenius(conj(a.S_minus, ca) - conj(b.S_minus, cb));
  return std::max(p, m);
}

}  // namespace

void BraidWord::validate() const {
  if (n < 1) throw ValidationError("BraidWord: n must be >= 1");
  for (int l : letters)
    if (l == 0 || std::abs(l) > n - 1)
      throw ValidationError("BraidWord: letter " + std::to_string(l) + " outside +-1..+-" + std::to_string(n - 1));
}

BraidWord BraidWord::inverse() const {
  BraidWord w{n, {}};
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) w.letters.push_back(-*it);
  return w;
}

BraidWord BraidWord::parse(int n, const std::string& text) {
  BraidWord w{n, {}};
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw ValidationError("BraidWord: cannot parse letter '" + tok + "'");
    w.letters.push_back(v);
  }
  w.validate();
  return w;
}

BraidRepresentation::BraidRepresentation(ComplexMatrix r, TensorSpace space) : r_(std::move(r)), space_(space) {
  const Eigen::Index mm = static_cast<Eigen::Index>(space_.m()) * space_.m();
  if (r_.rows() != mm || r_.cols() != mm) throw DimensionError("BraidRepresentation: R must be m^2 x m^2");
  Eigen::FullPivLU<ComplexMatrix> lu(r_);
  if (!lu.isInvertible()) throw ValidationError("BraidRepresentation: R is singular");
  const ComplexMatrix r_inv = lu.inverse();
  for (int i = 1; i < space_.n(); ++i) {
    const ComplexMatrix t = permutation_T(i, space_);
    gens_.push_back(t * embed_pair(r_, {i, i + 1}, space_));
    // (T R)^{-1} = R^{-1} T, T an involution.
    inverses_.push_back(embed_pair(r_inv, {i, i + 1}, space_) * t);
  }
}

const ComplexMatrix& BraidRepresentation::generator(int i) const {
  if (i < 1 || i >= space_.n()) throw ValidationError("generator index " + std::to_string(i) + " out of range");
  return gens_[static_cast<std::size_t>(i - 1)];
}

const ComplexMatrix& BraidRepresentation::generator_inverse(int i) const {
  if (i < 1 || i >= space_.n()) throw ValidationError("generator index " + std::to_string(i) + " out of range");
  return inverses_[static_cast<std::size_t>(i - 1)];
}

BraidRepresentation build_representation(const ComplexMatrix& r, const TensorSpace& space) {
  return BraidRepresentation(r, space);
}

ComplexMatrix evaluate_word(const BraidRepresentation& rep, const BraidWord& w) {
  w.validate();
  if (w.n != rep.space().n()) throw ValidationError("evaluate_word: word and representation differ in strand count");
  ComplexMatrix out = ComplexMatrix::Identity(rep.space().dim(), rep.space().dim());
  for (int l : w.letters) out = (out * (l > 0 ? rep.generator(l) : rep.generator_inverse(-l))).eval();
  return out;
}

double ybe_residual(const ComplexMatrix& r, int m) {
  const TensorSpace space(m, 3);
  if (r.rows() != static_cast<Eigen::Index>(m) * m || r.cols() != r.rows())
    throw DimensionError("ybe_residual: R must be m^2 x m^2");
  const ComplexMatrix r12 = embed_pair(r, {1, 2}, space);
  const ComplexMatrix r13 = embed_pair(r, {1, 3}, space);
  const ComplexMatrix r23 = embed_pair(r, {2, 3}, space);
  const double nr = frobenius(r);
  if (nr == 0.0) return 0.0;
  return frobenius(r12 * r13 * r23 - r23 * r13 * r12) / (nr * nr * nr);
}

BraidResiduals braid_relation_residuals(const BraidRepresentation& rep) {
  const int n = rep.space().n();
  if (n < 3) throw ValidationError("braid_relation_residuals: need n >= 3");
  BraidResiduals out;
  for (int i = 1; i + 1 < n; ++i) {
    const ComplexMatrix& a = rep.generator(i);
    const ComplexMatrix& b = rep.generator(i + 1);
    const double na = frobenius(a);
    const double nb = frobenius(b);
    out.braid = std::max(out.braid, frobenius(a * b * a - b * a * b) / (na * na * nb));
  }
  if (n >= 4) {
    double far = 0.0;
    for (int i = 1; i < n; ++i)
      for (int j = i + 2; j < n; ++j) {
        const ComplexMatrix& a = rep.generator(i);
        const ComplexMatrix& b = rep.generator(j);
        far = std::max(far, frobenius(a * b - b * a) / (frobenius(a) * frobenius(b)));
      }
    out.far_commutation = far;
  }
  return out;
}

ComplexMatrix zone_solution(int m, std::span<const Complex> u, Complex kappa, std::span<const double> z,
                            int max_order) {
  for (std::size_t k = 1; k < z.size(); ++k)
    if (!(z[k] > z[k - 1])) throw ValidationError("zone_solution: base point must be increasing");
  const IrregularODE ode = pulled_back_ode(m, u, kappa, z);
  const FormalSolution fs = formal_series(ode, max_order);
  const int order = optimal_truncation(fs, 1.0);
  const TensorSpace space(m, static_cast<int>(z.size()));
  ComplexMatrix h = fs.coeff(order);
  for (int k = order - 1; k >= 0; --k) h += fs.coeff(k);
  const ComplexVector e = ode.lambda().array().exp();
  return h * e.asDiagonal() * pair_power_diagonal(space, z, kappa).asDiagonal();
}

double holonomy_factorization_residual(int m, std::span<const Complex> u, Complex kappa, int n, int i, double s,
                                       const ComplexMatrix& r, const HolonomyOptions& opt) {
  const TensorSpace space(m, n);
  if (i < 1 || i >= n) throw ValidationError("holonomy: generator index outside 1..n-1");
  if (!(s > 0.0)) throw ValidationError("holonomy: separation must be positive");
  std::vector<double> pos = opt.positions;
  if (pos.empty())
    for (int k = 1; k <= n; ++k) pos.push_back(k);
  if (static_cast<int>(pos.size()) != n) throw DimensionError("holonomy: positions must have n entries");
  std::vector<double> z(pos.size());
  std::vector<Complex> zc(pos.size());
  for (std::size_t k = 0; k < pos.size(); ++k) {
    z[k] = pos[k] * s;
    zc[k] = z[k];
  }
  const ComplexMatrix g = zone_solution(m, u, kappa, z, opt.max_order);
  const ComplexMatrix hol = dkz_holonomy(m, u, kappa, swap_path(zc, i, opt.g0, opt.style), opt.tol);
  const ComplexMatrix t = permutation_T(i, space);
  const ComplexMatrix rho = g.fullPivLu().solve(t * hol * g);
  return frobenius(rho - t * embed_pair(r, {i, i + 1}, space));
}

HolonomyReport holonomy_factorization_test(int m, std::span<const Complex> u, Complex kappa, int n, int i,
                                           const std::vector<double>& s_values, const HolonomyOptions& opt,
                                           const StokesOptions& stokes) {
  HolonomyReport rep;
  rep.R = stokes_matrices(dkz2_ode(m, u, kappa), stokes).R;
  for (double s : s_values)
    rep.points.push_back({s, holonomy_factorization_residual(m, u, kappa, n, i, s, rep.R, opt)});
  rep.min_improvement = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < rep.points.size(); ++k)
    rep.min_improvement = std::min(rep.min_improvement, rep.points[k - 1].residual / rep.points[k].residual);
  return rep;
}

bool in_chamber(std::span<const double> xi, int k) {
  const int n = static_cast<int>(xi.size());
  if (k < 0 || k >= n) return false;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (k >= 1) std::swap(order[k - 1], order[k]);
  for (int p = 1; p < n; ++p)
    if (!(xi[order[p - 1]] < xi[order[p]])) return false;
  return true;
}

IsomonodromyReport isomonodromy_scan(int m, std::span<const Complex> u, Complex kappa, int k,
                                     const std::vector<std::vector<double>>& grid, const StokesOptions& opt) {
  if (grid.empty()) throw ValidationError("isomonodromy_scan: empty grid");
  const int n = static_cast<int>(grid.front().size());
  const TensorSpace space(m, n);
  IsomonodromyReport rep;
  rep.grid = grid;
  std::vector<ComplexVector> gauges;
  for (const auto& xi : grid) {
    if (static_cast<int>(xi.size()) != n) throw DimensionError("isomonodromy_scan: grid points differ in length");
    if (!in_chamber(xi, k)) throw ValidationError("isomonodromy_scan: grid point outside chamber D_" + std::to_string(k));
    rep.stokes.push_back(stokes_matrices(pulled_back_ode(m, u, kappa, xi), opt));
    gauges.push_back(pair_power_diagonal(space, xi, kappa));
  }
  for (std::size_t a = 0; a < grid.size(); ++a)
    for (std::size_t b = a + 1; b < grid.size(); ++b) {
      rep.raw_deviation = std::max(rep.raw_deviation, pair_deviation(rep.stokes[a], rep.stokes[b], nullptr, nullptr));
      rep.normalized_deviation =
          std::max(rep.normalized_deviation, pair_deviation(rep.stokes[a], rep.stokes[b], &gauges[a], &gauges[b]));
    }
  return rep;
}

}  // namespace dkz
