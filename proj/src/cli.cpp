#include "dkz/cli.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "dkz/braid.hpp"
#include "dkz/qgroup.hpp"
#include "dkz/stokes.hpp"

namespace dkz {

namespace {

constexpr double kPi = std::numbers::pi;

// Collects residuals and their thresholds in insertion order.
class Checks {
 public:
  void at_most(const std::string& name, double value, double limit) { add(name, value, limit, "max"); }
  void at_least(const std::string& name, double value, double limit) { add(name, value, limit, "min"); }
  void info(const std::string& name, double value) { residuals_[name] = value; }
  void note(const std::string& text) { summary_ += "     " + text + "\n"; }

  bool pass() const { return pass_; }
  const std::string& summary() const { return summary_; }

  void into(Json& report) const {
    report["residuals"] = residuals_;
    report["thresholds"] = thresholds_;
    report["pass"] = pass_;
  }

 private:
  void add(const std::string& name, double value, double limit, const char* kind) {
    const bool max = std::string(kind) == "max";
    const bool ok = std::isfinite(value) && (max ? value <= limit : value >= limit);
    residuals_[name] = value;
    thresholds_[name] = {{kind, limit}};
    pass_ = pass_ && ok;
    char line[256];
    std::snprintf(line, sizeof line, "%s %-40s %.3e (%s %.1e)\n", ok ? "PASS" : "FAIL", name.c_str(), value,
                  max ? "<=" : ">=", limit);
    summary_ += line;
  }

  Json residuals_ = Json::object();
  Json thresholds_ = Json::object();
  bool pass_ = true;
  std::string summary_;
};

StokesOptions stokes_options(const RunConfig& c) {
  StokesOptions o;
  o.tol = c.tol;
  return o;
}

std::vector<std::vector<double>> default_grid(int n, int chamber) {
  std::vector<std::vector<double>> grid;
  for (int p = 0; p < 5; ++p) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[j] = j + 0.3 * std::sin(1.7 * (j + 1) + 2.3 * p);
    std::vector<double> xi = v;
    if (chamber >= 1) std::swap(xi[chamber - 1], xi[chamber]);
    grid.push_back(xi);
  }
  return grid;
}

ComplexMatrix noise_matrix(Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix e(d, d);
  for (Eigen::Index c = 0; c < d; ++c)
    for (Eigen::Index r = 0; r < d; ++r) {
      const double re = g(rng);
      e(r, c) = {re, g(rng)};
    }
  return e;
}

Json stokes_json(const StokesData& sd, const IrregularODE& ode) {
  Json rays = Json::array();
  for (double r : anti_stokes_rays(ode)) rays.push_back(r);
  return {{"S_plus", matrix_to_json(sd.S_plus)},
          {"S_minus", matrix_to_json(sd.S_minus)},
          {"formal_monodromy", matrix_to_json(sd.formal_monodromy)},
          {"R", matrix_to_json(sd.R)},
          {"R_minus", matrix_to_json(sd.R_minus)},
          {"anti_stokes_rays", rays},
          {"metadata",
           {{"matching_radius", sd.match.rho},
            {"truncation_order", sd.match.order},
            {"tail_estimate", sd.match.tail},
            {"inner_radius", sd.inner_radius},
            {"radius_doublings", sd.doublings},
            {"radius_stability", sd.rho_stability},
            {"rel_tol", sd.tol.rel_tol},
            {"abs_tol", sd.tol.abs_tol},
            {"steps", sd.stats.steps},
            {"rejected_steps", sd.stats.rejected}}}};
}

void run_compute_stokes(const RunConfig& c, Json& out, Checks& checks) {
  const IrregularODE ode = dkz2_ode(c.m, c.u, c.kappa);
  const StokesData sd = stokes_matrices(ode, stokes_options(c));
  out = stokes_json(sd, ode);
  checks.at_most("S_plus_block_identity", sd.block_identity_plus, 1e-8);
  checks.at_most("S_minus_block_identity", sd.block_identity_minus, 1e-8);
  checks.at_most("det_S_plus_minus_1", sd.det_plus, 1e-8);
  checks.at_most("det_S_minus_minus_1", sd.det_minus, 1e-8);
  checks.at_most("radius_stability", sd.rho_stability, 1e-8);
  checks.at_most("monodromy_eigenvalues", eigenvalue_distance(stokes_monodromy(sd), monodromy_at_zero(ode, 0.0, c.tol)),
                 1e-8);
}

void run_check_ybe(const RunConfig& c, Json& out, Checks& checks) {
  const StokesData sd = stokes_matrices(dkz2_ode(c.m, c.u, c.kappa), stokes_options(c));
  const ComplexMatrix perturbed = sd.R + 1e-2 * noise_matrix(sd.R.rows(), c.seed);
  out = {{"R", matrix_to_json(sd.R)}, {"R_minus", matrix_to_json(sd.R_minus)}};
  checks.at_most("ybe_R", ybe_residual(sd.R, c.m), 1e-8);
  checks.at_most("ybe_R_minus", ybe_residual(sd.R_minus, c.m), 1e-8);
  checks.at_least("ybe_perturbed_R", ybe_residual(perturbed, c.m), 1e-4);
}

void run_check_braid(const RunConfig& c, Json& out, Checks& checks) {
  const StokesData sd = stokes_matrices(dkz2_ode(c.m, c.u, c.kappa), stokes_options(c));
  const BraidRepresentation rep = build_representation(sd.R, TensorSpace(c.m, c.n));
  const BraidResiduals br = braid_relation_residuals(rep);
  out = {{"R", matrix_to_json(sd.R)}};
  checks.at_most("braid_relation", br.braid, 1e-8);
  if (br.far_commutation) checks.at_most("far_commutation", *br.far_commutation, 1e-8);

  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> letter(1, c.n - 1);
  std::bernoulli_distribution sign(0.5);
  BraidWord w{c.n, {}};
  for (int k = 0; k < 6; ++k) w.letters.push_back(sign(rng) ? letter(rng) : -letter(rng));
  const Eigen::Index d = rep.space().dim();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  Json letters = w.letters;
  out["word"] = letters;
  checks.at_most("word_times_inverse",
                 frobenius(evaluate_word(rep, w) * evaluate_word(rep, w.inverse()) - id) / std::sqrt(double(d)),
                 1e-10 * static_cast<double>(w.letters.size()));
}

void run_check_holonomy(const RunConfig& c, Json& out, Checks& checks) {
  const std::vector<double> s_values = c.s_values.empty() ? std::vector<double>{5, 20, 80} : c.s_values;
  HolonomyOptions ho;
  ho.tol = c.tol;
  const ComplexMatrix r = stokes_matrices(dkz2_ode(c.m, c.u, c.kappa), stokes_options(c)).R;
  out = {{"R", matrix_to_json(r)}, {"s_values", s_values}, {"generators", Json::array()}};
  const double final_limit = c.n == 2 ? 1e-6 : 1e-4;
  for (int i = 1; i < c.n; ++i) {
    std::vector<double> res;
    for (double s : s_values) res.push_back(holonomy_factorization_residual(c.m, c.u, c.kappa, c.n, i, s, r, ho));
    out["generators"].push_back({{"i", i}, {"residuals", res}});
    const std::string tag = "b" + std::to_string(i);
    for (std::size_t k = 1; k < res.size(); ++k)
      checks.at_least(tag + "_improvement_" + std::to_string(k), res[k - 1] / res[k], 2.0);
    checks.at_most(tag + "_final_residual", res.back(), final_limit);
  }
}

void run_check_isomonodromy(const RunConfig& c, Json& out, Checks& checks) {
  const auto grid = c.grid.empty() ? default_grid(c.n, c.chamber) : c.grid;
  const IsomonodromyReport rep = isomonodromy_scan(c.m, c.u, c.kappa, c.chamber, grid, stokes_options(c));
  out = {{"chamber", c.chamber}, {"grid", grid}, {"S_plus", Json::array()}};
  for (const auto& sd : rep.stokes) out["S_plus"].push_back(matrix_to_json(sd.S_plus));
  checks.info("raw_deviation", rep.raw_deviation);
  checks.at_most("normalized_deviation", rep.normalized_deviation, 1e-6);
}

void run_compare_qgroup(const RunConfig& c, Json& out, Checks& checks) {
  if (c.m != 2) throw ValidationError("compare-qgroup needs m = 2");
  const StokesData sd = stokes_matrices(dkz2_ode(c.m, c.u, c.kappa), stokes_options(c));
  const QParameter q = c.q ? QParameter{*c.q, "explicit"} : QParameter::from_kappa(c.kappa);
  const QGroupReport rep = compare_stokes_to_qgroup(sd.R, q);
  Json variants = Json::array();
  for (const auto& v : rep.variants)
    variants.push_back({{"variant", variant_name(v.variant)},
                        {"R_q", matrix_to_json(v.Rq)},
                        {"strict_residual", v.strict},
                        {"gauge_residual", v.gauge.residual},
                        {"gauge_d", complex_to_json(v.gauge.d)},
                        {"gauge_scale", complex_to_json(v.gauge.scale)}});
  out = {{"q", complex_to_json(q.q)},
         {"q_convention", q.convention},
         {"R", matrix_to_json(sd.R)},
         {"variants", variants},
         {"best_variant", variant_name(rep.variants[rep.best].variant)}};
  checks.at_most("hecke_model", hecke_residual(uq_sl2_R(q.q), q.q), 1e-10);
  checks.at_most("best_gauge_residual", rep.variants[rep.best].gauge.residual, 1e-6);
  checks.note("best variant: " + variant_name(rep.variants[rep.best].variant));
}

void run_selftest(const RunConfig& c, Json& out, Checks& checks) {
  // A = 0: the formal solution is exact and S_+ = S_- = 1.
  {
    ComplexVector lambda(2);
    lambda << Complex(0, 1), Complex(0, -1);
    const StokesData sd = stokes_matrices(IrregularODE(lambda, ComplexMatrix::Zero(2, 2)), stokes_options(c));
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    checks.at_most("zero_A_S_plus", frobenius(sd.S_plus - id), 1e-10);
    checks.at_most("zero_A_S_minus", frobenius(sd.S_minus - id), 1e-10);
  }
  // Euler system around 0.
  {
    ComplexMatrix a(2, 2);
    a << 0.3, 0.2, Complex(0.1, 0.05), -0.4;
    const IrregularODE euler(ComplexVector::Zero(2), a);
    const ComplexMatrix m = transport(euler, ComplexPath({ArcSegment{0.0, 1.0, 0.0, 2 * kPi}}), c.tol);
    const ComplexMatrix expected = (Complex(0, 2 * kPi) * a).exp();
    checks.at_most("euler_monodromy", frobenius(m - expected), 1e-10);
    const ComplexMatrix line = transport(
        [&](Complex) -> ComplexMatrix { return a; }, ComplexPath({LineSegment{0.0, Complex(1.5, 0.5)}}),
        ComplexMatrix::Identity(2, 2), c.tol);
    checks.at_most("constant_coefficients", frobenius(line - (Complex(1.5, 0.5) * a).exp()), 1e-10);
  }
  // R-matrices with exactly known behaviour.
  {
    const Complex q = std::exp(Complex(0.0, 0.7));
    checks.at_most("uq_sl2_ybe", ybe_residual(uq_sl2_R(q), 2), 1e-12);
    checks.at_most("uq_sl2_hecke", hecke_residual(uq_sl2_R(q), q), 1e-12);
    checks.at_most("flip_ybe", ybe_residual(casimir_omega(2), 2), 1e-15);
    const TensorSpace space(2, 3);
    const BraidRepresentation rep = build_representation(ComplexMatrix::Identity(4, 4), space);
    checks.at_most("identity_R_generators", frobenius(rep.generator(2) - permutation_T(2, space)), 1e-15);
    ComplexVector lambda(2);
    lambda << Complex(0, 1), Complex(0, -1);
    const auto rays = anti_stokes_rays(lambda);
    const double ray_err = rays.size() == 2 ? std::max(std::abs(rays[0] + kPi / 2), std::abs(rays[1] - kPi / 2)) : 1.0;
    checks.at_most("anti_stokes_rays_diag_i", ray_err, 1e-15);
  }
  out = Json::object();
}

double read_double(const Json& j, const char* key) {
  if (!j.at(key).is_number()) throw ValidationError(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int read_int(const Json& j, const char* key) {
  if (!j.at(key).is_number_integer()) throw ValidationError(std::string("config: '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("config: expected a JSON object");
  static const std::set<std::string> known{"command", "m",        "n",    "u",       "kappa", "tolerances",
                                           "seed",    "s_values", "grid", "chamber", "q",     "permissive"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw ValidationError("config: unknown field '" + it.key() + "'");
  RunConfig c;
  if (j.contains("command")) c.command = j.at("command").get<std::string>();
  if (j.contains("m")) c.m = read_int(j, "m");
  if (j.contains("n")) c.n = read_int(j, "n");
  if (j.contains("u")) {
    if (!j.at("u").is_array()) throw ValidationError("config: 'u' must be a list of [re, im]");
    for (const auto& e : j.at("u")) c.u.push_back(complex_from_json(e));
  }
  if (j.contains("kappa")) c.kappa = complex_from_json(j.at("kappa"));
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    if (t.contains("rel_tol")) c.tol.rel_tol = read_double(t, "rel_tol");
    if (t.contains("abs_tol")) c.tol.abs_tol = read_double(t, "abs_tol");
    if (t.contains("max_steps")) c.tol.max_steps = t.at("max_steps").get<long>();
  }
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("permissive")) c.permissive = j.at("permissive").get<bool>();
  if (j.contains("s_values")) c.s_values = j.at("s_values").get<std::vector<double>>();
  if (j.contains("grid")) c.grid = j.at("grid").get<std::vector<std::vector<double>>>();
  if (j.contains("chamber")) c.chamber = read_int(j, "chamber");
  if (j.contains("q")) c.q = complex_from_json(j.at("q"));
  return c;
}

Json config_to_json(const RunConfig& c) {
  Json u = Json::array();
  for (auto z : c.u) u.push_back(complex_to_json(z));
  Json j = {{"command", c.command},
            {"m", c.m},
            {"n", c.n},
            {"u", u},
            {"kappa", complex_to_json(c.kappa)},
            {"tolerances", {{"rel_tol", c.tol.rel_tol}, {"abs_tol", c.tol.abs_tol}, {"max_steps", c.tol.max_steps}}},
            {"seed", c.seed},
            {"permissive", c.permissive}};
  if (!c.s_values.empty()) j["s_values"] = c.s_values;
  if (!c.grid.empty()) j["grid"] = c.grid;
  j["chamber"] = c.chamber;
  if (c.q) j["q"] = complex_to_json(*c.q);
  return j;
}

void validate(const RunConfig& c) {
  bool known = false;
  for (const auto& k : known_commands()) known = known || k == c.command;
  if (!known) throw ValidationError("unknown command '" + c.command + "'");
  c.tol.validate();
  if (c.command == "selftest") return;

  if (c.m < 2) throw ValidationError("m must be >= 2");
  if (c.n < 1) throw ValidationError("n must be >= 1");
  const TensorSpace full(c.m, c.n);
  const TensorSpace pair(c.m, 2);
  if (static_cast<int>(c.u.size()) != c.m)
    throw ValidationError("u must have m = " + std::to_string(c.m) + " entries, got " + std::to_string(c.u.size()));
  for (std::size_t a = 0; a < c.u.size(); ++a)
    for (std::size_t b = a + 1; b < c.u.size(); ++b)
      if (c.u[a] == c.u[b])
        throw ValidationError("u must have distinct diagonal elements (u_" + std::to_string(a + 1) + " = u_" +
                              std::to_string(b + 1) + ")");
  if (c.kappa == Complex(0.0)) throw ValidationError("kappa must be nonzero");
  if (!c.permissive)
    for (std::size_t a = 0; a < c.u.size(); ++a) {
      const Complex w = c.u[a] / c.kappa;
      if (std::abs(w.real()) > 1e-12 * std::max(1.0, std::abs(w)))
        throw ValidationError("u_" + std::to_string(a + 1) + "/kappa must be purely imaginary (use --permissive)");
    }
  if ((c.command == "check-braid") && c.n < 3) throw ValidationError("check-braid needs n >= 3");
  if (c.command == "check-holonomy" || c.command == "check-isomonodromy") {
    if (c.n < 2) throw ValidationError(c.command + " needs n >= 2");
  }
  if (c.command == "check-holonomy") {
    if (c.s_values.size() == 1) throw ValidationError("s_values needs at least two separations");
    for (double s : c.s_values)
      if (!(s > 0.0)) throw ValidationError("s_values must be positive");
  }
  if (c.command == "check-isomonodromy" && (c.chamber < 0 || c.chamber >= c.n))
    throw ValidationError("chamber must lie in 0..n-1");
  if (c.command == "compare-qgroup" && c.m != 2) throw ValidationError("compare-qgroup needs m = 2");
  if (c.q && *c.q == Complex(0.0)) throw ValidationError("q must be nonzero");
}

RunResult run(const RunConfig& c) {
  RunResult res;
  res.report = {{"command", c.command}, {"inputs", config_to_json(c)}};
  try {
    validate(c);
    Checks checks;
    Json out;
    if (c.command == "compute-stokes")
      run_compute_stokes(c, out, checks);
    else if (c.command == "check-ybe")
      run_check_ybe(c, out, checks);
    else if (c.command == "check-braid")
      run_check_braid(c, out, checks);
    else if (c.command == "check-holonomy")
      run_check_holonomy(c, out, checks);
    else if (c.command == "check-isomonodromy")
      run_check_isomonodromy(c, out, checks);
    else if (c.command == "compare-qgroup")
      run_compare_qgroup(c, out, checks);
    else
      run_selftest(c, out, checks);
    res.report["outputs"] = out;
    checks.into(res.report);
    res.summary = checks.summary();
    res.exit_code = checks.pass() ? kExitPass : kExitFail;
  } catch (const ValidationError& e) {
    res.report["error"] = {{"kind", "validation"}, {"message", e.what()}};
    res.report["pass"] = false;
    res.summary = std::string("validation error: ") + e.what() + "\n";
    res.exit_code = kExitValidation;
  } catch (const NumericalError& e) {
    res.report["error"] = {{"kind", "numerical"}, {"message", e.what()}};
    res.report["pass"] = false;
    res.summary = std::string("numerical error: ") + e.what() + "\n";
    res.exit_code = kExitNumerical;
  }
  return res;
}

}  // namespace dkz
