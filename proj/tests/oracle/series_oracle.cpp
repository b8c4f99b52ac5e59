#include "oracle/series_oracle.hpp"

namespace oracle {

std::vector<CMat> series_by_linear_solve(const Eigen::VectorXcd& lambda, const CMat& a, int n, double tol) {
  const Eigen::Index d = lambda.size();
  auto same = [&](Eigen::Index p, Eigen::Index q) { return std::abs(lambda(p) - lambda(q)) <= tol; };
  CMat pa = CMat::Zero(d, d);
  for (Eigen::Index p = 0; p < d; ++p)
    for (Eigen::Index q = 0; q < d; ++q)
      if (same(p, q)) pa(p, q) = a(p, q);

  // Unknown H_k (k = 1..n+1) entry (p, q) sits at (k-1) d^2 + q d + p.
  const Eigen::Index dd = d * d;
  const Eigen::Index unknowns = (n + 1) * dd;
  CMat sys = CMat::Zero(unknowns, unknowns);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(unknowns);
  auto idx = [&](int k, Eigen::Index p, Eigen::Index q) { return (k - 1) * dd + q * d + p; };

  for (int j = 0; j <= n; ++j) {
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) {
        const Eigen::Index row = j * dd + q * d + p;
        // (H_j [A])_{pq} - (A H_j)_{pq} - j (H_j)_{pq}
        for (Eigen::Index s = 0; s < d; ++s) {
          if (j == 0) {
            rhs(row) -= (p == s ? 1.0 : 0.0) * pa(s, q) - a(p, s) * (s == q ? 1.0 : 0.0);
          } else {
            sys(row, idx(j, p, s)) += pa(s, q);
            sys(row, idx(j, s, q)) -= a(p, s);
          }
        }
        if (j > 0) sys(row, idx(j, p, q)) -= static_cast<double>(j);
        // -(lambda_p - lambda_q) (H_{j+1})_{pq}
        sys(row, idx(j + 1, p, q)) -= lambda(p) - lambda(q);
      }
  }
  const Eigen::VectorXcd x = sys.completeOrthogonalDecomposition().solve(rhs);
  std::vector<CMat> h{CMat::Identity(d, d)};
  for (int k = 1; k <= n; ++k) {
    CMat hk(d, d);
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) hk(p, q) = x(idx(k, p, q));
    h.push_back(hk);
  }
  return h;
}

}  // namespace oracle
