#include <doctest.h>

#include "dkz/tensor.hpp"

using namespace dkz;

namespace {

// Reference embedding through explicit Kronecker products.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

TEST_CASE("tensor space dimensions and limits") {
  CHECK(TensorSpace(2, 3).dim() == 8);
  CHECK(TensorSpace(4, 6).dim() == 4096);
  CHECK_THROWS_AS(TensorSpace(4, 7), ValidationError);
  CHECK_THROWS_AS(TensorSpace(1, 3), ValidationError);
  const TensorSpace s(3, 3);
  CHECK(s.digit(5, 1) == 0);
  CHECK(s.digit(5, 2) == 1);
  CHECK(s.digit(5, 3) == 2);
}

TEST_CASE("embed_single matches kron with identities") {
  const TensorSpace s(2, 3);
  ComplexMatrix op(2, 2);
  op << 1.0, Complex(2, 1), -3.0, 0.5;
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  CHECK(frobenius(embed_single(op, 1, s) - kron(kron(op, i2), i2)) == 0.0);
  CHECK(frobenius(embed_single(op, 2, s) - kron(kron(i2, op), i2)) == 0.0);
  CHECK(frobenius(embed_single(op, 3, s) - kron(kron(i2, i2), op)) == 0.0);
  CHECK_THROWS_AS(embed_single(op, 4, s), ValidationError);
}

TEST_CASE("embed_pair agrees with kron on adjacent and reversed factors") {
  const TensorSpace s(2, 3);
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  ComplexMatrix a(2, 2), b(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  b << Complex(0, 1), -1.0, 0.5, 2.0;
  const ComplexMatrix ab = kron(a, b);
  CHECK(frobenius(embed_pair(ab, {1, 2}, s) - kron(ab, i2)) < 1e-14);
  CHECK(frobenius(embed_pair(ab, {2, 3}, s) - kron(i2, ab)) < 1e-14);
  // a on factor 1, b on factor 3.
  CHECK(frobenius(embed_pair(ab, {1, 3}, s) - kron(kron(a, i2), b)) < 1e-14);
  // first slot on factor 3: b (x) 1 (x) a... i.e. a on factor 3, b on factor 1.
  CHECK(frobenius(embed_pair(ab, {3, 1}, s) - kron(kron(b, i2), a)) < 1e-14);
  CHECK_THROWS_AS(embed_pair(ab, {2, 2}, s), ValidationError);
}

TEST_CASE("Omega is the flip and T_i is its embedding") {
  const ComplexMatrix omega = casimir_omega(3);
  ComplexMatrix sum = ComplexMatrix::Zero(9, 9);
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b) sum += kron(elementary_matrix(a, b, 3), elementary_matrix(b, a, 3));
  CHECK(frobenius(sum - omega) == 0.0);
  CHECK(frobenius(omega * omega - ComplexMatrix::Identity(9, 9)) == 0.0);
  const TensorSpace s(3, 3);
  CHECK(frobenius(permutation_T(2, s) - embed_pair(omega, {2, 3}, s)) == 0.0);
  CHECK_THROWS_AS(permutation_T(3, s), ValidationError);
}

TEST_CASE("diagonal part of Omega") {
  const ComplexMatrix d = diagonal_omega(2);
  const ComplexMatrix o = casimir_omega(2);
  CHECK(frobenius(d - ComplexMatrix(o.diagonal().asDiagonal())) == 0.0);
}
