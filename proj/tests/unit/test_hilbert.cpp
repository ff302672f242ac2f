#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "sbqa/hilbert.hpp"

using namespace sbqa;

namespace {

Vector basis_vector(const Basis& b, std::size_t i) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(b.dim()));
  v(static_cast<Eigen::Index>(i)) = 1.0;
  return v;
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("basis dimensions") {
  CHECK(build_basis(3, 3, 0).dim() == 8);
  CHECK(build_basis(3, 3, 3).dim() == 512);
  CHECK(build_basis(5, 5, 2).dim() == 7776);
  CHECK(build_basis(3, 0, 0).boson_dim() == 1);
}

TEST_CASE("oversized bases are rejected") {
  CHECK_THROWS_WITH_AS(build_basis(20, 20, 3), doctest::Contains("dimension too large"), Error);
  CHECK_THROWS_AS(build_basis(4, 2, 3, 100), Error);
  CHECK_THROWS_AS(build_basis(0, 0, 0), Error);
}

TEST_CASE("encode and decode are inverse bijections") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const std::size_t m = rng() % 3;
    const std::size_t cut = rng() % 3;
    const Basis b = build_basis(n, m, cut);
    for (std::size_t i = 0; i < b.dim(); ++i) CHECK(b.encode(b.decode(i)) == i);
  }
}

TEST_CASE("spins are the fastest digits") {
  const Basis b = build_basis(2, 2, 2);
  CHECK(b.spin_bit(1, 0) == 1);
  CHECK(b.spin_bit(2, 1) == 1);
  CHECK(b.occupation(4, 0) == 1);
  CHECK(b.occupation(12, 1) == 1);
}

TEST_CASE("pauli conventions") {
  const Basis b = build_basis(3, 1, 2);
  const Vector down = basis_vector(b, 0);
  CHECK(pauli(b, Axis::z, 0).expectation(down).real() == doctest::Approx(-1.0));
  const SparseOperator x0 = pauli(b, Axis::x, 0);
  CHECK(max_abs((x0 * x0).dense() - Matrix::Identity(24, 24)) == 0.0);
  CHECK(x0.nonzeros() == static_cast<std::ptrdiff_t>(b.dim()));
  const Vector flipped = (pauli(b, Axis::x, 0) * pauli(b, Axis::x, 1)).apply(down);
  CHECK(std::abs(flipped(3) - cplx(1.0)) == 0.0);
  CHECK(flipped.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(pauli(b, Axis::x, 3), Error);
}

TEST_CASE("pauli algebra") {
  const Basis b = build_basis(2, 1, 1);
  for (Axis a : {Axis::x, Axis::y, Axis::z}) {
    for (Axis c : {Axis::x, Axis::y, Axis::z}) {
      const SparseOperator p = pauli(b, a, 0);
      const SparseOperator q = pauli(b, c, 1);
      CHECK(max_abs((p * q - q * p).dense()) == 0.0);
    }
  }
  const SparseOperator x = pauli(b, Axis::x, 1);
  const SparseOperator z = pauli(b, Axis::z, 1);
  CHECK(max_abs((x * z + z * x).dense()) == 0.0);
  const SparseOperator y = pauli(b, Axis::y, 0);
  const Matrix xy = (pauli(b, Axis::x, 0) * y).dense();
  CHECK(max_abs(xy - cplx(0.0, 1.0) * pauli(b, Axis::z, 0).dense()) < 1e-15);
}

TEST_CASE("pauli matches the Kronecker reference") {
  const Basis b = build_basis(3, 2, 2);
  const oracle::Layout l{3, 2, 2};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(max_abs(pauli(b, Axis::x, i).dense() - oracle::embed(l, i, oracle::sx())) == 0.0);
    CHECK(max_abs(pauli(b, Axis::z, i).dense() - oracle::embed(l, i, oracle::sz())) == 0.0);
  }
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(max_abs(boson(b, r, Ladder::annihilate).dense() -
                  oracle::embed(l, 3 + r, oracle::annihilate(2))) < 1e-15);
  }
}

TEST_CASE("truncated ladder operators") {
  const Basis b = build_basis(1, 1, 3);
  const SparseOperator a = boson(b, 0, Ladder::annihilate);
  const SparseOperator ad = boson(b, 0, Ladder::create);
  const Vector vac = basis_vector(b, 0);
  CHECK(a.apply(vac).norm() == 0.0);
  const Vector top = basis_vector(b, b.encode({{0}, {3}}));
  CHECK(ad.apply(top).norm() == 0.0);
  const Vector one = basis_vector(b, b.encode({{0}, {1}}));
  CHECK(std::abs(one.dot(ad.apply(vac)) - cplx(1.0)) < 1e-15);
  const Matrix comm = (a * ad - ad * a).dense();
  for (int n = 0; n < 3; ++n) {
    const Eigen::Index i = static_cast<Eigen::Index>(b.encode({{0}, {n}}));
    CHECK(std::abs(comm(i, i) - cplx(1.0)) < 1e-14);
  }
  const Matrix num = boson(b, 0, Ladder::number).dense();
  CHECK(max_abs(num - (ad * a).dense()) < 1e-14);
  CHECK_THROWS_AS(boson(b, 1, Ladder::create), Error);
}

TEST_CASE("combine") {
  const Basis b = build_basis(2, 1, 2);
  const SparseOperator x = pauli(b, Axis::x, 0);
  const SparseOperator twice = combine(b, {{1.0, {x}}, {1.0, {x}}});
  CHECK(max_abs(twice.dense() - 2.0 * x.dense()) == 0.0);
  CHECK(twice.nonzeros() == x.nonzeros());
  const SparseOperator a = boson(b, 0, Ladder::annihilate);
  const SparseOperator quad = combine(b, {{0.5, {a}}, {0.5, {a.adjoint()}}});
  CHECK(quad.hermiticity_defect() == 0.0);
  CHECK(combine(b, {}).nonzeros() == 0);
  const SparseOperator xz = combine(b, {{2.0, {x, pauli(b, Axis::z, 1)}}});
  CHECK(max_abs(xz.dense() - 2.0 * (x * pauli(b, Axis::z, 1)).dense()) == 0.0);
  const Basis other = build_basis(2, 1, 3);
  CHECK_THROWS_AS(combine(b, {{1.0, {pauli(other, Axis::x, 0)}}}), Error);
}
