#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "sbqa/models.hpp"
#include "sbqa/spectrum.hpp"

using namespace sbqa;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::VectorXd spectrum(const SparseOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h.dense());
  return eig.eigenvalues();
}

std::size_t count_near(const Eigen::VectorXd& e, double value, double tol = 1e-10) {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < e.size(); ++i) n += std::abs(e(i) - value) <= tol;
  return n;
}

}  // namespace

TEST_CASE("frustrated ring target") {
  const Basis b3 = build_basis(3, 0, 0);
  const Eigen::VectorXd e3 = spectrum(target_afm(3, b3));
  CHECK(e3(0) == doctest::Approx(-1.0));
  CHECK(count_near(e3, -1.0) == 6);
  CHECK(e3(7) == doctest::Approx(3.0));
  CHECK(target_ground_energy(3) == -1.0);

  const Basis b5 = build_basis(5, 0, 0);
  const Eigen::VectorXd e5 = spectrum(target_afm(5, b5));
  CHECK(e5(0) == doctest::Approx(-3.0));
  CHECK(count_near(e5, -3.0) == 10);
  CHECK_THROWS_AS(target_afm(4, build_basis(4, 0, 0)), Error);
}

TEST_CASE("|+++> is the top state of the target") {
  const Basis b = build_basis(3, 0, 0);
  const Vector plus = Vector::Constant(8, 1.0 / std::sqrt(8.0));
  CHECK(target_afm(3, b).expectation(plus).real() == doctest::Approx(3.0));
}

TEST_CASE("Ising passage against the Kronecker reference") {
  for (std::size_t n : {std::size_t{3}, std::size_t{5}}) {
    const Basis b = build_basis(n, 0, 0);
    for (double s : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      CHECK(max_abs(ising_passage(n, s, b).dense() - oracle::ising(n, s)) < 1e-14);
    }
  }
  const Basis b = build_basis(3, 0, 0);
  const Eigen::VectorXd e0 = spectrum(ising_passage(3, 0.0, b));
  CHECK(e0(0) == doctest::Approx(-1.5));
  CHECK(e0(1) - e0(0) == doctest::Approx(1.0));
  const Eigen::VectorXd e1 = spectrum(ising_passage(3, 1.0, b));
  CHECK(max_abs(e1 - spectrum(target_afm(3, b))) < 1e-12);
  const Eigen::VectorXd half = oracle::eigenvalues(oracle::ising(3, 0.5));
  CHECK(spectrum(ising_passage(3, 0.5, b))(0) == doctest::Approx(half(0)).epsilon(1e-12));
  CHECK_THROWS_AS(ising_passage(3, 1.5, b), Error);
}

TEST_CASE("Ising s=1 multiplicities") {
  const Eigen::VectorXd e = spectrum(ising_passage(3, 1.0, build_basis(3, 0, 0)));
  CHECK(count_near(e, e(0)) == 6);
  CHECK(count_near(e, 3.0) == 2);
}

TEST_CASE("spin-boson passage against the Kronecker reference") {
  for (double omega : {0.5, 1.0, 3.0}) {
    for (double s : {0.0, 0.4, 1.0}) {
      const Basis b = build_basis(3, 3, 2);
      const SparseOperator h = spinboson_passage(3, omega, s, b);
      CHECK(max_abs(h.dense() - oracle::spinboson(3, omega, s, 2)) < 1e-13);
      CHECK(h.hermiticity_defect() <= 1e-12);
    }
  }
  CHECK_THROWS_AS(spinboson_passage(3, 1.0, 0.5, build_basis(3, 2, 2)), Error);
}

TEST_CASE("decoupled spin-boson spectrum") {
  for (double omega : {0.5, 1.0, 2.0}) {
    const Basis b = build_basis(3, 3, 2);
    const Eigen::VectorXd e = spectrum(spinboson_passage(3, omega, 0.0, b));
    CHECK(e(0) == doctest::Approx(-1.5));
    CHECK(e(1) - e(0) == doctest::Approx(std::min(1.0, omega)));
  }
}

TEST_CASE("spin-boson s=1 is Ising with doubled bonds") {
  // At s=1 the spins are conserved in the x basis and the displaced modes
  // contribute -2N + 2 sum sx sx.
  const Basis b = build_basis(3, 3, 7);
  EigenOptions opts;
  opts.method = EigenMethod::iterative;
  const Eigen::VectorXd e = eigen_lowest(spinboson_passage(3, 10.0, 1.0, b), 8, opts).energies;
  CHECK(count_near(e, e(0), 1e-6) == 6);
  CHECK(e(0) == doctest::Approx(-6.0 - 2.0).epsilon(1e-6));
  CHECK(std::abs(e(6)) < 1e-9);
}

TEST_CASE("generic spin-boson") {
  const Basis b = build_basis(3, 3, 2);
  for (double s : {0.0, 0.3, 0.8}) {
    SpinBosonParams p = ring_params(3, 2.0, s);
    p.qubit_gap = 1.0 - s;
    CHECK(max_abs(generic_spinboson(p, b).dense() - oracle::spinboson(3, 2.0, s, 2)) < 1e-13);
  }

  SpinBosonParams free;
  free.n_spins = 2;
  free.couplings = Matrix::Zero(2, 1);
  free.longitudinal = Eigen::VectorXd::Zero(2);
  free.mode_frequencies = Eigen::VectorXd::Constant(1, 0.7);
  const Basis fb = build_basis(2, 1, 3);
  const Eigen::VectorXd e = spectrum(generic_spinboson(free, fb));
  std::vector<double> expect;
  for (int a : {-1, 0, 0, 1}) {
    for (int n = 0; n <= 3; ++n) expect.push_back(a + 0.7 * n);
  }
  std::sort(expect.begin(), expect.end());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(e(static_cast<Eigen::Index>(i)) == doctest::Approx(expect[i]));
  }

  SpinBosonParams rabi;
  rabi.n_spins = 1;
  rabi.couplings = Matrix::Constant(1, 1, 0.4);
  rabi.longitudinal = Eigen::VectorXd::Constant(1, 0.1);
  rabi.mode_frequencies = Eigen::VectorXd::Constant(1, 1.3);
  const Basis rb = build_basis(1, 1, 12);
  const oracle::Layout l{1, 1, 12};
  const oracle::Mat a = oracle::annihilate(12);
  const oracle::Mat ref = 0.5 * oracle::embed(l, 0, oracle::sz()) +
                          1.3 * oracle::embed(l, 1, a.adjoint() * a) +
                          0.4 * oracle::embed(l, 0, oracle::sx()) *
                              (oracle::embed(l, 1, a) + oracle::embed(l, 1, a.adjoint())) +
                          0.1 * oracle::embed(l, 0, oracle::sx());
  CHECK(spectrum(generic_spinboson(rabi, rb))(0) ==
        doctest::Approx(oracle::eigenvalues(ref)(0)).epsilon(1e-12));

  SpinBosonParams bad = free;
  bad.mode_frequencies(0) = -1.0;
  CHECK_THROWS_AS(generic_spinboson(bad, fb), Error);
}

TEST_CASE("ring pattern is reproduced exactly by the generic builder") {
  const Basis b = build_basis(3, 3, 2);
  for (double s : {0.0, 0.3, 0.8}) {
    SpinBosonParams p = ring_params(3, 2.0, s);
    p.qubit_gap = 1.0 - s;
    const SparseOperator generic = generic_spinboson(p, b);
    const SparseOperator ring = spinboson_passage(3, 2.0, s, b);
    const Matrix d = generic.dense() - ring.dense();
    // Same terms accumulated in the same order.
    CHECK(max_abs(d) < 1e-15);
  }
}

TEST_CASE("ring geometry") {
  const SpinBosonParams p = ring_params(5, 3.0);
  CHECK(p.n_modes() == 5);
  for (Eigen::Index r = 0; r < 5; ++r) {
    int nonzero = 0;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
      if (std::abs(p.couplings(i, r)) > 0) {
        ++nonzero;
        CHECK(std::abs(p.couplings(i, r)) == doctest::Approx(std::sqrt(3.0)));
        sum += p.couplings(i, r).real();
      }
    }
    CHECK(nonzero == 2);
    CHECK(sum == doctest::Approx(0.0));
  }
}

TEST_CASE("effective coupling") {
  for (double omega : {0.5, 1.0, 10.0}) {
    const Eigen::MatrixXd j = effective_coupling(ring_params(5, omega));
    for (Eigen::Index i = 0; i < 5; ++i) {
      CHECK(j(i, (i + 1) % 5) == doctest::Approx(1.0));
      CHECK(j(i, i) == 0.0);
      CHECK(j(i, (i + 2) % 5) == 0.0);
    }
    CHECK((j - j.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
  const Eigen::MatrixXd scaled = effective_coupling(ring_params(3, 2.0, 0.3));
  CHECK(scaled(0, 1) == doctest::Approx(0.09).epsilon(1e-14));

  SpinBosonParams p = ring_params(3, 2.0, 0.7);
  const Eigen::MatrixXd before = effective_coupling(p);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  for (Eigen::Index r = 0; r < 3; ++r) p.couplings.col(r) *= std::polar(1.0, phase(rng));
  CHECK((effective_coupling(p) - before).cwiseAbs().maxCoeff() < 1e-14);

  p.couplings.setZero();
  CHECK(effective_coupling(p).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("effective field prefactor") {
  CHECK(effective_field_prefactor(0.0, 3.0) == 0.5);
  CHECK(effective_field_prefactor(1.0, 3.0) == 0.0);
  CHECK(effective_field_prefactor(0.5, 4.0) == doctest::Approx(0.194700).epsilon(1e-6));
}

TEST_CASE("correlator operator") {
  const Basis b = build_basis(3, 0, 0);
  const Vector plus = Vector::Constant(8, 1.0 / std::sqrt(8.0));
  CHECK(correlator_operator(b, 3).expectation(plus).real() == doctest::Approx(3.0));
}
