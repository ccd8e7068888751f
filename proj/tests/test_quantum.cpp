#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "momentsep/errors.hpp"
#include "momentsep/quantum.hpp"
#include "momentsep/randgen.hpp"

using namespace momentsep;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

double min_eig(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

int eig_rank(const MatrixXcd& m, double tol = 1e-9) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  int r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) > tol) ++r;
  return r;
}

DensityMatrix pure_state(const VectorXcd& psi, std::vector<int> dims) {
  DensityMatrix rho;
  rho.mat = psi * psi.adjoint();
  rho.factor_dims = std::move(dims);
  return rho;
}

}  // namespace

TEST_CASE("dicke states") {
  VectorXcd d11 = dicke_state(1, 1);
  CHECK(std::abs(d11(0) - 1.0) < 1e-15);  // |0>
  VectorXcd d22 = dicke_state(2, 2);
  CHECK(std::abs(d22(0) - 1.0) < 1e-15);  // |00>
  VectorXcd d21 = dicke_state(2, 1);
  CHECK(std::abs(d21(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(d21(2) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(d21.norm() - 1.0) < 1e-15);
  CHECK_THROWS_AS(dicke_state(2, 3), std::invalid_argument);
  CHECK_THROWS_AS(dicke_state(2, -1), std::invalid_argument);
}

TEST_CASE("symmetric projector ranks and the singlet kernel") {
  CHECK((symmetric_projector(1) - MatrixXcd::Identity(2, 2)).norm() < 1e-14);
  MatrixXcd p2 = symmetric_projector(2);
  CHECK(eig_rank(p2) == 3);
  CHECK((p2 * p2 - p2).norm() < 1e-13);
  VectorXcd singlet(4);
  singlet << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  CHECK((p2 * singlet).norm() < 1e-14);
  CHECK(eig_rank(symmetric_projector(3)) == 4);
}

TEST_CASE("standard basis orthogonality") {
  for (int dim : {2, 3, 4}) {
    LocalBasis basis = standard_basis(dim);
    REQUIRE(static_cast<int>(basis.ops.size()) == dim * dim);
    CHECK((basis.ops[0] - MatrixXcd::Identity(dim, dim)).norm() < 1e-14);
    for (size_t a = 0; a < basis.ops.size(); ++a) {
      CHECK((basis.ops[a] - basis.ops[a].adjoint()).norm() < 1e-12);
      for (size_t b = 0; b < basis.ops.size(); ++b) {
        double expected = (a == b) ? dim : 0.0;
        CHECK(std::abs((basis.ops[a] * basis.ops[b]).trace().real() - expected) < 1e-12);
        CHECK(std::abs((basis.ops[a] * basis.ops[b]).trace().imag()) < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(standard_basis(1), std::invalid_argument);
}

TEST_CASE("state_to_tensor on the coherent product |00><00|") {
  VectorXcd psi = VectorXcd::Zero(4);
  psi(0) = 1.0;
  auto res = state_to_tensor(pure_state(psi, {2, 2}), PartitionSpec::symmetric_qubits(2));
  CHECK(!res.projected);
  // X_{mu nu} = n_mu n_nu with n = (1, 0, 0, 1).
  double n[4] = {1, 0, 0, 1};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      CHECK(res.tensor.at({a, b}) == doctest::Approx(n[a] * n[b]).epsilon(1e-12));
}

TEST_CASE("state_to_tensor on P_s/3 and the Dicke state") {
  DensityMatrix ps3;
  ps3.mat = symmetric_projector(2) / 3.0;
  ps3.factor_dims = {2, 2};
  auto res = state_to_tensor(ps3, PartitionSpec::symmetric_qubits(2));
  CHECK(res.tensor.at({0, 0}) == doctest::Approx(1.0));
  for (int a = 1; a <= 3; ++a) {
    CHECK(res.tensor.at({0, a}) == doctest::Approx(0.0).epsilon(1e-12));
    for (int b = 1; b <= 3; ++b)
      CHECK(res.tensor.at({a, b}) == doctest::Approx(a == b ? 1.0 / 3.0 : 0.0).epsilon(1e-12));
  }

  auto dicke = state_to_tensor(pure_state(dicke_state(2, 1), {2, 2}), PartitionSpec::symmetric_qubits(2));
  CHECK(dicke.tensor.at({1, 1}) == doctest::Approx(1.0));
  CHECK(dicke.tensor.at({2, 2}) == doctest::Approx(1.0));
  CHECK(dicke.tensor.at({3, 3}) == doctest::Approx(-1.0));
  CHECK(dicke.tensor.at({0, 3}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pure product symmetric states have exactly multiplicative tensors") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    int num_qubits = 2 + static_cast<int>(rng.uniform_below(3));
    Eigen::Vector3d n = random_bloch_vector(rng);
    StateTensor tensor = tensor_from_bloch_mixture({1.0}, {n}, num_qubits);
    double coords[4] = {1.0, n(0), n(1), n(2)};
    for (const auto& [mu, value] : tensor.coords) {
      double prod = 1.0;
      for (int m : mu) prod *= coords[m];
      CHECK(value == doctest::Approx(prod).epsilon(1e-12));
    }
  }
}

TEST_CASE("tensor_to_state inverts state_to_tensor") {
  // Coherent tensor -> |00><00|.
  VectorXcd psi = VectorXcd::Zero(4);
  psi(0) = 1.0;
  DensityMatrix rho = pure_state(psi, {2, 2});
  auto res = state_to_tensor(rho, PartitionSpec::symmetric_qubits(2));
  DensityMatrix back = tensor_to_state(res.tensor);
  CHECK((back.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-12);

  // Haar-random symmetric states round-trip within 1e-10.
  Rng rng(7);
  for (int num_qubits : {2, 3, 4}) {
    for (int trial = 0; trial < 5; ++trial) {
      DensityMatrix sym = haar_random_symmetric(num_qubits, num_qubits + 1, rng);
      auto t = state_to_tensor(sym, PartitionSpec::symmetric_qubits(num_qubits));
      CHECK(!t.projected);
      DensityMatrix rt = tensor_to_state(t.tensor);
      CHECK((rt.mat - sym.mat).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  // General multipartite round-trip, including a qutrit.
  Rng rng2(8);
  PartitionSpec spec = PartitionSpec::distinct_parties({2, 3});
  DensityMatrix prod = random_product_state(spec, rng2);
  auto t2 = state_to_tensor(prod, spec);
  DensityMatrix rt2 = tensor_to_state(t2.tensor);
  CHECK((rt2.mat - prod.mat).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(t2.tensor.at({0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("trace one iff X at the zero tuple is one") {
  Rng rng(11);
  DensityMatrix rho = haar_random_state(4, 4, rng);
  rho.factor_dims = {2, 2};
  auto t = state_to_tensor(rho, PartitionSpec::distinct_parties({2, 2}));
  CHECK(t.tensor.at({0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("states outside the symmetric subspace are projected with a warning") {
  VectorXcd psi = VectorXcd::Zero(4);
  psi(1) = 1.0;  // |01>, not symmetric
  DensityMatrix rho = pure_state(psi, {2, 2});
  auto res = state_to_tensor(rho, PartitionSpec::symmetric_qubits(2));
  CHECK(res.projected);
  // Projected-and-renormalized state: P|01> has norm^2 1/2.
  DensityMatrix direct;
  MatrixXcd p = symmetric_projector(2);
  direct.mat = p * rho.mat * p;
  direct.mat /= direct.mat.trace().real();
  direct.factor_dims = {2, 2};
  auto expect = state_to_tensor(direct, PartitionSpec::symmetric_qubits(2));
  for (const auto& [mu, value] : res.tensor.coords) CHECK(value == doctest::Approx(expect.tensor.at(mu)).epsilon(1e-10));
}

TEST_CASE("partial transpose is an involution preserving trace and Hermiticity") {
  Rng rng(3);
  DensityMatrix rho = haar_random_state(8, 8, rng);
  rho.factor_dims = {2, 2, 2};
  for (std::vector<int> subset : {std::vector<int>{0}, {1}, {0, 2}}) {
    MatrixXcd pt = partial_transpose(rho, subset);
    CHECK(std::abs(pt.trace().real() - 1.0) < 1e-12);
    CHECK((pt - pt.adjoint()).norm() < 1e-12);
    DensityMatrix wrapped{pt, rho.factor_dims};
    CHECK((partial_transpose(wrapped, subset) - rho.mat).norm() < 1e-13);
  }
  CHECK_THROWS_AS(partial_transpose(rho, {}), std::invalid_argument);
  CHECK_THROWS_AS(partial_transpose(rho, {0, 1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(partial_transpose(rho, {5}), std::invalid_argument);
}

TEST_CASE("ppt_check worked values") {
  // Maximally mixed two-qubit state: PPT with minimum eigenvalue 1/4.
  DensityMatrix mixed;
  mixed.mat = MatrixXcd::Identity(4, 4) / 4.0;
  mixed.factor_dims = {2, 2};
  PptResult r = ppt_check(mixed, {0});
  CHECK(r.is_ppt);
  CHECK(r.min_eigenvalue == doctest::Approx(0.25));

  // Dicke two-qubit state: NPT with minimum eigenvalue -1/2 (frozen from
  // the eigendecomposition of the 4x4 partial transpose).
  PptResult d = ppt_check(pure_state(dicke_state(2, 1), {2, 2}), {0});
  CHECK(!d.is_ppt);
  CHECK(d.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));

  // Product states stay PPT.
  Rng rng(5);
  DensityMatrix prod = random_product_state(PartitionSpec::distinct_parties({2, 2}), rng);
  CHECK(ppt_check(prod, {1}).is_ppt);
}

TEST_CASE("t_matrix structure") {
  // Coherent (0,0,1): rank-one outer product of (1,0,0,1).
  StateTensor coh = tensor_from_bloch_mixture({1.0}, {Eigen::Vector3d(0, 0, 1)}, 2);
  Eigen::MatrixXd t = t_matrix(coh);
  Eigen::Vector4d v(1, 0, 0, 1);
  CHECK((t - v * v.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // Dicke: eigenvalues {1, 1, 1, -1}.
  auto dicke = state_to_tensor(pure_state(dicke_state(2, 1), {2, 2}), PartitionSpec::symmetric_qubits(2));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t_matrix(dicke.tensor));
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(1.0));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1.0));

  StateTensor odd = tensor_from_bloch_mixture({1.0}, {Eigen::Vector3d(0, 0, 1)}, 3);
  CHECK_THROWS_AS(t_matrix(odd), std::invalid_argument);
}

TEST_CASE("local constraint polynomials for qubits") {
  auto mixed = local_constraint_polynomials(2, false);
  REQUIRE(mixed.size() == 1);
  CHECK(mixed[0].second == Relation::GEQ);
  // 1 - x1^2 - x2^2 - x3^2.
  std::vector<double> origin = {0, 0, 0};
  CHECK(mixed[0].first.eval(origin) == doctest::Approx(1.0));
  std::vector<double> edge = {1, 0, 0};
  CHECK(mixed[0].first.eval(edge) == doctest::Approx(0.0));

  auto pure = local_constraint_polynomials(2, true);
  REQUIRE(pure.size() == 1);
  CHECK(pure[0].second == Relation::EQ);
  CHECK(pure[0].first.eval(edge) == doctest::Approx(0.0));
  CHECK(pure[0].first.eval(origin) == doctest::Approx(-1.0));

  CHECK_THROWS_AS(local_constraint_polynomials(3, true), std::invalid_argument);
}

TEST_CASE("qudit body membership matches matrix positivity") {
  // 1000 sampled points per dimension; polynomial constraints must agree
  // with the eigenvalue test.
  Rng rng(99);
  for (int dim : {2, 3}) {
    auto constraints = local_constraint_polynomials(dim, false);
    if (dim == 3) REQUIRE(constraints.size() == 2);
    LocalBasis basis = standard_basis(dim);
    int n = dim * dim - 1;
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<double> y(static_cast<size_t>(n));
      double radius = 0.3 + 1.2 * rng.uniform01();
      for (auto& v : y) v = radius * rng.normal() / std::sqrt(static_cast<double>(n));
      MatrixXcd rho = MatrixXcd::Identity(dim, dim);
      for (int a = 0; a < n; ++a) rho += y[static_cast<size_t>(a)] * basis.ops[static_cast<size_t>(a) + 1];
      rho /= dim;
      bool psd = min_eig(rho) >= -1e-12;
      bool poly_ok = true;
      for (const auto& [g, rel] : constraints) {
        double v = g.eval(y);
        if (rel == Relation::GEQ && v < -1e-12) poly_ok = false;
      }
      CHECK(psd == poly_ok);
    }
  }
}

TEST_CASE("density matrix validation") {
  DensityMatrix bad;
  bad.mat = MatrixXcd::Identity(4, 4) / 4.0;
  bad.factor_dims = {2, 3};
  CHECK_THROWS_AS(validate_density_matrix(bad), std::invalid_argument);

  DensityMatrix negative;
  negative.mat = MatrixXcd::Identity(2, 2);
  negative.mat(1, 1) = -0.1;
  negative.mat(0, 0) = 1.1;
  negative.factor_dims = {2};
  CHECK_THROWS_AS(validate_density_matrix(negative), std::invalid_argument);
}

TEST_CASE("dicke-basis tensor path matches the projected trace") {
  Rng rng(17);
  for (int num_qubits : {2, 3, 5}) {
    Eigen::MatrixXcd rho_sym = haar_random_symmetric_dicke(num_qubits, num_qubits + 1, rng);
    StateTensor fast = symmetric_tensor_from_dicke(rho_sym, num_qubits);
    Eigen::MatrixXcd b = dicke_basis(num_qubits);
    DensityMatrix full;
    full.mat = b * rho_sym * b.adjoint();
    full.factor_dims.assign(static_cast<size_t>(num_qubits), 2);
    auto slow = state_to_tensor(full, PartitionSpec::symmetric_qubits(num_qubits));
    for (const auto& [mu, value] : fast.coords) CHECK(value == doctest::Approx(slow.tensor.at(mu)).epsilon(1e-10));
  }
}

TEST_CASE("partition spec validation") {
  PartitionSpec bad;
  bad.parties = {2, 3};
  bad.symmetry_classes = {{0, 1}};
  bad.purity_flags = {true};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);  // unequal dims identified

  PartitionSpec overlap;
  overlap.parties = {2, 2};
  overlap.symmetry_classes = {{0, 1}, {1}};
  overlap.purity_flags = {true, true};
  CHECK_THROWS_AS(overlap.validate(), std::invalid_argument);

  PartitionSpec ok = PartitionSpec::symmetric_qubits(3);
  ok.validate();
  CHECK(ok.total_vars() == 3);
  CHECK(PartitionSpec::distinct_parties({2, 2}).total_vars() == 6);
  CHECK(PartitionSpec::distinct_parties({2, 3}).total_vars() == 11);
}
