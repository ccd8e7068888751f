#include <doctest.h>

#include <Eigen/Dense>
#include <cstring>

#include "momentsep/errors.hpp"
#include "momentsep/randgen.hpp"
#include "momentsep/sdp.hpp"

using namespace momentsep;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd m1(double v) {
  MatrixXd m(1, 1);
  m << v;
  return m;
}

// min z s.t. [[1, z], [z, 1]] >= 0; optimum z = -1.
SdpProblem correlation_problem() {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = VectorXd::Ones(1);
  SdpBlock blk;
  MatrixXd a0(2, 2), a1(2, 2);
  a0 << 1, 0, 0, 1;
  a1 << 0, 1, 1, 0;
  blk.mats = {a0, a1};
  p.blocks.push_back(blk);
  return p;
}

// Blocks [z - 1] and [-z]: infeasible.
SdpProblem disjoint_interval_problem() {
  SdpProblem p;
  p.num_vars = 1;
  p.objective = VectorXd::Zero(1);
  SdpBlock b1, b2;
  b1.mats = {m1(-1.0), m1(1.0)};
  b2.mats = {m1(0.0), m1(-1.0)};
  p.blocks = {b1, b2};
  return p;
}

double min_eig(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("2x2 correlation bound: minimize z with [[1,z],[z,1]] PSD") {
  SdpSolution sol = solve(correlation_problem());
  REQUIRE(sol.status == SdpStatus::OPTIMAL);
  CHECK(sol.primal(0) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK(sol.objective_value == doctest::Approx(-1.0).epsilon(1e-7));
}

TEST_CASE("disjoint 1x1 intervals are detected infeasible with a verified certificate") {
  SdpProblem p = disjoint_interval_problem();
  SdpSolution sol = solve(p);
  REQUIRE(sol.status == SdpStatus::INFEASIBLE);
  CHECK(verify_infeasibility_certificate(p, sol.dual_blocks));

  std::vector<MatrixXd> manual = {m1(1.0), m1(1.0)};
  CHECK(verify_infeasibility_certificate(p, manual));
  std::vector<MatrixXd> zero = {m1(0.0), m1(0.0)};
  CHECK(!verify_infeasibility_certificate(p, zero));
}

TEST_CASE("fixed z1 = 2: minimize z2 with [[z1,1],[1,z2]] PSD gives 1/2") {
  SdpProblem p;
  p.num_vars = 2;
  p.objective = VectorXd::Zero(2);
  p.objective(1) = 1.0;
  SdpBlock blk;
  MatrixXd a0(2, 2), a1(2, 2), a2(2, 2);
  a0 << 0, 1, 1, 0;
  a1 << 1, 0, 0, 0;
  a2 << 0, 0, 0, 1;
  blk.mats = {a0, a1, a2};
  p.blocks.push_back(blk);
  p.equalities = {{0, 2.0}};
  SdpSolution sol = solve(p);
  REQUIRE(sol.status == SdpStatus::OPTIMAL);
  CHECK(sol.primal(0) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(sol.primal(1) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("weak duality and primal feasibility on random instances") {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    int nvars = 2 + static_cast<int>(rng.uniform_below(3));
    int bsize = 2 + static_cast<int>(rng.uniform_below(3));
    SdpProblem p;
    p.num_vars = nvars;
    p.objective = VectorXd::Zero(nvars);
    for (int i = 0; i < nvars; ++i) p.objective(i) = rng.normal();

    VectorXd xhat(nvars);
    for (int i = 0; i < nvars; ++i) xhat(i) = rng.normal();

    SdpBlock blk;
    std::vector<MatrixXd> as;
    for (int i = 0; i < nvars; ++i) {
      MatrixXd a(bsize, bsize);
      for (int r = 0; r < bsize; ++r)
        for (int c = 0; c < bsize; ++c) a(r, c) = rng.normal();
      as.push_back((a + a.transpose()) / 2.0);
    }
    MatrixXd g(bsize, bsize);
    for (int r = 0; r < bsize; ++r)
      for (int c = 0; c < bsize; ++c) g(r, c) = rng.normal();
    MatrixXd a0 = g * g.transpose() + 0.1 * MatrixXd::Identity(bsize, bsize);
    for (int i = 0; i < nvars; ++i) a0 -= xhat(i) * as[static_cast<size_t>(i)];
    blk.mats.push_back(a0);
    for (const auto& a : as) blk.mats.push_back(a);
    p.blocks.push_back(blk);

    SdpSolution sol = solve(p);
    if (sol.status == SdpStatus::INCONCLUSIVE) continue;  // unbounded directions happen
    REQUIRE(sol.status == SdpStatus::OPTIMAL);
    // xhat is feasible, so the optimum cannot exceed its value.
    CHECK(sol.objective_value <= p.objective.dot(xhat) + 1e-6);
    // Primal point satisfies the LMI.
    MatrixXd at_z = blk.mats[0];
    for (int i = 0; i < nvars; ++i) at_z += sol.primal(i) * blk.mats[static_cast<size_t>(i) + 1];
    CHECK(min_eig(at_z) >= -1e-7);
    // Dual bound from the returned dual certificate: -<A0, W> <= optimum.
    double dual_bound = -(blk.mats[0].cwiseProduct(sol.dual_blocks[0])).sum();
    CHECK(dual_bound <= sol.objective_value + 1e-6);
    // And the dual matrix pairs to the objective on every free direction.
    for (int i = 0; i < nvars; ++i) {
      double pairing = (blk.mats[static_cast<size_t>(i) + 1].cwiseProduct(sol.dual_blocks[0])).sum();
      CHECK(pairing == doctest::Approx(p.objective(i)).epsilon(1e-5));
    }
  }
}

TEST_CASE("certificate soundness: verified certificates imply an empty grid") {
  Rng rng(77);
  int verified = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int nvars = 2;
    const int bsize = 3;
    // Build W > 0 first, then constraints orthogonal to it.
    MatrixXd gw(bsize, bsize);
    for (int r = 0; r < bsize; ++r)
      for (int c = 0; c < bsize; ++c) gw(r, c) = rng.normal();
    MatrixXd w = gw * gw.transpose() + 0.2 * MatrixXd::Identity(bsize, bsize);

    SdpBlock blk;
    MatrixXd raw(bsize, bsize);
    for (int r = 0; r < bsize; ++r)
      for (int c = 0; c < bsize; ++c) raw(r, c) = rng.normal();
    MatrixXd a0 = (raw + raw.transpose()) / 2.0;
    a0 -= ((a0.cwiseProduct(w)).sum() + 1.0) / w.trace() * MatrixXd::Identity(bsize, bsize);
    blk.mats.push_back(a0);
    for (int i = 0; i < nvars; ++i) {
      for (int r = 0; r < bsize; ++r)
        for (int c = 0; c < bsize; ++c) raw(r, c) = rng.normal();
      MatrixXd a = (raw + raw.transpose()) / 2.0;
      a -= (a.cwiseProduct(w)).sum() / w.trace() * MatrixXd::Identity(bsize, bsize);
      blk.mats.push_back(a);
    }
    SdpProblem p;
    p.num_vars = nvars;
    p.objective = VectorXd::Zero(nvars);
    p.blocks.push_back(blk);

    REQUIRE(verify_infeasibility_certificate(p, {w}));
    SdpSolution sol = solve(p);
    REQUIRE(sol.status == SdpStatus::INFEASIBLE);
    REQUIRE(verify_infeasibility_certificate(p, sol.dual_blocks));
    ++verified;

    // Brute-force grid over a bounded region finds no feasible point.
    for (double x1 = -3.0; x1 <= 3.0; x1 += 0.25) {
      for (double x2 = -3.0; x2 <= 3.0; x2 += 0.25) {
        MatrixXd s = blk.mats[0] + x1 * blk.mats[1] + x2 * blk.mats[2];
        CHECK(min_eig(s) < 0.0);
      }
    }
  }
  CHECK(verified == 30);
}

TEST_CASE("identical inputs give bit-identical solutions") {
  SdpProblem p = correlation_problem();
  SdpSolution a = solve(p);
  SdpSolution b = solve(p);
  REQUIRE(a.status == b.status);
  CHECK(a.iterations == b.iterations);
  REQUIRE(a.primal.size() == b.primal.size());
  CHECK(std::memcmp(a.primal.data(), b.primal.data(), sizeof(double) * a.primal.size()) == 0);
  CHECK(std::memcmp(a.dual_blocks[0].data(), b.dual_blocks[0].data(),
                    sizeof(double) * a.dual_blocks[0].size()) == 0);
}

TEST_CASE("input validation") {
  SdpProblem p = correlation_problem();
  p.blocks[0].mats[1](0, 1) = 2.0;  // asymmetric
  CHECK_THROWS_AS(solve(p), std::invalid_argument);

  SdpProblem q = correlation_problem();
  q.equalities = {{0, 1.0}, {0, 2.0}};
  CHECK_THROWS_AS(solve(q), std::invalid_argument);

  SdpProblem r = correlation_problem();
  r.equalities = {{0, 1.0}};
  r.linear_equations.push_back({{{0, 1.0}}, 2.0});
  CHECK_THROWS_AS(solve(r), IntegrityError);

  SdpProblem s;
  s.num_vars = 1;
  s.objective = VectorXd::Zero(1);
  CHECK_THROWS_AS(solve(s), std::invalid_argument);  // no blocks
}

TEST_CASE("fully pinned problems short-circuit to an eigenvalue check") {
  SdpProblem p = correlation_problem();
  p.equalities = {{0, 0.5}};
  SdpSolution sol = solve(p);
  REQUIRE(sol.status == SdpStatus::OPTIMAL);
  CHECK(sol.primal(0) == doctest::Approx(0.5));

  p.equalities = {{0, 2.0}};
  sol = solve(p);
  REQUIRE(sol.status == SdpStatus::INFEASIBLE);
  CHECK(verify_infeasibility_certificate(p, sol.dual_blocks));
}

TEST_CASE("iteration cap yields INCONCLUSIVE") {
  SdpOptions opts;
  opts.max_iters = 1;
  SdpSolution sol = solve(correlation_problem(), opts);
  CHECK(sol.status == SdpStatus::INCONCLUSIVE);
}

TEST_CASE("predictor-corrector option reaches the same optima") {
  SdpOptions opts;
  opts.predictor_corrector = true;
  SdpSolution sol = solve(correlation_problem(), opts);
  REQUIRE(sol.status == SdpStatus::OPTIMAL);
  CHECK(sol.primal(0) == doctest::Approx(-1.0).epsilon(1e-7));

  SdpSolution inf = solve(disjoint_interval_problem(), opts);
  CHECK(inf.status == SdpStatus::INFEASIBLE);
}
