#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "momentsep/polynomial.hpp"
#include "momentsep/quantum.hpp"
#include "momentsep/randgen.hpp"
#include "momentsep/sdp.hpp"
#include "momentsep/semialgebraic.hpp"
#include "momentsep/tms.hpp"

namespace momentsep {

struct HierarchyOptions {
  int k_max = -1;                // -1: k0 + 2
  int objectives_per_order = 6;  // random SOS objectives tried per order
  double rank_tol = 1e-6;
  double verify_tol = 1e-6;
  uint64_t seed = 0;
  SdpOptions solver;
};

struct WeightedAtom {
  double weight = 0.0;
  std::vector<double> point;
};

/// Finitely atomic representing measure: weighted points in K whose moments
/// reproduce a target sequence.
struct Decomposition {
  std::vector<WeightedAtom> atoms;
  std::optional<PartitionSpec> partition;
};

enum class Verdict { ENTANGLED, SEPARABLE, INCONCLUSIVE };

struct InfeasibilityWitness {
  int order = 0;
  std::vector<Eigen::MatrixXd> blocks;
};

struct AttemptLog {
  int k = 0;
  int objective_index = 0;
  std::string outcome;
  int rank_high = -1;
  int rank_low = -1;
  int solver_iterations = 0;
  double solver_gap = 0.0;
};

struct SeparabilityCertificate {
  Verdict verdict = Verdict::INCONCLUSIVE;
  int order_k = 0;
  std::optional<InfeasibilityWitness> witness;
  std::optional<Decomposition> decomposition;
  std::vector<AttemptLog> diagnostics;
  int k0 = 0;
  int d0 = 1;
  std::string message;
};

/// Smallest extension order floor(d/2) + 1.
int k0_of(const Tms& y);

/// Random sum-of-squares polynomial of degree 2*k0: the sum of
/// C(n+k0, k0) squared polynomials with standard-normal coefficients.
Polynomial random_sos_objective(int n, int k0, Rng& rng);

/// SDP relaxation at order k: variables z_beta for all |beta| <= 2k,
/// objective from R, moment-matrix block plus one localizing block per GEQ
/// constraint; EQ constraints become linear equations zeroing the localizing
/// entries; support moments are fixed to the input values.
SdpProblem build_relaxation(const Tms& y, const SemialgebraicSet& set, int k, const Polynomial& objective);

/// The hierarchy loop: orders k0..k_max, several random objectives per
/// order; a verified infeasible SDP certifies entanglement, a flat optimal
/// extension yields an extracted and verified decomposition.
SeparabilityCertificate run_hierarchy(const Tms& y, const SemialgebraicSet& set,
                                      const HierarchyOptions& opts = {},
                                      const std::optional<PartitionSpec>& spec = std::nullopt);

/// Atom extraction from a flat moment matrix: truncated eigendecomposition,
/// column echelon to a monomial basis, multiplication operators, joint
/// diagonalization through a random convex combination, then weight fitting.
Decomposition extract_atoms(const Tms& z, int k, double rank_tol, Rng& rng);

/// Local refinement of a decomposition against the target moments:
/// Levenberg-damped Gauss-Newton on the atom coordinates (tangent steps on
/// sphere factors) with weights refit each iteration.
void polish_decomposition(Decomposition& dec, const Tms& target, const SemialgebraicSet& set,
                          int max_iters = 60);

/// Recomputes the target moments from the atoms; ok iff the largest
/// deviation is within tol, every weight is positive, and every atom lies
/// in K (membership tolerance 1e-6).
std::pair<bool, double> verify_decomposition(const Decomposition& dec, const Tms& target,
                                             const SemialgebraicSet& set, double tol);

struct ProductStateTerm {
  double weight = 0.0;
  DensityMatrix state;
  bool projected = false;  // local block needed a PSD projection
};

/// Builds the product density matrix of each atom by expanding every class
/// block as (1/d)(I + sum_a y_a S_a) and tensoring per party.
std::vector<ProductStateTerm> decomposition_to_states(const Decomposition& dec, const PartitionSpec& spec);

/// Nonnegative least squares min ||A w - b|| s.t. w >= 0 (Lawson-Hanson).
Eigen::VectorXd nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iters = 200);

}  // namespace momentsep
