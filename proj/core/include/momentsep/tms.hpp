#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "momentsep/multi_index.hpp"
#include "momentsep/polynomial.hpp"
#include "momentsep/quantum.hpp"

namespace momentsep {

/// Truncated moment sequence: moments y_alpha on a declared support set of
/// multi-indices with |alpha| <= degree, over n variables. Absent indices
/// are representable (support-restricted sequences).
struct Tms {
  int n = 0;
  int degree = 0;
  std::map<MultiIndex, double, DegLexLess> values;

  bool has(const MultiIndex& alpha) const { return values.count(alpha) > 0; }
  /// Throws IncompleteTmsError if the moment is absent.
  double at(const MultiIndex& alpha) const;
};

struct MomentMatrix {
  int order = 0;
  std::vector<MultiIndex> basis;
  Eigen::MatrixXd mat;
};

/// Maps a tensor index tuple to the exponent vector of the corresponding
/// monomial: occurrences of each local variable are counted, with parties of
/// one symmetry class pooled into the same variable block.
MultiIndex mu_to_alpha(const std::vector<int>& mu, const PartitionSpec& spec);

/// Converts tensor coordinates to the induced moment sequence. Colliding
/// tuples (symmetric fibers) must carry equal values; the support is
/// restricted to the partition's known_support when present.
Tms tensor_to_tms(const StateTensor& tensor);

/// M_k(z) with entries z_{alpha+beta} over the degree-k monomial basis.
MomentMatrix moment_matrix(const Tms& z, int k);

/// Shifted sequence (g * z)_alpha = sum_gamma g_gamma z_{alpha+gamma} of
/// degree z.degree - deg(g); requires 1 <= deg(g) <= z.degree.
Tms shifted_tms(const Polynomial& g, const Tms& z);

/// kth-order localizing matrix of g: the moment matrix of order k - d_g of
/// the shifted sequence, d_g = ceil(deg(g)/2).
MomentMatrix localizing_matrix(const Polynomial& g, const Tms& z, int k);

/// Count of singular values exceeding tol * max(sigma_max, 1).
int numerical_rank(const Eigen::MatrixXd& m, double tol);

/// rank M_k(z) == rank M_{k-d0}(z) at the given tolerance.
bool flatness_check(const Tms& z, int k, int d0, double tol);

}  // namespace momentsep
