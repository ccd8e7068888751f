#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "momentsep/quantum.hpp"

namespace momentsep {

/// Counter-based generator (splitmix64 core): identical seeds reproduce
/// identical streams. Normals come from Box-Muller on the raw stream.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform01();
  double normal();
  std::complex<double> complex_normal() {
    double re = normal();
    double im = normal();
    return {re, im};
  }
  /// Uniform integer in [0, bound).
  uint64_t uniform_below(uint64_t bound);

 private:
  uint64_t state_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

/// rho = G G^dag / tr(G G^dag) with G a dim x rank standard complex
/// Ginibre matrix.
DensityMatrix haar_random_state(int dim, int rank, Rng& rng);

/// Uniform point on the unit 2-sphere.
Eigen::Vector3d random_bloch_vector(Rng& rng);

/// Weighted Bloch-vector mixture backing the random separable symmetric
/// ensemble; weights are normalized i.i.d. exponentials.
struct BlochMixture {
  std::vector<double> weights;
  std::vector<Eigen::Vector3d> vectors;
};
BlochMixture random_bloch_mixture(int m, Rng& rng);

/// Mixture of m random coherent product states (|psi_i><psi_i|)^{x N};
/// separable by construction and supported on the symmetric subspace.
DensityMatrix random_separable_symmetric(int num_qubits, int m, Rng& rng);

/// Independent local states tensored per the partition; symmetry classes
/// reuse one local state for all their parties, purity flags select pure
/// (rank 1) vs full-rank local states.
DensityMatrix random_product_state(const PartitionSpec& spec, Rng& rng);

/// Haar-type random state supported on the symmetric subspace of N qubits
/// (Ginibre in the Dicke basis), embedded in the full 2^N space.
DensityMatrix haar_random_symmetric(int num_qubits, int rank, Rng& rng);

/// Same ensemble, returned directly as a Dicke-basis (N+1)x(N+1) matrix.
Eigen::MatrixXcd haar_random_symmetric_dicke(int num_qubits, int rank, Rng& rng);

/// Mixture size used in the experiments: 25 for N <= 6, 45 above.
int default_mixture_size(int num_qubits);

}  // namespace momentsep
