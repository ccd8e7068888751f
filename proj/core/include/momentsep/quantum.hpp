#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "momentsep/multi_index.hpp"
#include "momentsep/polynomial.hpp"

namespace momentsep {

/// Relation of a polynomial constraint to zero.
enum class Relation { GEQ, EQ };

/// Complex Hermitian unit-trace matrix on a factored Hilbert space.
struct DensityMatrix {
  Eigen::MatrixXcd mat;
  std::vector<int> factor_dims;

  int dim() const { return static_cast<int>(mat.rows()); }
};

/// Throws std::invalid_argument if the matrix violates the density-matrix
/// invariants: Hermitian within herm_tol, unit trace within trace_tol,
/// eigenvalues >= -eig_tol, and factor dims consistent with the size.
void validate_density_matrix(const DensityMatrix& rho, double herm_tol = 1e-12,
                             double trace_tol = 1e-12, double eig_tol = 1e-10);

/// Orthogonal Hermitian operator basis of a local space, S_0 = identity,
/// normalized so that tr(S_mu S_nu) = dim * delta_{mu nu}.
struct LocalBasis {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> ops;
};

/// Pauli basis for dim 2; identity plus rescaled generalized Gell-Mann
/// matrices for dim >= 3.
LocalBasis standard_basis(int dim);

/// How the parties of a multipartite system are grouped: parties within one
/// symmetry class share their local variables; the purity flag of a class
/// selects pure-state (equality) vs mixed-state (inequality) local
/// constraints. `known_support` optionally restricts the set of fixed
/// moment indices (absent means all admissible indices are known).
struct PartitionSpec {
  std::vector<int> parties;
  std::vector<std::vector<int>> symmetry_classes;
  std::vector<bool> purity_flags;
  std::optional<std::vector<MultiIndex>> known_support;

  /// N qubits in a single symmetric class.
  static PartitionSpec symmetric_qubits(int num_qubits, bool pure = true);
  /// Distinguishable parties, one class each, the same purity flag for all.
  static PartitionSpec distinct_parties(std::vector<int> dims, bool pure = true);

  void validate() const;
  /// Sorts class members and orders classes by smallest member.
  void canonicalize();

  int num_parties() const { return static_cast<int>(parties.size()); }
  int num_classes() const { return static_cast<int>(symmetry_classes.size()); }
  int class_of_party(int party) const;
  int class_dim(int cls) const;
  /// Number of local variables of a class: dim^2 - 1.
  int class_var_count(int cls) const { return class_dim(cls) * class_dim(cls) - 1; }
  int class_var_offset(int cls) const;
  int total_vars() const;
  /// Degree of the induced truncated moment sequence (= number of parties).
  int tms_degree() const { return num_parties(); }
};

/// Real coordinate tensor X_{mu_1..mu_p} of a state in the product operator
/// basis. Keys are canonical mu tuples (entries sorted within each symmetry
/// class); X_{0..0} = 1 for a unit-trace state.
struct StateTensor {
  PartitionSpec partition;
  std::map<std::vector<int>, double> coords;

  std::vector<int> canonical_mu(std::vector<int> mu) const;
  double at(const std::vector<int>& mu) const;
  /// Canonicalizes the key; colliding entries that disagree beyond 1e-10
  /// raise IntegrityError.
  void set(std::vector<int> mu, double value);
};

struct StateTensorResult {
  StateTensor tensor;
  /// Set when the input had weight outside the symmetric subspace and was
  /// projected and renormalized.
  bool projected = false;
};

/// Pure Dicke state of `num_qubits` qubits with exactly `num_zeros` zeros,
/// normalized over distinct computational basis states.
Eigen::VectorXcd dicke_state(int num_qubits, int num_zeros);

/// Projector onto the symmetric subspace of `num_qubits` qubits
/// (rank num_qubits + 1).
Eigen::MatrixXcd symmetric_projector(int num_qubits);

/// Tensor coordinates of rho for the given partition. Inputs with support
/// outside the symmetric subspace of a multi-party class are projected and
/// renormalized (flagged in the result).
StateTensorResult state_to_tensor(const DensityMatrix& rho, const PartitionSpec& spec);

/// Inverse expansion rho = prod_i(1/d_i) sum_mu X_mu S_mu1 x ... x S_mup.
/// Positivity is
/// not checked: a tensor may encode a non-state.
DensityMatrix tensor_to_state(const StateTensor& tensor);

/// Tensor coordinates of a symmetric N-qubit state given directly in the
/// Dicke basis (rho_sym is (N+1)x(N+1)); avoids any 2^N-sized object.
StateTensor symmetric_tensor_from_dicke(const Eigen::MatrixXcd& rho_sym, int num_qubits);

/// Tensor of a mixture sum_i w_i |psi_i><psi_i|^{x N} of coherent product
/// states given by Bloch vectors; exact product form, no Hilbert space.
StateTensor tensor_from_bloch_mixture(const std::vector<double>& weights,
                                      const std::vector<Eigen::Vector3d>& bloch, int num_qubits);

/// Transposes the listed tensor factors (0-based party indices).
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, const std::vector<int>& subset);

struct PptResult {
  bool is_ppt = false;
  double min_eigenvalue = 0.0;
};

/// Partial transpose followed by an eigenvalue scan; PSD means
/// min eig >= -1e-9 * max(1, spectral norm).
PptResult ppt_check(const DensityMatrix& rho, const std::vector<int>& subset);

/// T_{mu,nu} = X_{mu_1..mu_k nu_1..nu_k} for a symmetric tensor of 2k
/// qubits; 4^k x 4^k real symmetric. Deleting recurring rows/columns yields
/// the moment matrix of order k.
Eigen::MatrixXd t_matrix(const StateTensor& tensor);

/// Polynomial constraints on the local coordinate vector y equivalent to
/// positivity of (1/dim)(I + sum_a y_a S_a): characteristic-polynomial
/// coefficients obtained from Newton's identities on tr rho^j. For qubits
/// the mixed case is the Bloch ball and the pure case the Bloch sphere.
/// Pure-state constraints are only available for dim 2.
std::vector<std::pair<Polynomial, Relation>> local_constraint_polynomials(int dim, bool pure);

/// 2^N x (N+1) isometry whose columns are the Dicke states.
Eigen::MatrixXcd dicke_basis(int num_qubits);

/// Enumerates all canonical mu tuples of a partition (entries sorted within
/// each symmetry class), in lexicographic order of the tuple.
std::vector<std::vector<int>> enumerate_canonical_mu(const PartitionSpec& spec);

}  // namespace momentsep
