#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>

#include "momentsep/hierarchy.hpp"
#include "momentsep/quantum.hpp"
#include "momentsep/tms.hpp"

namespace momentsep {

/// Necessary and sufficient separability condition for a symmetric
/// two-qubit sequence: M_1(y) PSD together with
/// y000 - y200 - y020 - y002 = 0 (both at 1e-9).
bool two_qubit_sym_nsc(const Tms& y);

/// The 8x8 Hermitian matrix whose positivity decides whether a degree-3
/// sequence on the unit sphere admits a representing measure (equivalently,
/// whether the symmetric three-qubit state is separable).
Eigen::MatrixXcd three_qubit_cns_matrix(const Tms& y);

/// PSD test of the matrix above at tolerance 1e-9.
bool three_qubit_sym_nsc(const Tms& y);

/// Sufficient condition for full separability of a symmetric N-qubit state:
/// positive partial transpose w.r.t. the first qubit and (N <= 3 or
/// rank <= N). Returns SEPARABLE or makes no claim.
std::optional<Verdict> ppt_rank_sufficient(const DensityMatrix& rho);

/// Constructive decomposition of a separable symmetric two-qubit sequence
/// into at most four unit-Bloch-vector atoms: eigen-split M_1(y) into
/// rank-one terms, then repeatedly rotate a sign-opposed pair so that one
/// member lands on the light cone Delta = 0 and peels off as an atom.
Decomposition two_qubit_four_atom_decomposition(const Tms& y);

/// (M_k(y) PSD, equal-bipartition partial transpose PSD) for a symmetric
/// tensor of 2k qubits; the two answers always coincide.
std::pair<bool, bool> moment_ppt_equivalence(const StateTensor& tensor);

}  // namespace momentsep
