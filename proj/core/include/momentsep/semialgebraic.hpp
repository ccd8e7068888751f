#pragma once

#include <span>
#include <utility>
#include <vector>

#include "momentsep/polynomial.hpp"
#include "momentsep/quantum.hpp"

namespace momentsep {

/// Compact K = {x : g_i(x) >= 0 or g_i(x) = 0} described by polynomial
/// constraints.
struct SemialgebraicSet {
  int n = 0;
  std::vector<std::pair<Polynomial, Relation>> constraints;
};

/// Unit sphere in R^3: x1^2 + x2^2 + x3^2 - 1 = 0.
SemialgebraicSet unit_sphere();

/// Local state body of one party: wraps local_constraint_polynomials.
SemialgebraicSet from_local_constraints(int dim, bool pure);

/// Cartesian product; constraints re-indexed into disjoint variable blocks.
SemialgebraicSet product(std::span<const SemialgebraicSet> sets);

/// One factor per symmetry class of the partition, honoring purity flags.
SemialgebraicSet from_partition(const PartitionSpec& spec);

/// All GEQ constraints >= -tol and EQ constraints within +-tol.
bool membership(std::span<const double> x, const SemialgebraicSet& set, double tol = 1e-6);

/// d_g = ceil(deg(g)/2).
int constraint_half_degree(const Polynomial& g);

/// d0 = max_i max(1, ceil(deg(g_i)/2)); the rank-gap offset of the
/// flatness test.
int flatness_offset(const SemialgebraicSet& set);

}  // namespace momentsep
