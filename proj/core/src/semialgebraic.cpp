#include "momentsep/semialgebraic.hpp"

#include <cmath>
#include <stdexcept>

namespace momentsep {

SemialgebraicSet unit_sphere() {
  SemialgebraicSet k;
  k.n = 3;
  Polynomial g(3);
  for (int i = 0; i < 3; ++i) g.add_term(MultiIndex::unit(3, i) + MultiIndex::unit(3, i), 1.0);
  g.add_term(MultiIndex::zero(3), -1.0);
  k.constraints.emplace_back(std::move(g), Relation::EQ);
  return k;
}

SemialgebraicSet from_local_constraints(int dim, bool pure) {
  SemialgebraicSet k;
  k.n = dim * dim - 1;
  k.constraints = local_constraint_polynomials(dim, pure);
  return k;
}

SemialgebraicSet product(std::span<const SemialgebraicSet> sets) {
  if (sets.empty()) throw std::invalid_argument("product: need at least one set");
  SemialgebraicSet out;
  out.n = 0;
  for (const auto& s : sets) out.n += s.n;
  int offset = 0;
  for (const auto& s : sets) {
    for (const auto& [g, rel] : s.constraints)
      out.constraints.emplace_back(g.shift_variables(offset, out.n), rel);
    offset += s.n;
  }
  return out;
}

SemialgebraicSet from_partition(const PartitionSpec& spec) {
  spec.validate();
  std::vector<SemialgebraicSet> factors;
  for (int c = 0; c < spec.num_classes(); ++c)
    factors.push_back(from_local_constraints(spec.class_dim(c), spec.purity_flags[static_cast<size_t>(c)]));
  return product(factors);
}

bool membership(std::span<const double> x, const SemialgebraicSet& set, double tol) {
  if (static_cast<int>(x.size()) != set.n) throw std::invalid_argument("membership: wrong point size");
  for (const auto& [g, rel] : set.constraints) {
    double v = g.eval(x);
    if (rel == Relation::GEQ && v < -tol) return false;
    if (rel == Relation::EQ && std::abs(v) > tol) return false;
  }
  return true;
}

int constraint_half_degree(const Polynomial& g) { return (g.degree() + 1) / 2; }

int flatness_offset(const SemialgebraicSet& set) {
  int d0 = 1;
  for (const auto& [g, rel] : set.constraints) d0 = std::max(d0, constraint_half_degree(g));
  return d0;
}

}  // namespace momentsep
