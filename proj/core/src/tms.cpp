#include "momentsep/tms.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "momentsep/errors.hpp"

namespace momentsep {

double Tms::at(const MultiIndex& alpha) const {
  auto it = values.find(alpha);
  if (it == values.end()) throw IncompleteTmsError("Tms: moment " + alpha.to_string() + " not in support");
  return it->second;
}

MultiIndex mu_to_alpha(const std::vector<int>& mu, const PartitionSpec& spec) {
  if (static_cast<int>(mu.size()) != spec.num_parties())
    throw std::invalid_argument("mu_to_alpha: wrong tuple length");
  std::vector<int> alpha(static_cast<size_t>(spec.total_vars()), 0);
  for (int q = 0; q < spec.num_parties(); ++q) {
    int m = mu[static_cast<size_t>(q)];
    int c = spec.class_of_party(q);
    int t = spec.class_var_count(c);
    if (m < 0 || m > t) throw std::invalid_argument("mu_to_alpha: index out of range for party");
    if (m > 0) alpha[static_cast<size_t>(spec.class_var_offset(c) + m - 1)] += 1;
  }
  return MultiIndex(std::move(alpha));
}

Tms tensor_to_tms(const StateTensor& tensor) {
  const PartitionSpec& spec = tensor.partition;
  spec.validate();
  Tms y;
  y.n = spec.total_vars();
  y.degree = spec.tms_degree();

  std::set<MultiIndex, DegLexLess> allowed;
  if (spec.known_support) allowed.insert(spec.known_support->begin(), spec.known_support->end());

  for (const auto& [mu, value] : tensor.coords) {
    MultiIndex alpha = mu_to_alpha(mu, spec);
    if (spec.known_support && allowed.count(alpha) == 0) continue;
    auto [it, inserted] = y.values.emplace(alpha, value);
    if (!inserted && std::abs(it->second - value) > 1e-10)
      throw IntegrityError("tensor_to_tms: colliding tuples with unequal values at " + alpha.to_string());
  }
  return y;
}

MomentMatrix moment_matrix(const Tms& z, int k) {
  if (k < 0) throw std::invalid_argument("moment_matrix: negative order");
  if (2 * k > z.degree) throw std::invalid_argument("moment_matrix: order exceeds degree/2");
  MomentMatrix m;
  m.order = k;
  m.basis = monomial_basis(z.n, k);
  int s = static_cast<int>(m.basis.size());
  m.mat.resize(s, s);
  for (int i = 0; i < s; ++i) {
    for (int j = i; j < s; ++j) {
      double v = z.at(m.basis[static_cast<size_t>(i)] + m.basis[static_cast<size_t>(j)]);
      m.mat(i, j) = v;
      m.mat(j, i) = v;
    }
  }
  return m;
}

Tms shifted_tms(const Polynomial& g, const Tms& z) {
  if (g.num_vars() != z.n) throw std::invalid_argument("shifted_tms: variable count mismatch");
  int dg = g.degree();
  if (dg < 1) throw std::invalid_argument("shifted_tms: deg(g) >= 1 required");
  if (dg > z.degree) throw std::invalid_argument("shifted_tms: deg(g) exceeds sequence degree");
  Tms out;
  out.n = z.n;
  out.degree = z.degree - dg;
  for (const MultiIndex& alpha : monomial_basis(z.n, out.degree)) {
    double v = 0.0;
    for (const auto& [gamma, coef] : g.terms()) v += coef * z.at(alpha + gamma);
    out.values.emplace(alpha, v);
  }
  return out;
}

MomentMatrix localizing_matrix(const Polynomial& g, const Tms& z, int k) {
  int dg = (g.degree() + 1) / 2;
  if (k < dg) throw std::invalid_argument("localizing_matrix: k below ceil(deg(g)/2)");
  if (2 * k > z.degree) throw std::invalid_argument("localizing_matrix: k exceeds degree/2");
  Tms shifted = shifted_tms(g, z);
  MomentMatrix m = moment_matrix(shifted, k - dg);
  m.order = k - dg;
  return m;
}

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sigma = svd.singularValues();
  double cutoff = tol * std::max(sigma(0), 1.0);
  int r = 0;
  for (int i = 0; i < sigma.size(); ++i)
    if (sigma(i) > cutoff) ++r;
  return r;
}

bool flatness_check(const Tms& z, int k, int d0, double tol) {
  if (k - d0 < 0) throw std::invalid_argument("flatness_check: k - d0 must be nonnegative");
  int rk = numerical_rank(moment_matrix(z, k).mat, tol);
  int rlow = numerical_rank(moment_matrix(z, k - d0).mat, tol);
  return rk == rlow;
}

}  // namespace momentsep
