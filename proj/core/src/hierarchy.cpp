#include "momentsep/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "momentsep/errors.hpp"

namespace momentsep {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double atom_power(const std::vector<double>& point, const MultiIndex& alpha) {
  double v = 1.0;
  for (int i = 0; i < alpha.size(); ++i) {
    for (int p = 0; p < alpha[i]; ++p) v *= point[static_cast<size_t>(i)];
  }
  return v;
}

// Variable blocks of sphere-type EQ constraints s*(sum_{i in B} x_i^2 - 1),
// used to keep polished atoms on their spheres.
std::vector<std::vector<int>> sphere_blocks(const SemialgebraicSet& set) {
  std::vector<std::vector<int>> blocks;
  for (const auto& [g, rel] : set.constraints) {
    if (rel != Relation::EQ) continue;
    std::vector<int> vars;
    double quad_coef = 0.0;
    double const_coef = 0.0;
    bool pattern = true;
    for (const auto& [a, coef] : g.terms()) {
      if (a.degree() == 0) {
        const_coef = coef;
        continue;
      }
      int var = -1;
      bool square = a.degree() == 2;
      for (int i = 0; i < a.size() && square; ++i) {
        if (a[i] == 2 && var == -1) {
          var = i;
        } else if (a[i] != 0) {
          square = false;
        }
      }
      if (!square || var < 0) {
        pattern = false;
        break;
      }
      if (quad_coef == 0.0) quad_coef = coef;
      if (coef != quad_coef) {
        pattern = false;
        break;
      }
      vars.push_back(var);
    }
    if (pattern && !vars.empty() && quad_coef != 0.0 && std::abs(const_coef + quad_coef) < 1e-12)
      blocks.push_back(vars);
  }
  return blocks;
}

void project_to_spheres(std::vector<double>& point, const std::vector<std::vector<int>>& blocks) {
  for (const auto& blk : blocks) {
    double nrm2 = 0.0;
    for (int i : blk) nrm2 += point[static_cast<size_t>(i)] * point[static_cast<size_t>(i)];
    double nrm = std::sqrt(nrm2);
    if (nrm < 1e-12) continue;
    for (int i : blk) point[static_cast<size_t>(i)] /= nrm;
  }
}

}  // namespace

int k0_of(const Tms& y) { return y.degree / 2 + 1; }

Polynomial random_sos_objective(int n, int k0, Rng& rng) {
  std::vector<MultiIndex> basis = monomial_basis(n, k0);
  size_t s = basis.size();
  Polynomial sum = Polynomial::zero(n);
  for (size_t q = 0; q < s; ++q) {
    Polynomial poly(n);
    for (const MultiIndex& a : basis) poly.add_term(a, rng.normal());
    sum = sum + poly * poly;
  }
  return sum;
}

SdpProblem build_relaxation(const Tms& y, const SemialgebraicSet& set, int k, const Polynomial& objective) {
  if (set.n != y.n) throw std::invalid_argument("build_relaxation: variable count mismatch");
  if (k < k0_of(y)) throw std::invalid_argument("build_relaxation: order below k0");
  if (objective.num_vars() != y.n) throw std::invalid_argument("build_relaxation: objective variable mismatch");
  if (objective.degree() > 2 * k) throw std::invalid_argument("build_relaxation: objective degree exceeds 2k");

  std::vector<MultiIndex> vars = monomial_basis(y.n, 2 * k);
  std::map<MultiIndex, int, DegLexLess> index;
  for (size_t i = 0; i < vars.size(); ++i) index.emplace(vars[i], static_cast<int>(i));
  int m = static_cast<int>(vars.size());

  SdpProblem prob;
  prob.num_vars = m;
  prob.objective = VectorXd::Zero(m);
  for (const auto& [a, coef] : objective.terms()) prob.objective(index.at(a)) += coef;

  for (const auto& [alpha, value] : y.values) {
    if (alpha.degree() > y.degree)
      throw IntegrityError("build_relaxation: support index above declared degree");
    prob.equalities.emplace_back(index.at(alpha), value);
  }

  auto make_moment_block = [&](int order, const Polynomial* g) {
    std::vector<MultiIndex> basis = monomial_basis(y.n, order);
    int s = static_cast<int>(basis.size());
    SdpBlock blk;
    blk.mats.assign(static_cast<size_t>(m) + 1, MatrixXd::Zero(s, s));
    for (int i = 0; i < s; ++i) {
      for (int j = i; j < s; ++j) {
        MultiIndex ab = basis[static_cast<size_t>(i)] + basis[static_cast<size_t>(j)];
        if (g == nullptr) {
          int v = index.at(ab);
          blk.mats[static_cast<size_t>(v) + 1](i, j) += 1.0;
          if (i != j) blk.mats[static_cast<size_t>(v) + 1](j, i) += 1.0;
        } else {
          for (const auto& [gamma, coef] : g->terms()) {
            int v = index.at(ab + gamma);
            blk.mats[static_cast<size_t>(v) + 1](i, j) += coef;
            if (i != j) blk.mats[static_cast<size_t>(v) + 1](j, i) += coef;
          }
        }
      }
    }
    return blk;
  };

  prob.blocks.push_back(make_moment_block(k, nullptr));
  for (const auto& [g, rel] : set.constraints) {
    int dg = constraint_half_degree(g);
    if (k - dg < 0) throw std::invalid_argument("build_relaxation: order too small for a constraint degree");
    if (rel == Relation::GEQ) {
      prob.blocks.push_back(make_moment_block(k - dg, &g));
    } else {
      // Localizing matrix of an equality constraint is pinned to zero:
      // one linear equation per distinct entry sum.
      for (const MultiIndex& s : monomial_basis(y.n, 2 * (k - dg))) {
        LinearEquation eq;
        for (const auto& [gamma, coef] : g.terms()) eq.coeffs.emplace_back(index.at(s + gamma), coef);
        eq.rhs = 0.0;
        prob.linear_equations.push_back(std::move(eq));
      }
    }
  }
  return prob;
}

Eigen::VectorXd nnls(const MatrixXd& a, const VectorXd& b, int max_iters) {
  int n = static_cast<int>(a.cols());
  VectorXd x = VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<size_t>(n), false);
  VectorXd w = a.transpose() * (b - a * x);
  int iter = 0;
  const double tol = 1e-12 * std::max(1.0, b.norm());
  while (iter++ < max_iters) {
    int best = -1;
    double best_w = tol;
    for (int i = 0; i < n; ++i) {
      if (!passive[static_cast<size_t>(i)] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    }
    if (best < 0) break;
    passive[static_cast<size_t>(best)] = true;
    while (true) {
      std::vector<int> idx;
      for (int i = 0; i < n; ++i)
        if (passive[static_cast<size_t>(i)]) idx.push_back(i);
      MatrixXd ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
      for (size_t j = 0; j < idx.size(); ++j) ap.col(static_cast<Eigen::Index>(j)) = a.col(idx[j]);
      VectorXd zp = ap.colPivHouseholderQr().solve(b);
      bool all_pos = true;
      for (Eigen::Index j = 0; j < zp.size(); ++j)
        if (zp(j) <= 0) all_pos = false;
      if (all_pos) {
        x.setZero();
        for (size_t j = 0; j < idx.size(); ++j) x(idx[j]) = zp(static_cast<Eigen::Index>(j));
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < idx.size(); ++j) {
        if (zp(static_cast<Eigen::Index>(j)) <= 0) {
          double xi = x(idx[j]);
          alpha = std::min(alpha, xi / (xi - zp(static_cast<Eigen::Index>(j))));
        }
      }
      for (size_t j = 0; j < idx.size(); ++j) {
        double nv = x(idx[j]) + alpha * (zp(static_cast<Eigen::Index>(j)) - x(idx[j]));
        x(idx[j]) = nv;
        if (nv <= 1e-14) passive[static_cast<size_t>(idx[j])] = false;
      }
    }
    w = a.transpose() * (b - a * x);
  }
  return x;
}

Decomposition extract_atoms(const Tms& z, int k, double rank_tol, Rng& rng) {
  MomentMatrix mm = moment_matrix(z, k);
  int s = static_cast<int>(mm.basis.size());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(mm.mat);
  double lmax = std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1.0);
  int r = 0;
  for (int i = 0; i < s; ++i)
    if (es.eigenvalues()(i) > rank_tol * lmax) ++r;
  if (r == 0) throw ExtractionError("extract_atoms: moment matrix has numerical rank 0");

  MatrixXd v(s, r);
  for (int i = 0; i < r; ++i) {
    int col = s - 1 - i;  // eigenvalues ascend
    v.col(i) = es.eigenvectors().col(col) * std::sqrt(es.eigenvalues()(col));
  }

  // Greedy column echelon over rows in degree-lex order: the first r
  // independent rows form the monomial basis of the quotient.
  std::vector<int> pivots;
  MatrixXd q(r, 0);
  double piv_tol = 1e-8 * std::max(1.0, v.norm());
  for (int row = 0; row < s && static_cast<int>(pivots.size()) < r; ++row) {
    VectorXd rv = v.row(row).transpose();
    VectorXd resid = rv - q * (q.transpose() * rv);
    if (resid.norm() > piv_tol) {
      pivots.push_back(row);
      MatrixXd nq(r, q.cols() + 1);
      nq.leftCols(q.cols()) = q;
      nq.col(q.cols()) = resid / resid.norm();
      q = std::move(nq);
    }
  }
  if (static_cast<int>(pivots.size()) < r)
    throw ExtractionError("extract_atoms: could not find a full monomial basis");

  MatrixXd vb(r, r);
  for (int j = 0; j < r; ++j) vb.row(j) = v.row(pivots[static_cast<size_t>(j)]);
  MatrixXd coords = vb.transpose().partialPivLu().solve(v.transpose()).transpose();  // s x r

  std::map<MultiIndex, int, DegLexLess> row_of;
  for (int i = 0; i < s; ++i) row_of.emplace(mm.basis[static_cast<size_t>(i)], i);

  int n = z.n;
  std::vector<MatrixXd> mult(static_cast<size_t>(n), MatrixXd::Zero(r, r));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) {
      MultiIndex shifted = mm.basis[static_cast<size_t>(pivots[static_cast<size_t>(j)])] + MultiIndex::unit(n, i);
      auto it = row_of.find(shifted);
      if (it == row_of.end()) throw ExtractionError("extract_atoms: pivot basis leaves the degree range");
      mult[static_cast<size_t>(i)].row(j) = coords.row(it->second);
    }
  }

  // Joint diagonalization via the real Schur form of a random convex
  // combination; complex pairs mean a defective combination, retried with
  // fresh coefficients.
  std::vector<std::vector<double>> points;
  bool ok = false;
  for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
    VectorXd lam(n);
    for (int i = 0; i < n; ++i) lam(i) = std::abs(rng.normal()) + 1e-3;
    lam /= lam.sum();
    MatrixXd comb = MatrixXd::Zero(r, r);
    for (int i = 0; i < n; ++i) comb += lam(i) * mult[static_cast<size_t>(i)];
    Eigen::RealSchur<MatrixXd> schur(comb);
    if (schur.info() != Eigen::Success) continue;
    const MatrixXd& t = schur.matrixT();
    double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
    bool real_spectrum = true;
    for (int i = 0; i + 1 < r; ++i)
      if (std::abs(t(i + 1, i)) > 1e-7 * scale) real_spectrum = false;
    if (!real_spectrum) continue;
    const MatrixXd& u = schur.matrixU();
    points.clear();
    for (int j = 0; j < r; ++j) {
      VectorXd col = u.col(j);
      std::vector<double> pt(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) pt[static_cast<size_t>(i)] = col.dot(mult[static_cast<size_t>(i)] * col);
      points.push_back(std::move(pt));
    }
    ok = true;
  }
  if (!ok) throw ExtractionError("extract_atoms: defective eigenstructure after 5 retries");

  // Weights: degree <= 1 system first, then least squares over every stored
  // moment, then nonnegativity.
  std::vector<MultiIndex> low = monomial_basis(n, 1);
  MatrixXd a1(static_cast<Eigen::Index>(low.size()), r);
  VectorXd b1(static_cast<Eigen::Index>(low.size()));
  for (size_t i = 0; i < low.size(); ++i) {
    b1(static_cast<Eigen::Index>(i)) = z.at(low[i]);
    for (int j = 0; j < r; ++j)
      a1(static_cast<Eigen::Index>(i), j) = atom_power(points[static_cast<size_t>(j)], low[i]);
  }
  VectorXd w = a1.colPivHouseholderQr().solve(b1);

  std::vector<MultiIndex> all;
  all.reserve(z.values.size());
  for (const auto& [alpha, val] : z.values) all.push_back(alpha);
  MatrixXd af(static_cast<Eigen::Index>(all.size()), r);
  VectorXd bf(static_cast<Eigen::Index>(all.size()));
  for (size_t i = 0; i < all.size(); ++i) {
    bf(static_cast<Eigen::Index>(i)) = z.at(all[i]);
    for (int j = 0; j < r; ++j)
      af(static_cast<Eigen::Index>(i), j) = atom_power(points[static_cast<size_t>(j)], all[i]);
  }
  w = nnls(af, bf);

  Decomposition dec;
  double total = 0.0;
  for (int j = 0; j < r; ++j) {
    if (w(j) < 1e-10) continue;
    dec.atoms.push_back({w(j), points[static_cast<size_t>(j)]});
    total += w(j);
  }
  if (dec.atoms.empty()) throw ExtractionError("extract_atoms: all weights vanished");
  MultiIndex zero = MultiIndex::zero(n);
  if (z.has(zero) && total > 0) {
    double target = z.at(zero);
    for (auto& atom : dec.atoms) atom.weight *= target / total;
  }
  return dec;
}

void polish_decomposition(Decomposition& dec, const Tms& target, const SemialgebraicSet& set, int max_iters) {
  if (dec.atoms.empty()) return;
  int n = target.n;
  int r = static_cast<int>(dec.atoms.size());
  std::vector<std::vector<int>> spheres = sphere_blocks(set);

  std::vector<MultiIndex> alphas;
  alphas.reserve(target.values.size());
  VectorXd b(static_cast<Eigen::Index>(target.values.size()));
  {
    Eigen::Index i = 0;
    for (const auto& [alpha, val] : target.values) {
      alphas.push_back(alpha);
      b(i++) = val;
    }
  }
  Eigen::Index m = b.size();

  std::vector<std::vector<double>> pts;
  for (auto& atom : dec.atoms) {
    project_to_spheres(atom.point, spheres);
    pts.push_back(atom.point);
  }

  auto fill_system = [&](const std::vector<std::vector<double>>& p, MatrixXd& a) {
    for (Eigen::Index i = 0; i < m; ++i)
      for (int j = 0; j < r; ++j) a(i, j) = atom_power(p[static_cast<size_t>(j)], alphas[static_cast<size_t>(i)]);
  };

  MatrixXd a(m, r);
  fill_system(pts, a);
  VectorXd w = a.colPivHouseholderQr().solve(b).cwiseMax(0.0);
  double fnorm = (a * w - b).norm();
  double damping = 1e-10;

  for (int iter = 0; iter < max_iters && fnorm > 1e-13; ++iter) {
    VectorXd resid = a * w - b;
    // Jacobian of the residual w.r.t. atom coordinates, radial directions
    // projected out on sphere blocks.
    MatrixXd jac = MatrixXd::Zero(m, static_cast<Eigen::Index>(n) * r);
    for (Eigen::Index i = 0; i < m; ++i) {
      const MultiIndex& alpha = alphas[static_cast<size_t>(i)];
      for (int j = 0; j < r; ++j) {
        for (int v = 0; v < n; ++v) {
          if (alpha[v] == 0) continue;
          std::vector<int> e = alpha.exponents();
          e[static_cast<size_t>(v)] -= 1;
          jac(i, static_cast<Eigen::Index>(n) * j + v) =
              w(j) * alpha[v] * atom_power(pts[static_cast<size_t>(j)], MultiIndex(e));
        }
      }
    }
    for (int j = 0; j < r; ++j) {
      for (const auto& blk : spheres) {
        VectorXd normal = VectorXd::Zero(static_cast<Eigen::Index>(blk.size()));
        for (size_t bi = 0; bi < blk.size(); ++bi)
          normal(static_cast<Eigen::Index>(bi)) = pts[static_cast<size_t>(j)][static_cast<size_t>(blk[bi])];
        if (normal.norm() < 1e-12) continue;
        normal.normalize();
        MatrixXd cols(m, static_cast<Eigen::Index>(blk.size()));
        for (size_t bi = 0; bi < blk.size(); ++bi)
          cols.col(static_cast<Eigen::Index>(bi)) = jac.col(static_cast<Eigen::Index>(n) * j + blk[bi]);
        VectorXd radial = cols * normal;
        for (size_t bi = 0; bi < blk.size(); ++bi)
          jac.col(static_cast<Eigen::Index>(n) * j + blk[bi]) -= radial * normal(static_cast<Eigen::Index>(bi));
      }
    }

    MatrixXd h = jac.transpose() * jac;
    h.diagonal().array() += damping;
    VectorXd g = jac.transpose() * resid;
    VectorXd step = h.ldlt().solve(g);

    std::vector<std::vector<double>> trial = pts;
    for (int j = 0; j < r; ++j)
      for (int v = 0; v < n; ++v)
        trial[static_cast<size_t>(j)][static_cast<size_t>(v)] -= step(static_cast<Eigen::Index>(n) * j + v);
    for (auto& p : trial) project_to_spheres(p, spheres);

    MatrixXd at(m, r);
    fill_system(trial, at);
    VectorXd wt = at.colPivHouseholderQr().solve(b).cwiseMax(0.0);
    double ft = (at * wt - b).norm();
    if (ft < fnorm) {
      pts = std::move(trial);
      a = std::move(at);
      w = std::move(wt);
      fnorm = ft;
      damping = std::max(damping * 0.3, 1e-12);
    } else {
      damping = std::min(damping * 10.0, 1e6);
    }
  }

  VectorXd wf = nnls(a, b);
  Decomposition out;
  out.partition = dec.partition;
  double total = 0.0;
  for (int j = 0; j < r; ++j) {
    if (wf(j) < 1e-10) continue;
    out.atoms.push_back({wf(j), pts[static_cast<size_t>(j)]});
    total += wf(j);
  }
  MultiIndex zero = MultiIndex::zero(n);
  if (!out.atoms.empty() && target.has(zero) && total > 0 && std::abs(target.at(zero) - 1.0) < 1e-9) {
    for (auto& atom : out.atoms) atom.weight /= total;
  }
  if (!out.atoms.empty()) dec = std::move(out);
}

std::pair<bool, double> verify_decomposition(const Decomposition& dec, const Tms& target,
                                             const SemialgebraicSet& set, double tol) {
  double max_err = 0.0;
  for (const auto& [alpha, val] : target.values) {
    double rec = 0.0;
    for (const auto& atom : dec.atoms) rec += atom.weight * atom_power(atom.point, alpha);
    max_err = std::max(max_err, std::abs(rec - val));
  }
  bool ok = max_err <= tol;
  for (const auto& atom : dec.atoms) {
    if (atom.weight <= 0) ok = false;
    if (!membership(atom.point, set, 1e-6)) ok = false;
  }
  return {ok, max_err};
}

std::vector<ProductStateTerm> decomposition_to_states(const Decomposition& dec, const PartitionSpec& spec) {
  spec.validate();
  std::vector<ProductStateTerm> out;
  std::vector<LocalBasis> bases;
  for (int c = 0; c < spec.num_classes(); ++c) bases.push_back(standard_basis(spec.class_dim(c)));

  for (const auto& atom : dec.atoms) {
    if (static_cast<int>(atom.point.size()) != spec.total_vars())
      throw std::invalid_argument("decomposition_to_states: atom dimension mismatch");
    ProductStateTerm term;
    term.weight = atom.weight;
    std::vector<Eigen::MatrixXcd> class_states;
    for (int c = 0; c < spec.num_classes(); ++c) {
      int d = spec.class_dim(c);
      int off = spec.class_var_offset(c);
      Eigen::MatrixXcd local = Eigen::MatrixXcd::Identity(d, d);
      for (int a = 0; a < spec.class_var_count(c); ++a)
        local += atom.point[static_cast<size_t>(off + a)] * bases[static_cast<size_t>(c)].ops[static_cast<size_t>(a) + 1];
      local /= static_cast<double>(d);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(local);
      double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      if (es.eigenvalues().minCoeff() < -1e-9 * scale) {
        Eigen::VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
        double tr = clipped.sum();
        if (tr < 1e-12) throw std::invalid_argument("decomposition_to_states: local block collapsed");
        local = es.eigenvectors() * (clipped / tr).asDiagonal() * es.eigenvectors().adjoint();
        term.projected = true;
      }
      class_states.push_back(local);
    }
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < spec.num_parties(); ++q) {
      const Eigen::MatrixXcd& loc = class_states[static_cast<size_t>(spec.class_of_party(q))];
      Eigen::MatrixXcd next(rho.rows() * loc.rows(), rho.cols() * loc.cols());
      for (int i = 0; i < rho.rows(); ++i)
        for (int j = 0; j < rho.cols(); ++j)
          next.block(i * loc.rows(), j * loc.cols(), loc.rows(), loc.cols()) = rho(i, j) * loc;
      rho = std::move(next);
    }
    term.state.mat = std::move(rho);
    term.state.factor_dims = spec.parties;
    out.push_back(std::move(term));
  }
  return out;
}

SeparabilityCertificate run_hierarchy(const Tms& y, const SemialgebraicSet& set,
                                      const HierarchyOptions& opts,
                                      const std::optional<PartitionSpec>& spec) {
  SeparabilityCertificate cert;
  cert.k0 = k0_of(y);
  cert.d0 = flatness_offset(set);
  int k_max = opts.k_max < 0 ? cert.k0 + 2 : opts.k_max;
  if (k_max < cert.k0) throw std::invalid_argument("run_hierarchy: k_max below k0");
  if (opts.objectives_per_order < 1) throw std::invalid_argument("run_hierarchy: need at least one objective");

  Rng rng(opts.seed);
  // The objectives are drawn once at k0 and reused unchanged at every order.
  std::vector<Polynomial> objectives;
  for (int j = 0; j < opts.objectives_per_order; ++j)
    objectives.push_back(random_sos_objective(y.n, cert.k0, rng));

  for (int k = cert.k0; k <= k_max; ++k) {
    for (int j = 0; j < opts.objectives_per_order; ++j) {
      AttemptLog log;
      log.k = k;
      log.objective_index = j;
      SdpProblem prob;
      SdpSolution sol;
      try {
        prob = build_relaxation(y, set, k, objectives[static_cast<size_t>(j)]);
        sol = solve(prob, opts.solver);
      } catch (const IntegrityError&) {
        throw;
      } catch (const std::exception& e) {
        log.outcome = std::string("error: ") + e.what();
        cert.diagnostics.push_back(log);
        continue;
      }
      log.solver_iterations = sol.iterations;
      log.solver_gap = sol.residuals.gap;

      if (sol.status == SdpStatus::INFEASIBLE) {
        if (verify_infeasibility_certificate(prob, sol.dual_blocks)) {
          log.outcome = "infeasible (certificate verified)";
          cert.diagnostics.push_back(log);
          cert.verdict = Verdict::ENTANGLED;
          cert.order_k = k;
          cert.witness = InfeasibilityWitness{k, sol.dual_blocks};
          cert.message = "relaxation infeasible at order " + std::to_string(k);
          return cert;
        }
        log.outcome = "solver claimed infeasible but certificate failed verification";
        cert.diagnostics.push_back(log);
        continue;
      }
      if (sol.status == SdpStatus::INCONCLUSIVE) {
        log.outcome = "solver inconclusive: " + sol.message;
        cert.diagnostics.push_back(log);
        continue;
      }

      Tms ext;
      ext.n = y.n;
      ext.degree = 2 * k;
      {
        std::vector<MultiIndex> vars = monomial_basis(y.n, 2 * k);
        for (size_t i = 0; i < vars.size(); ++i)
          ext.values.emplace(vars[i], sol.primal(static_cast<Eigen::Index>(i)));
      }
      log.rank_high = numerical_rank(moment_matrix(ext, k).mat, opts.rank_tol);
      log.rank_low = numerical_rank(moment_matrix(ext, k - cert.d0).mat, opts.rank_tol);
      if (log.rank_high != log.rank_low) {
        log.outcome = "feasible, not flat";
        cert.diagnostics.push_back(log);
        continue;
      }

      try {
        Decomposition dec = extract_atoms(ext, k, opts.rank_tol, rng);
        dec.partition = spec;
        polish_decomposition(dec, y, set);
        auto [ok, err] = verify_decomposition(dec, y, set, opts.verify_tol);
        if (ok) {
          log.outcome = "flat extension; decomposition verified";
          cert.diagnostics.push_back(log);
          cert.verdict = Verdict::SEPARABLE;
          cert.order_k = k;
          cert.decomposition = std::move(dec);
          cert.message = "flat extension at order " + std::to_string(k) + " with " +
                         std::to_string(cert.decomposition->atoms.size()) + " atoms";
          return cert;
        }
        log.outcome = "flat but decomposition verification failed (err " + std::to_string(err) + ")";
      } catch (const ExtractionError& e) {
        log.outcome = std::string("extraction failed: ") + e.what();
      }
      cert.diagnostics.push_back(log);
    }
  }
  cert.verdict = Verdict::INCONCLUSIVE;
  cert.order_k = k_max;
  cert.message = "no verified certificate up to order " + std::to_string(k_max);
  return cert;
}

}  // namespace momentsep
