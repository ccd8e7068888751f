#include "momentsep/sdp.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "momentsep/errors.hpp"

namespace momentsep {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

const double kSqrt2 = std::sqrt(2.0);

int svec_size(int n) { return n * (n + 1) / 2; }

// Symmetric vectorization with sqrt(2)-scaled off-diagonals, so that
// <svec(A), svec(B)> = tr(A B).
VectorXd svec(const MatrixXd& m) {
  int n = static_cast<int>(m.rows());
  VectorXd v(svec_size(n));
  int t = 0;
  for (int j = 0; j < n; ++j) {
    v(t++) = m(j, j);
    for (int i = j + 1; i < n; ++i) v(t++) = kSqrt2 * m(i, j);
  }
  return v;
}

MatrixXd smat(const VectorXd& v, int n) {
  MatrixXd m(n, n);
  int t = 0;
  for (int j = 0; j < n; ++j) {
    m(j, j) = v(t++);
    for (int i = j + 1; i < n; ++i) {
      double x = v(t++) / kSqrt2;
      m(i, j) = x;
      m(j, i) = x;
    }
  }
  return m;
}

double min_eig_sym(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Problem after exact elimination of fixed variables and general linear
// equations: z = z_part + basis * x with x free.
struct Reduced {
  int p = 0;
  VectorXd c;        // reduced objective
  double c0 = 0.0;   // constant objective contribution
  MatrixXd basis;    // m x p
  VectorXd z_part;   // m
  // Per block: h = svec(reduced A0), G = columns svec(-reduced A_i).
  std::vector<VectorXd> h;
  std::vector<MatrixXd> G;
  std::vector<int> sizes;
};

void validate_problem(const SdpProblem& prob) {
  if (prob.blocks.empty()) throw std::invalid_argument("SdpProblem: at least one block required");
  int m = prob.num_vars;
  if (m < 0) throw std::invalid_argument("SdpProblem: negative variable count");
  if (prob.objective.size() != m) throw std::invalid_argument("SdpProblem: objective size mismatch");
  for (const auto& blk : prob.blocks) {
    if (blk.mats.size() != static_cast<size_t>(m) + 1)
      throw std::invalid_argument("SdpProblem: block needs one matrix per variable plus the constant");
    int n = blk.size();
    if (n < 1) throw std::invalid_argument("SdpProblem: empty block");
    for (const auto& a : blk.mats) {
      if (a.rows() != n || a.cols() != n) throw std::invalid_argument("SdpProblem: block matrix size mismatch");
      double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
      if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw std::invalid_argument("SdpProblem: block matrix not symmetric");
    }
  }
  std::vector<bool> seen(static_cast<size_t>(m), false);
  for (const auto& [idx, val] : prob.equalities) {
    (void)val;
    if (idx < 0 || idx >= m) throw std::invalid_argument("SdpProblem: equality index out of range");
    if (seen[static_cast<size_t>(idx)]) throw std::invalid_argument("SdpProblem: duplicate equality index");
    seen[static_cast<size_t>(idx)] = true;
  }
  for (const auto& eq : prob.linear_equations) {
    for (const auto& [idx, coef] : eq.coeffs) {
      (void)coef;
      if (idx < 0 || idx >= m) throw std::invalid_argument("SdpProblem: equation index out of range");
    }
  }
}

Reduced reduce(const SdpProblem& prob) {
  validate_problem(prob);
  int m = prob.num_vars;
  int q = static_cast<int>(prob.equalities.size() + prob.linear_equations.size());

  Reduced red;
  if (q == 0) {
    red.p = m;
    red.z_part = VectorXd::Zero(m);
    red.basis = MatrixXd::Identity(m, m);
  } else {
    MatrixXd E = MatrixXd::Zero(q, m);
    VectorXd f = VectorXd::Zero(q);
    int r = 0;
    for (const auto& [idx, val] : prob.equalities) {
      E(r, idx) = 1.0;
      f(r) = val;
      ++r;
    }
    for (const auto& eq : prob.linear_equations) {
      for (const auto& [idx, coef] : eq.coeffs) E(r, idx) += coef;
      f(r) = eq.rhs;
      ++r;
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(E);
    red.z_part = qr.solve(f);
    double resid = (E * red.z_part - f).cwiseAbs().maxCoeff();
    if (resid > 1e-8 * std::max(1.0, f.cwiseAbs().maxCoeff()))
      throw IntegrityError("SdpProblem: equality constraints are inconsistent");
    int rank = static_cast<int>(qr.rank());
    if (rank == m) {
      red.p = 0;
      red.basis = MatrixXd::Zero(m, 0);
    } else {
      Eigen::ColPivHouseholderQR<MatrixXd> qrt(E.transpose());
      MatrixXd Q = qrt.householderQ() * MatrixXd::Identity(m, m);
      red.p = m - rank;
      red.basis = Q.rightCols(red.p);
    }
  }

  red.c = red.basis.transpose() * prob.objective;
  red.c0 = prob.objective.dot(red.z_part);

  for (const auto& blk : prob.blocks) {
    int n = blk.size();
    int sv = svec_size(n);
    MatrixXd stacked(sv, m);
    for (int i = 0; i < m; ++i) stacked.col(i) = svec(blk.mats[static_cast<size_t>(i) + 1]);
    VectorXd h = svec(blk.mats[0]);
    if (m > 0) h += stacked * red.z_part;
    red.h.push_back(std::move(h));
    red.G.push_back(-(stacked * red.basis));
    red.sizes.push_back(n);
  }
  return red;
}

// NT scaling of one block from the current slack S and dual W.
struct NtScaling {
  MatrixXd R;
  MatrixXd Rinv;
  VectorXd lambda;
};

NtScaling nt_scaling(const MatrixXd& S, const MatrixXd& W) {
  Eigen::LLT<MatrixXd> llt_s(S);
  Eigen::LLT<MatrixXd> llt_w(W);
  MatrixXd Ls, Lw;
  if (llt_s.info() == Eigen::Success) {
    Ls = llt_s.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(S);
    VectorXd ev = es.eigenvalues().cwiseMax(1e-14);
    Ls = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  }
  if (llt_w.info() == Eigen::Success) {
    Lw = llt_w.matrixL();
  } else {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(W);
    VectorXd ev = es.eigenvalues().cwiseMax(1e-14);
    Lw = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  }
  Eigen::JacobiSVD<MatrixXd> svd(Lw.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
  VectorXd sigma = svd.singularValues().cwiseMax(1e-150);
  NtScaling nt;
  nt.lambda = sigma;
  VectorXd isqrt = sigma.cwiseSqrt().cwiseInverse();
  nt.R = Ls * svd.matrixV() * isqrt.asDiagonal();
  // Rinv = sqrt(Sigma) V^T Ls^{-1} via triangular solve when possible.
  MatrixXd LsInv = Ls.inverse();
  nt.Rinv = sigma.cwiseSqrt().asDiagonal() * svd.matrixV().transpose() * LsInv;
  return nt;
}

// Largest step a with M + a*dM staying PSD, given a factor L of M.
double psd_step_bound(const Eigen::LLT<MatrixXd>& llt, const MatrixXd& dM) {
  MatrixXd L = llt.matrixL();
  MatrixXd tmp = L.triangularView<Eigen::Lower>().solve(dM);
  MatrixXd scaled = L.triangularView<Eigen::Lower>().solve(tmp.transpose()).transpose();
  double mn = min_eig_sym((scaled + scaled.transpose()) / 2.0);
  if (mn >= 0) return std::numeric_limits<double>::infinity();
  return -1.0 / mn;
}

bool verify_reduced_certificate(const Reduced& red, const std::vector<MatrixXd>& cert) {
  size_t nb = red.sizes.size();
  if (cert.size() != nb) return false;
  for (size_t b = 0; b < nb; ++b) {
    if (cert[b].rows() != red.sizes[b] || cert[b].cols() != red.sizes[b]) return false;
    if (min_eig_sym((cert[b] + cert[b].transpose()) / 2.0) < -1e-9) return false;
  }
  // Pairing with the free directions: <Abar_i, W> = -(G^T svec(W))_i.
  VectorXd pair = VectorXd::Zero(red.p);
  double a0 = 0.0;
  for (size_t b = 0; b < nb; ++b) {
    VectorXd wv = svec((cert[b] + cert[b].transpose()) / 2.0);
    pair -= red.G[b].transpose() * wv;
    a0 += red.h[b].dot(wv);
  }
  if (red.p > 0 && pair.cwiseAbs().maxCoeff() > 1e-7) return false;
  return a0 < -1e-9;
}

}  // namespace

bool verify_infeasibility_certificate(const SdpProblem& problem, const std::vector<MatrixXd>& cert) {
  Reduced red = reduce(problem);
  return verify_reduced_certificate(red, cert);
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts) {
  Reduced red = reduce(problem);
  int p = red.p;
  size_t nb = red.sizes.size();

  SdpSolution sol;

  auto assemble_primal = [&](const VectorXd& x) {
    VectorXd z = red.z_part;
    if (p > 0) z += red.basis * x;
    return z;
  };

  // No free variables: feasibility is a direct eigenvalue question.
  if (p == 0) {
    double worst = 0.0;
    int worst_block = -1;
    std::vector<Eigen::SelfAdjointEigenSolver<MatrixXd>> eigs;
    for (size_t b = 0; b < nb; ++b) {
      MatrixXd A0 = smat(red.h[b], red.sizes[b]);
      eigs.emplace_back(A0);
      double scale = std::max(1.0, eigs.back().eigenvalues().cwiseAbs().maxCoeff());
      double mn = eigs.back().eigenvalues().minCoeff();
      if (mn / scale < worst) {
        worst = mn / scale;
        worst_block = static_cast<int>(b);
      }
    }
    if (worst >= -1e-9) {
      sol.status = SdpStatus::OPTIMAL;
      sol.primal = assemble_primal(VectorXd());
      sol.objective_value = red.c0;
      for (size_t b = 0; b < nb; ++b) sol.dual_blocks.push_back(MatrixXd::Zero(red.sizes[b], red.sizes[b]));
      sol.message = "all variables fixed; constant blocks are PSD";
      return sol;
    }
    std::vector<MatrixXd> cert;
    for (size_t b = 0; b < nb; ++b) cert.push_back(MatrixXd::Zero(red.sizes[b], red.sizes[b]));
    const auto& es = eigs[static_cast<size_t>(worst_block)];
    VectorXd v = es.eigenvectors().col(0);
    cert[static_cast<size_t>(worst_block)] = v * v.transpose();
    if (verify_reduced_certificate(red, cert)) {
      sol.status = SdpStatus::INFEASIBLE;
      sol.dual_blocks = std::move(cert);
      sol.message = "constant block has a negative eigenvalue";
    } else {
      sol.status = SdpStatus::INCONCLUSIVE;
      sol.message = "constant block marginally indefinite; certificate did not verify";
    }
    return sol;
  }

  // Stacked cone dimensions.
  int sv_total = 0;
  for (int n : red.sizes) sv_total += svec_size(n);
  int nu = 0;
  for (int n : red.sizes) nu += n;

  MatrixXd Gall(sv_total, p);
  VectorXd hall(sv_total);
  {
    int off = 0;
    for (size_t b = 0; b < nb; ++b) {
      int sv = svec_size(red.sizes[b]);
      Gall.middleRows(off, sv) = red.G[b];
      hall.segment(off, sv) = red.h[b];
      off += sv;
    }
  }
  const VectorXd& c = red.c;
  double hnorm = std::max(1.0, hall.norm());
  double cnorm = std::max(1.0, c.norm());

  // Iterates.
  VectorXd x = VectorXd::Zero(p);
  double tau = 1.0, kappa = 1.0;
  std::vector<MatrixXd> S, W;
  for (int n : red.sizes) {
    S.push_back(MatrixXd::Identity(n, n));
    W.push_back(MatrixXd::Identity(n, n));
  }

  auto stack_svec = [&](const std::vector<MatrixXd>& mats) {
    VectorXd v(sv_total);
    int off = 0;
    for (size_t b = 0; b < nb; ++b) {
      int sv = svec_size(red.sizes[b]);
      v.segment(off, sv) = svec(mats[b]);
      off += sv;
    }
    return v;
  };

  double alpha_prev = 0.0;
  int stall_count = 0;

  // Best iterate seen, for honest floor acceptance when the Newton systems
  // become too ill-conditioned to push residuals all the way to tol.
  struct Snapshot {
    bool valid = false;
    double score = std::numeric_limits<double>::infinity();
    VectorXd x;
    double tau = 1.0;
    std::vector<MatrixXd> w;
    SdpResiduals res;
    double pobj = 0.0;
  } best;
  const double accept_floor = std::max(10.0 * opts.tol, 1e-7);

  auto finish_inconclusive = [&](const std::string& why) {
    if (best.valid && best.score <= accept_floor) {
      sol.status = SdpStatus::OPTIMAL;
      sol.primal = assemble_primal(best.x / best.tau);
      sol.objective_value = best.pobj + red.c0;
      sol.dual_blocks.clear();
      for (size_t b = 0; b < nb; ++b) sol.dual_blocks.push_back(best.w[b] / best.tau);
      sol.residuals = best.res;
      sol.message = "converged to the numerical floor (" + why + ")";
    } else {
      sol.status = SdpStatus::INCONCLUSIVE;
      sol.message = why;
    }
    return sol;
  };

  for (int iter = 0; iter < opts.max_iters; ++iter) {
    sol.iterations = iter;
    VectorXd s_vec = stack_svec(S);
    VectorXd w_vec = stack_svec(W);

    VectorXd r_p = s_vec + Gall * x - hall * tau;
    VectorXd r_d = Gall.transpose() * w_vec + c * tau;
    double r_g = kappa + c.dot(x) + hall.dot(w_vec);
    double sw = s_vec.dot(w_vec);
    double mu = (sw + tau * kappa) / (nu + 1);

    double pres = r_p.norm() / (tau * hnorm);
    double dres = r_d.norm() / (tau * cnorm);
    double pobj = c.dot(x) / tau;
    double dobj = -hall.dot(w_vec) / tau;
    double gap = sw / (tau * tau);
    double relgap = gap / std::max({1.0, std::abs(pobj), std::abs(dobj)});
    sol.residuals = {pres, dres, relgap};

    if (getenv("MOMENTSEP_SDP_TRACE")) {
      fprintf(stderr, "it=%d pres=%.2e dres=%.2e relgap=%.2e mu=%.2e tau=%.2e kappa=%.2e alpha_prev=%.2e\n",
              iter, pres, dres, relgap, mu, tau, kappa, alpha_prev);
    }
    double score = std::max({pres, dres, relgap});
    if (score < best.score) {
      best.valid = true;
      best.score = score;
      best.x = x;
      best.tau = tau;
      best.w = W;
      best.res = sol.residuals;
      best.pobj = pobj;
    }

    if (pres <= opts.tol && dres <= opts.tol && relgap <= opts.tol) {
      sol.status = SdpStatus::OPTIMAL;
      sol.primal = assemble_primal(x / tau);
      sol.objective_value = pobj + red.c0;
      for (size_t b = 0; b < nb; ++b) sol.dual_blocks.push_back(W[b] / tau);
      sol.message = "converged";
      return sol;
    }

    // Primal infeasibility: dual ray with h^T w < 0 annihilating the free
    // directions. The trace-normalized candidate must pass the exact check.
    double hw = hall.dot(w_vec);
    if (hw < -1e-12) {
      double ray_res = (Gall.transpose() * w_vec).cwiseAbs().maxCoeff() / (-hw);
      if (ray_res < 1e-6) {
        double trace_sum = 0.0;
        for (size_t b = 0; b < nb; ++b) trace_sum += W[b].trace();
        std::vector<MatrixXd> cert;
        for (size_t b = 0; b < nb; ++b) cert.push_back(W[b] / trace_sum);
        if (verify_reduced_certificate(red, cert)) {
          sol.status = SdpStatus::INFEASIBLE;
          sol.dual_blocks = std::move(cert);
          sol.objective_value = std::numeric_limits<double>::infinity();
          sol.message = "infeasibility certificate verified";
          return sol;
        }
      }
    }
    // Dual infeasibility: primal ray with c^T x < 0 (objective unbounded).
    double cx = c.dot(x);
    if (cx < -1e-12) {
      double ray_res = (Gall * x + s_vec).norm() / (-cx);
      if (ray_res < opts.tol * hnorm) {
        sol.status = SdpStatus::INCONCLUSIVE;
        sol.message = "objective unbounded below (dual infeasible ray found)";
        return sol;
      }
    }

    // NT scalings and the scaled constraint columns.
    std::vector<NtScaling> nts;
    std::vector<Eigen::LLT<MatrixXd>> llt_s, llt_w;
    for (size_t b = 0; b < nb; ++b) {
      nts.push_back(nt_scaling(S[b], W[b]));
      llt_s.emplace_back(S[b]);
      llt_w.emplace_back(W[b]);
      if (llt_s.back().info() != Eigen::Success || llt_w.back().info() != Eigen::Success)
        return finish_inconclusive("cone iterate lost positive definiteness");
    }

    MatrixXd K = MatrixXd::Zero(p, p);
    VectorXd g1 = VectorXd::Zero(p);
    double g2 = 0.0;
    std::vector<MatrixXd> Vmats;  // per block: sv x p scaled columns
    std::vector<VectorXd> Th_vec;
    {
      int off = 0;
      for (size_t b = 0; b < nb; ++b) {
        int n = red.sizes[b];
        int sv = svec_size(n);
        MatrixXd Vm(sv, p);
        for (int i = 0; i < p; ++i) {
          MatrixXd Gi = smat(red.G[b].col(i), n);
          MatrixXd Ti = nts[b].Rinv * Gi * nts[b].Rinv.transpose();
          Vm.col(i) = svec((Ti + Ti.transpose()) / 2.0);
        }
        MatrixXd Hh = smat(red.h[b], n);
        MatrixXd Th = nts[b].Rinv * Hh * nts[b].Rinv.transpose();
        VectorXd thv = svec((Th + Th.transpose()) / 2.0);
        K.noalias() += Vm.transpose() * Vm;
        g1.noalias() += Vm.transpose() * thv;
        g2 += thv.squaredNorm();
        Vmats.push_back(std::move(Vm));
        Th_vec.push_back(std::move(thv));
        off += sv;
      }
    }

    // Bordered Newton matrix in (dx, dtau); a pivoted LU avoids the
    // catastrophic cancellation a scalar Schur step on dtau suffers when K
    // is nearly singular along h.
    MatrixXd kkt(p + 1, p + 1);
    kkt.topLeftCorner(p, p) = K;
    kkt.topRightCorner(p, 1) = c - g1;
    kkt.bottomLeftCorner(1, p) = (c + g1).transpose();
    kkt(p, p) = -(g2 + kappa / tau);
    Eigen::PartialPivLU<MatrixXd> klu(kkt);

    // Direction for a given centering parameter and complementarity targets.
    struct Direction {
      VectorXd dx, dw_vec, ds_vec;
      double dtau = 0.0, dkappa = 0.0;
      bool ok = false;
    };
    auto compute_direction = [&](double sigma, double eta, const std::vector<MatrixXd>* corr_cc,
                                 double corr_tk) {
      Direction dir;
      // v1 = eta*r_p + svec(R Dtil R^T) per block.
      VectorXd v1(sv_total);
      std::vector<MatrixXd> v1_scaled;  // Rinv * mat(v1) * Rinv^T per block
      {
        int off = 0;
        for (size_t b = 0; b < nb; ++b) {
          int n = red.sizes[b];
          int sv = svec_size(n);
          const VectorXd& lam = nts[b].lambda;
          MatrixXd cc = MatrixXd::Zero(n, n);
          cc.diagonal() = -lam.cwiseProduct(lam);
          cc.diagonal().array() += sigma * mu;
          if (corr_cc) cc -= (*corr_cc)[b];
          MatrixXd Dtil(n, n);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) Dtil(i, j) = 2.0 * cc(i, j) / (lam(i) + lam(j));
          MatrixXd rdr = nts[b].R * Dtil * nts[b].R.transpose();
          v1.segment(off, sv) = eta * r_p.segment(off, sv) + svec((rdr + rdr.transpose()) / 2.0);
          MatrixXd v1m = smat(v1.segment(off, sv), n);
          MatrixXd v1s = nts[b].Rinv * v1m * nts[b].Rinv.transpose();
          v1_scaled.push_back((v1s + v1s.transpose()) / 2.0);
          off += sv;
        }
      }
      double rhs_tk = sigma * mu - tau * kappa - corr_tk;

      VectorXd gv1 = VectorXd::Zero(p);
      double hv1 = 0.0;
      for (size_t b = 0; b < nb; ++b) {
        VectorXd v1sv = svec(v1_scaled[b]);
        gv1 += Vmats[b].transpose() * v1sv;
        hv1 += Th_vec[b].dot(v1sv);
      }
      VectorXd b1 = -eta * r_d - gv1;
      double b2 = -eta * r_g - hv1 - rhs_tk / tau;

      VectorXd rhs(p + 1);
      rhs.head(p) = b1;
      rhs(p) = b2;
      VectorXd xt = klu.solve(rhs);
      dir.dx = xt.head(p);
      dir.dtau = xt(p);
      dir.dkappa = (rhs_tk - kappa * dir.dtau) / tau;

      dir.dw_vec.resize(sv_total);
      {
        int off = 0;
        for (size_t b = 0; b < nb; ++b) {
          int n = red.sizes[b];
          int sv = svec_size(n);
          VectorXd arg = red.G[b] * dir.dx - red.h[b] * dir.dtau + v1.segment(off, sv);
          MatrixXd am = smat(arg, n);
          MatrixXd inner = nts[b].Rinv * am * nts[b].Rinv.transpose();
          MatrixXd dwb = nts[b].Rinv.transpose() * ((inner + inner.transpose()) / 2.0) * nts[b].Rinv;
          dir.dw_vec.segment(off, sv) = svec((dwb + dwb.transpose()) / 2.0);
          off += sv;
        }
      }
      dir.ds_vec = -eta * r_p - Gall * dir.dx + hall * dir.dtau;
      dir.ok = dir.dx.allFinite() && dir.dw_vec.allFinite() && dir.ds_vec.allFinite() &&
               std::isfinite(dir.dtau) && std::isfinite(dir.dkappa);
      if (!dir.ok && getenv("MOMENTSEP_SDP_TRACE")) {
        fprintf(stderr, "  dir breakdown: dx fin=%d dw fin=%d ds fin=%d dtau=%.3e dkappa=%.3e den-parts: g2=%.3e\n",
                (int)dir.dx.allFinite(), (int)dir.dw_vec.allFinite(), (int)dir.ds_vec.allFinite(),
                dir.dtau, dir.dkappa, g2);
      }
      return dir;
    };

    auto step_bound = [&](const Direction& dir) {
      double amax = std::numeric_limits<double>::infinity();
      if (dir.dtau < 0) amax = std::min(amax, -tau / dir.dtau);
      if (dir.dkappa < 0) amax = std::min(amax, -kappa / dir.dkappa);
      int off = 0;
      for (size_t b = 0; b < nb; ++b) {
        int n = red.sizes[b];
        int sv = svec_size(n);
        amax = std::min(amax, psd_step_bound(llt_s[b], smat(dir.ds_vec.segment(off, sv), n)));
        amax = std::min(amax, psd_step_bound(llt_w[b], smat(dir.dw_vec.segment(off, sv), n)));
        off += sv;
      }
      return amax;
    };

    double sigma;
    std::vector<MatrixXd> corr_cc;
    double corr_tk = 0.0;
    if (opts.predictor_corrector) {
      Direction aff = compute_direction(0.0, 1.0, nullptr, 0.0);
      if (!aff.ok) return finish_inconclusive("numerical breakdown in predictor step");
      double a_aff = std::min(1.0, step_bound(aff));
      VectorXd s_aff = s_vec + a_aff * aff.ds_vec;
      VectorXd w_aff = w_vec + a_aff * aff.dw_vec;
      double mu_aff = (s_aff.dot(w_aff) + (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) / (nu + 1);
      double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
      sigma = ratio * ratio * ratio;
      corr_tk = aff.dtau * aff.dkappa;
      int off = 0;
      for (size_t b = 0; b < nb; ++b) {
        int n = red.sizes[b];
        int sv = svec_size(n);
        MatrixXd ds_t = nts[b].Rinv * smat(aff.ds_vec.segment(off, sv), n) * nts[b].Rinv.transpose();
        MatrixXd dw_t = nts[b].R.transpose() * smat(aff.dw_vec.segment(off, sv), n) * nts[b].R;
        corr_cc.push_back((ds_t * dw_t + dw_t * ds_t) / 2.0);
        off += sv;
      }
    } else {
      double base = 1.0 - alpha_prev;
      sigma = std::clamp(base * base * base, 0.05, 0.8);
    }

    Direction dir = compute_direction(sigma, 1.0 - sigma, corr_cc.empty() ? nullptr : &corr_cc, corr_tk);
    if (!dir.ok) return finish_inconclusive("numerical breakdown while computing the search direction");
    double alpha = std::min(1.0, opts.step_fraction * step_bound(dir));
    if (!(alpha > 0) || !std::isfinite(alpha)) return finish_inconclusive("vanishing step length");

    x += alpha * dir.dx;
    tau += alpha * dir.dtau;
    kappa += alpha * dir.dkappa;
    {
      int off = 0;
      for (size_t b = 0; b < nb; ++b) {
        int n = red.sizes[b];
        int sv = svec_size(n);
        S[b] += alpha * smat(dir.ds_vec.segment(off, sv), n);
        W[b] += alpha * smat(dir.dw_vec.segment(off, sv), n);
        S[b] = ((S[b] + S[b].transpose()) / 2.0).eval();
        W[b] = ((W[b] + W[b].transpose()) / 2.0).eval();
        off += sv;
      }
    }
    alpha_prev = alpha;
    stall_count = alpha < 1e-8 ? stall_count + 1 : 0;
    if (stall_count >= 8) {
      sol.iterations = iter + 1;
      return finish_inconclusive("step lengths collapsed before reaching the tolerance");
    }
    if (tau < 1e-300 || !std::isfinite(tau)) {
      sol.iterations = iter + 1;
      return finish_inconclusive("homogenizing variable collapsed without a verified certificate");
    }
  }

  sol.iterations = opts.max_iters;
  return finish_inconclusive("iteration cap reached");
}

}  // namespace momentsep
