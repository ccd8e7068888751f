#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace momentsep {

/// One affine LMI block of an SDP: z maps to mats[0] + sum_i z_i mats[1+i],
/// required positive semidefinite. All matrices are symmetric and share the
/// block's size.
struct SdpBlock {
  std::vector<Eigen::MatrixXd> mats;

  int size() const { return mats.empty() ? 0 : static_cast<int>(mats[0].rows()); }
};

/// General affine equality row sum_j coeffs_j z_{idx_j} = rhs.
struct LinearEquation {
  std::vector<std::pair<int, double>> coeffs;
  double rhs = 0.0;
};

/// min objective^T z  subject to  every block PSD, z_i = v for (i, v) in
/// equalities, and the general linear_equations. Equalities of both kinds
/// are removed by exact variable elimination before the interior-point
/// iteration.
struct SdpProblem {
  int num_vars = 0;
  Eigen::VectorXd objective;
  std::vector<std::pair<int, double>> equalities;
  std::vector<LinearEquation> linear_equations;
  std::vector<SdpBlock> blocks;
};

enum class SdpStatus { OPTIMAL, INFEASIBLE, INCONCLUSIVE };

struct SdpOptions {
  double tol = 1e-8;            // feasibility and relative-gap target
  int max_iters = 200;
  double step_fraction = 0.98;  // fraction-to-boundary damping
  bool predictor_corrector = false;
};

struct SdpResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::INCONCLUSIVE;
  Eigen::VectorXd primal;  // full z vector (fixed entries included) when feasible
  double objective_value = 0.0;
  /// Dual matrices per block: the dual optimum when OPTIMAL, an
  /// infeasibility certificate (trace-normalized) when INFEASIBLE.
  std::vector<Eigen::MatrixXd> dual_blocks;
  int iterations = 0;
  SdpResiduals residuals;
  std::string message;
};

/// Primal-dual path-following interior-point method on the homogeneous
/// self-dual embedding; detects optimality and infeasibility in one sweep.
/// INFEASIBLE is only reported when the returned certificate passes
/// verify_infeasibility_certificate.
SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {});

/// Farkas-type check: every W_b must be PSD (>= -1e-9), the certificate must
/// annihilate every free direction of the equality-reduced problem (within
/// 1e-7), and pair strictly negatively (< -1e-9) with the reduced constant
/// term. A passing certificate proves that no feasible z exists.
bool verify_infeasibility_certificate(const SdpProblem& problem,
                                      const std::vector<Eigen::MatrixXd>& cert);

}  // namespace momentsep
