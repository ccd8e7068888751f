#include "momentsep/criteria.hpp"

#include <cmath>
#include <stdexcept>

#include "momentsep/errors.hpp"
#include "momentsep/semialgebraic.hpp"

namespace momentsep {

namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kPsdTol = 1e-9;

bool psd_check(const MatrixXcd& m, double tol) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues().minCoeff() >= -tol * scale;
}

void require_sym_qubit_tms(const Tms& y, int degree) {
  if (y.n != 3 || y.degree != degree)
    throw std::invalid_argument("criteria: expected a symmetric qubit sequence of degree " + std::to_string(degree));
}

MultiIndex mi(int a, int b, int c) { return MultiIndex({a, b, c}); }

}  // namespace

bool two_qubit_sym_nsc(const Tms& y) {
  require_sym_qubit_tms(y, 2);
  MomentMatrix m1 = moment_matrix(y, 1);
  double side = y.at(mi(0, 0, 0)) - y.at(mi(2, 0, 0)) - y.at(mi(0, 2, 0)) - y.at(mi(0, 0, 2));
  if (std::abs(side) > kPsdTol) return false;
  return psd_check(m1.mat.cast<std::complex<double>>(), kPsdTol);
}

Eigen::MatrixXcd three_qubit_cns_matrix(const Tms& y) {
  require_sym_qubit_tms(y, 3);
  auto g = [&](int a, int b, int c) { return y.at(mi(a, b, c)); };
  const std::complex<double> i(0.0, 1.0);
  MatrixXcd m(8, 8);
  m << g(0,0,0)+g(0,0,1), g(1,0,0)-i*g(0,1,0), g(1,0,0)+g(1,0,1), g(2,0,0)-i*g(1,1,0), g(0,1,0)+g(0,1,1), g(1,1,0)-i*g(0,2,0), g(0,0,1)+g(0,0,2), g(1,0,1)-i*g(0,1,1),
       g(1,0,0)+i*g(0,1,0), g(0,0,0)-g(0,0,1), g(2,0,0)+i*g(1,1,0), g(1,0,0)-g(1,0,1), g(1,1,0)+i*g(0,2,0), g(0,1,0)-g(0,1,1), g(1,0,1)+i*g(0,1,1), g(0,0,1)-g(0,0,2),
       g(1,0,0)+g(1,0,1), g(2,0,0)-i*g(1,1,0), g(2,0,0)+g(2,0,1), g(3,0,0)-i*g(2,1,0), g(1,1,0)+g(1,1,1), g(2,1,0)-i*g(1,2,0), g(1,0,1)+g(1,0,2), g(2,0,1)-i*g(1,1,1),
       g(2,0,0)+i*g(1,1,0), g(1,0,0)-g(1,0,1), g(3,0,0)+i*g(2,1,0), g(2,0,0)-g(2,0,1), g(2,1,0)+i*g(1,2,0), g(1,1,0)-g(1,1,1), g(2,0,1)+i*g(1,1,1), g(1,0,1)-g(1,0,2),
       g(0,1,0)+g(0,1,1), g(1,1,0)-i*g(0,2,0), g(1,1,0)+g(1,1,1), g(2,1,0)-i*g(1,2,0), g(0,2,0)+g(0,2,1), g(1,2,0)-i*g(0,3,0), g(0,1,1)+g(0,1,2), g(1,1,1)-i*g(0,2,1),
       g(1,1,0)+i*g(0,2,0), g(0,1,0)-g(0,1,1), g(2,1,0)+i*g(1,2,0), g(1,1,0)-g(1,1,1), g(1,2,0)+i*g(0,3,0), g(0,2,0)-g(0,2,1), g(1,1,1)+i*g(0,2,1), g(0,1,1)-g(0,1,2),
       g(0,0,1)+g(0,0,2), g(1,0,1)-i*g(0,1,1), g(1,0,1)+g(1,0,2), g(2,0,1)-i*g(1,1,1), g(0,1,1)+g(0,1,2), g(1,1,1)-i*g(0,2,1), g(0,0,2)+g(0,0,3), g(1,0,2)-i*g(0,1,2),
       g(1,0,1)+i*g(0,1,1), g(0,0,1)-g(0,0,2), g(2,0,1)+i*g(1,1,1), g(1,0,1)-g(1,0,2), g(1,1,1)+i*g(0,2,1), g(0,1,1)-g(0,1,2), g(1,0,2)+i*g(0,1,2), g(0,0,2)-g(0,0,3);
  return m;
}

bool three_qubit_sym_nsc(const Tms& y) { return psd_check(three_qubit_cns_matrix(y), kPsdTol); }

std::optional<Verdict> ppt_rank_sufficient(const DensityMatrix& rho) {
  int num_qubits = static_cast<int>(rho.factor_dims.size());
  if (num_qubits < 2) throw std::invalid_argument("ppt_rank_sufficient: need at least two qubits");
  for (int d : rho.factor_dims)
    if (d != 2) throw std::invalid_argument("ppt_rank_sufficient: qubit systems only");
  PptResult ppt = ppt_check(rho, {0});
  if (!ppt.is_ppt) return std::nullopt;
  if (num_qubits <= 3) return Verdict::SEPARABLE;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.mat, Eigen::EigenvaluesOnly);
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-9 * scale) ++rank;
  if (rank <= num_qubits) return Verdict::SEPARABLE;
  return std::nullopt;
}

Decomposition two_qubit_four_atom_decomposition(const Tms& y) {
  if (!two_qubit_sym_nsc(y))
    throw std::invalid_argument("two_qubit_four_atom_decomposition: sequence fails the separability condition");

  MomentMatrix m1 = moment_matrix(y, 1);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m1.mat);
  VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (ev(i) < -1e-10) throw std::invalid_argument("two_qubit_four_atom_decomposition: moment matrix not PSD");
    if (ev(i) < 0) ev(i) = 0;  // clip float dust
  }

  auto delta = [](const Eigen::Vector4d& u) { return u(0) * u(0) - u.tail<3>().squaredNorm(); };
  auto bilinear = [](const Eigen::Vector4d& u, const Eigen::Vector4d& v) {
    return u(0) * v(0) - u.tail<3>().dot(v.tail<3>());
  };

  std::vector<Eigen::Vector4d> pool;
  for (Eigen::Index i = 0; i < 4; ++i) {
    if (ev(i) <= 1e-14) continue;
    pool.push_back(std::sqrt(ev(i)) * es.eigenvectors().col(i));
  }

  const double kDeltaTol = 1e-10;
  std::vector<Eigen::Vector4d> finished;
  int guard = 0;
  while (!pool.empty()) {
    if (++guard > 16) throw IntegrityError("two_qubit_four_atom_decomposition: rotation loop did not terminate");
    // Peel vectors already on the cone.
    std::vector<Eigen::Vector4d> remaining;
    for (const auto& u : pool) {
      if (std::abs(delta(u)) <= kDeltaTol) {
        if (std::abs(u(0)) > 1e-12) finished.push_back(u);
        // A cone vector with u0 = 0 is the zero vector and drops out.
      } else {
        remaining.push_back(u);
      }
    }
    pool = std::move(remaining);
    if (pool.empty()) break;

    int neg = -1, pos = -1;
    for (size_t i = 0; i < pool.size(); ++i) {
      double d = delta(pool[i]);
      if (d < -kDeltaTol && neg < 0) neg = static_cast<int>(i);
      if (d > kDeltaTol && pos < 0) pos = static_cast<int>(i);
    }
    if (neg < 0 || pos < 0) {
      // Sum of deltas vanishes, so a lone leftover must be numerical noise;
      // retry once with jitter before giving up.
      bool tiny = true;
      for (const auto& u : pool)
        if (std::abs(delta(u)) > 1e-8) tiny = false;
      if (tiny) {
        for (auto& u : pool) {
          if (std::abs(u(0)) > 1e-12) finished.push_back(u);
        }
        pool.clear();
        break;
      }
      throw IntegrityError("two_qubit_four_atom_decomposition: no sign-opposed pair despite nonzero deltas");
    }

    Eigen::Vector4d ui = pool[static_cast<size_t>(neg)];
    Eigen::Vector4d uj = pool[static_cast<size_t>(pos)];
    double di = delta(ui), dj = delta(uj), bij = bilinear(ui, uj);
    // Delta(t ui + (1-t) uj) = a t^2 + b t + c with f(0) = dj > 0, f(1) = di < 0.
    double a = di + dj - 2.0 * bij;
    double b = 2.0 * bij - 2.0 * dj;
    double c = dj;
    double tc;
    if (std::abs(a) < 1e-14) {
      tc = -c / b;
    } else {
      double disc = std::max(b * b - 4.0 * a * c, 0.0);
      double sq = std::sqrt(disc);
      double t1 = (-b - sq) / (2.0 * a);
      double t2 = (-b + sq) / (2.0 * a);
      if (t1 > t2) std::swap(t1, t2);
      // Exactly one root lies in (0,1); on a double-root tie take the smaller.
      if (t1 > 0.0 && t1 < 1.0) {
        tc = t1;
      } else if (t2 > 0.0 && t2 < 1.0) {
        tc = t2;
      } else {
        throw IntegrityError("two_qubit_four_atom_decomposition: no root in (0,1)");
      }
    }
    double scale = std::sqrt(tc * tc + (1.0 - tc) * (1.0 - tc));
    Eigen::Vector4d v = (tc * ui + (1.0 - tc) * uj) / scale;
    Eigen::Vector4d vp = (-(1.0 - tc) * ui + tc * uj) / scale;
    if (std::abs(v(0)) < 1e-12)
      throw IntegrityError("two_qubit_four_atom_decomposition: cone vector with vanishing first component");
    finished.push_back(v);
    std::vector<Eigen::Vector4d> next;
    for (size_t i = 0; i < pool.size(); ++i)
      if (static_cast<int>(i) != neg && static_cast<int>(i) != pos) next.push_back(pool[i]);
    next.push_back(vp);
    pool = std::move(next);
  }

  Decomposition dec;
  dec.partition = PartitionSpec::symmetric_qubits(2);
  double total = 0.0;
  for (const auto& u : finished) {
    WeightedAtom atom;
    atom.weight = u(0) * u(0);
    Eigen::Vector3d dir = u.tail<3>() / u(0);
    double nrm = dir.norm();
    if (nrm > 1e-12) dir /= nrm;  // Delta = 0 means |dir| = 1 up to float dust
    atom.point = {dir(0), dir(1), dir(2)};
    total += atom.weight;
    dec.atoms.push_back(std::move(atom));
  }
  if (dec.atoms.empty() || total <= 0)
    throw IntegrityError("two_qubit_four_atom_decomposition: empty decomposition");
  for (auto& atom : dec.atoms) atom.weight /= total;
  return dec;
}

std::pair<bool, bool> moment_ppt_equivalence(const StateTensor& tensor) {
  const PartitionSpec& spec = tensor.partition;
  int num_qubits = spec.num_parties();
  if (num_qubits % 2 != 0) throw std::invalid_argument("moment_ppt_equivalence: even qubit count required");
  int k = num_qubits / 2;

  Tms y = tensor_to_tms(tensor);
  MomentMatrix mk = moment_matrix(y, k);
  bool moment_psd = psd_check(mk.mat.cast<std::complex<double>>(), kPsdTol);

  DensityMatrix rho = tensor_to_state(tensor);
  std::vector<int> first_half(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) first_half[static_cast<size_t>(i)] = i;
  // The reconstructed matrix may be an unnormalized non-state for tensors
  // that fail positivity; the partial transpose test only needs Hermiticity.
  Eigen::MatrixXcd pt = partial_transpose(rho, first_half);
  bool ppt_psd = psd_check(pt, kPsdTol);
  return {moment_psd, ppt_psd};
}

}  // namespace momentsep
