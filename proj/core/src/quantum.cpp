#include "momentsep/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "momentsep/errors.hpp"

namespace momentsep {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using cplx = std::complex<double>;

int popcount_zeros(unsigned t, int nbits) {
  int ones = 0;
  for (int q = 0; q < nbits; ++q) ones += (t >> q) & 1u;
  return nbits - ones;
}

bool all_qubits(const PartitionSpec& spec) {
  return std::all_of(spec.parties.begin(), spec.parties.end(), [](int d) { return d == 2; });
}

// Applies the Pauli string mu (one index per party, qubit 0 = leftmost
// Kronecker factor = most significant bit) to basis state t:
// sigma|t> = phase * |t'>.
void pauli_action(const std::vector<int>& mu, unsigned t, int nbits, unsigned& t_out, cplx& phase) {
  unsigned out = t;
  phase = cplx(1.0, 0.0);
  for (size_t q = 0; q < mu.size(); ++q) {
    int bitpos = nbits - 1 - static_cast<int>(q);
    int b = (t >> bitpos) & 1;
    switch (mu[q]) {
      case 0:
        break;
      case 1:  // X
        out ^= (1u << bitpos);
        break;
      case 2:  // Y: |0> -> i|1>, |1> -> -i|0>
        out ^= (1u << bitpos);
        phase *= (b == 0) ? cplx(0.0, 1.0) : cplx(0.0, -1.0);
        break;
      case 3:  // Z
        if (b == 1) phase = -phase;
        break;
      default:
        throw std::invalid_argument("pauli_action: index out of range");
    }
  }
  t_out = out;
}

// Permutation operator on a product space: factor q of the output picks
// factor perm[q] of the input.
MatrixXcd permutation_operator(const std::vector<int>& dims, const std::vector<int>& perm) {
  int D = 1;
  for (int d : dims) D *= d;
  MatrixXcd U = MatrixXcd::Zero(D, D);
  int p = static_cast<int>(dims.size());
  std::vector<int> strides(static_cast<size_t>(p), 1);
  for (int q = p - 2; q >= 0; --q) strides[static_cast<size_t>(q)] = strides[static_cast<size_t>(q + 1)] * dims[static_cast<size_t>(q + 1)];
  std::vector<int> idx(static_cast<size_t>(p));
  for (int j = 0; j < D; ++j) {
    int rem = j;
    for (int q = 0; q < p; ++q) {
      idx[static_cast<size_t>(q)] = rem / strides[static_cast<size_t>(q)];
      rem %= strides[static_cast<size_t>(q)];
    }
    int i = 0;
    for (int q = 0; q < p; ++q) i += idx[static_cast<size_t>(perm[static_cast<size_t>(q)])] * strides[static_cast<size_t>(q)];
    U(i, j) = 1.0;
  }
  return U;
}

// Symmetrizer over the listed parties (average of all permutation operators
// permuting those slots). For a full qubit class the Dicke projector is used
// instead, which avoids the factorial sum.
MatrixXcd class_symmetrizer(const std::vector<int>& dims, const std::vector<int>& members) {
  int p = static_cast<int>(dims.size());
  if (static_cast<int>(members.size()) == p && std::all_of(dims.begin(), dims.end(), [](int d) { return d == 2; })) {
    MatrixXcd B = dicke_basis(p);
    return B * B.adjoint();
  }
  std::vector<int> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> perm_members = sorted;
  int D = 1;
  for (int d : dims) D *= d;
  MatrixXcd P = MatrixXcd::Zero(D, D);
  long count = 0;
  std::sort(perm_members.begin(), perm_members.end());
  do {
    std::vector<int> perm(static_cast<size_t>(p));
    std::iota(perm.begin(), perm.end(), 0);
    for (size_t i = 0; i < sorted.size(); ++i) perm[static_cast<size_t>(sorted[i])] = perm_members[i];
    P += permutation_operator(dims, perm);
    ++count;
  } while (std::next_permutation(perm_members.begin(), perm_members.end()));
  return P / static_cast<double>(count);
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

void validate_density_matrix(const DensityMatrix& rho, double herm_tol, double trace_tol, double eig_tol) {
  int D = rho.dim();
  if (D < 1 || rho.mat.cols() != D) throw std::invalid_argument("DensityMatrix: not square");
  int prod = 1;
  for (int d : rho.factor_dims) {
    if (d < 2) throw std::invalid_argument("DensityMatrix: factor dims must be >= 2");
    prod *= d;
  }
  if (prod != D) throw std::invalid_argument("DensityMatrix: factor dims do not multiply to the dimension");
  if ((rho.mat - rho.mat.adjoint()).cwiseAbs().maxCoeff() > herm_tol)
    throw std::invalid_argument("DensityMatrix: not Hermitian");
  if (std::abs(rho.mat.trace().real() - 1.0) > trace_tol || std::abs(rho.mat.trace().imag()) > trace_tol)
    throw std::invalid_argument("DensityMatrix: trace is not 1");
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(rho.mat, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -eig_tol)
    throw std::invalid_argument("DensityMatrix: not positive semidefinite");
}

LocalBasis standard_basis(int dim) {
  if (dim < 2) throw std::invalid_argument("standard_basis: dim must be >= 2");
  LocalBasis basis;
  basis.dim = dim;
  basis.ops.push_back(MatrixXcd::Identity(dim, dim));
  if (dim == 2) {
    MatrixXcd sx(2, 2), sy(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, cplx(0, -1), cplx(0, 1), 0;
    sz << 1, 0, 0, -1;
    basis.ops.push_back(sx);
    basis.ops.push_back(sy);
    basis.ops.push_back(sz);
    return basis;
  }
  // Generalized Gell-Mann family rescaled so that tr(S_a S_b) = dim*delta.
  double scale = std::sqrt(dim / 2.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      MatrixXcd m = MatrixXcd::Zero(dim, dim);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      basis.ops.push_back(scale * m);
      MatrixXcd a = MatrixXcd::Zero(dim, dim);
      a(j, k) = cplx(0, -1);
      a(k, j) = cplx(0, 1);
      basis.ops.push_back(scale * a);
    }
  }
  for (int l = 1; l < dim; ++l) {
    MatrixXcd m = MatrixXcd::Zero(dim, dim);
    for (int j = 0; j < l; ++j) m(j, j) = 1.0;
    m(l, l) = -static_cast<double>(l);
    basis.ops.push_back(scale * std::sqrt(2.0 / (l * (l + 1.0))) * m);
  }
  return basis;
}

PartitionSpec PartitionSpec::symmetric_qubits(int num_qubits, bool pure) {
  if (num_qubits < 1) throw std::invalid_argument("symmetric_qubits: need at least one qubit");
  PartitionSpec spec;
  spec.parties.assign(static_cast<size_t>(num_qubits), 2);
  std::vector<int> cls(static_cast<size_t>(num_qubits));
  std::iota(cls.begin(), cls.end(), 0);
  spec.symmetry_classes.push_back(std::move(cls));
  spec.purity_flags.push_back(pure);
  return spec;
}

PartitionSpec PartitionSpec::distinct_parties(std::vector<int> dims, bool pure) {
  PartitionSpec spec;
  spec.parties = std::move(dims);
  for (int i = 0; i < static_cast<int>(spec.parties.size()); ++i) {
    spec.symmetry_classes.push_back({i});
    spec.purity_flags.push_back(pure);
  }
  return spec;
}

void PartitionSpec::validate() const {
  if (parties.empty()) throw std::invalid_argument("PartitionSpec: no parties");
  for (int d : parties)
    if (d < 2) throw std::invalid_argument("PartitionSpec: local dims must be >= 2");
  std::set<int> seen;
  for (const auto& cls : symmetry_classes) {
    if (cls.empty()) throw std::invalid_argument("PartitionSpec: empty symmetry class");
    int d0 = parties.at(static_cast<size_t>(cls.front()));
    for (int p : cls) {
      if (p < 0 || p >= num_parties()) throw std::invalid_argument("PartitionSpec: party index out of range");
      if (!seen.insert(p).second) throw std::invalid_argument("PartitionSpec: party appears in two classes");
      if (parties.at(static_cast<size_t>(p)) != d0)
        throw std::invalid_argument("PartitionSpec: identified parties must have equal dimension");
    }
  }
  if (static_cast<int>(seen.size()) != num_parties())
    throw std::invalid_argument("PartitionSpec: classes do not cover all parties");
  if (purity_flags.size() != symmetry_classes.size())
    throw std::invalid_argument("PartitionSpec: one purity flag per class required");
  if (known_support) {
    int n = total_vars();
    for (const auto& a : *known_support)
      if (a.size() != n) throw std::invalid_argument("PartitionSpec: known_support index has wrong length");
  }
}

void PartitionSpec::canonicalize() {
  std::vector<size_t> order(symmetry_classes.size());
  std::iota(order.begin(), order.end(), 0);
  for (auto& cls : symmetry_classes) std::sort(cls.begin(), cls.end());
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return symmetry_classes[a].front() < symmetry_classes[b].front();
  });
  std::vector<std::vector<int>> classes;
  std::vector<bool> flags;
  for (size_t i : order) {
    classes.push_back(symmetry_classes[i]);
    flags.push_back(purity_flags[i]);
  }
  symmetry_classes = std::move(classes);
  purity_flags = std::move(flags);
}

int PartitionSpec::class_of_party(int party) const {
  for (int c = 0; c < num_classes(); ++c) {
    const auto& cls = symmetry_classes[static_cast<size_t>(c)];
    if (std::find(cls.begin(), cls.end(), party) != cls.end()) return c;
  }
  throw std::invalid_argument("PartitionSpec: party not in any class");
}

int PartitionSpec::class_dim(int cls) const {
  return parties.at(static_cast<size_t>(symmetry_classes.at(static_cast<size_t>(cls)).front()));
}

int PartitionSpec::class_var_offset(int cls) const {
  int off = 0;
  for (int c = 0; c < cls; ++c) off += class_var_count(c);
  return off;
}

int PartitionSpec::total_vars() const {
  int n = 0;
  for (int c = 0; c < num_classes(); ++c) n += class_var_count(c);
  return n;
}

std::vector<int> StateTensor::canonical_mu(std::vector<int> mu) const {
  for (const auto& cls : partition.symmetry_classes) {
    if (cls.size() < 2) continue;
    std::vector<int> vals;
    vals.reserve(cls.size());
    for (int p : cls) vals.push_back(mu[static_cast<size_t>(p)]);
    std::sort(vals.begin(), vals.end());
    for (size_t i = 0; i < cls.size(); ++i) mu[static_cast<size_t>(cls[i])] = vals[i];
  }
  return mu;
}

double StateTensor::at(const std::vector<int>& mu) const {
  auto it = coords.find(canonical_mu(mu));
  if (it == coords.end()) throw IncompleteTmsError("StateTensor: coordinate not present");
  return it->second;
}

void StateTensor::set(std::vector<int> mu, double value) {
  std::vector<int> key = canonical_mu(std::move(mu));
  auto [it, inserted] = coords.emplace(std::move(key), value);
  if (!inserted && std::abs(it->second - value) > 1e-10)
    throw IntegrityError("StateTensor: colliding symmetric entries disagree");
}

Eigen::VectorXcd dicke_state(int num_qubits, int num_zeros) {
  if (num_qubits < 1) throw std::invalid_argument("dicke_state: need at least one qubit");
  if (num_zeros < 0 || num_zeros > num_qubits) throw std::invalid_argument("dicke_state: zero count out of range");
  unsigned D = 1u << num_qubits;
  VectorXcd v = VectorXcd::Zero(D);
  double amp = 1.0 / std::sqrt(binomial(num_qubits, num_zeros));
  for (unsigned t = 0; t < D; ++t) {
    if (popcount_zeros(t, num_qubits) == num_zeros) v(t) = amp;
  }
  return v;
}

Eigen::MatrixXcd dicke_basis(int num_qubits) {
  unsigned D = 1u << num_qubits;
  MatrixXcd B(D, num_qubits + 1);
  for (int k = 0; k <= num_qubits; ++k) B.col(k) = dicke_state(num_qubits, k);
  return B;
}

Eigen::MatrixXcd symmetric_projector(int num_qubits) {
  MatrixXcd B = dicke_basis(num_qubits);
  return B * B.adjoint();
}

std::vector<std::vector<int>> enumerate_canonical_mu(const PartitionSpec& spec) {
  spec.validate();
  int p = spec.num_parties();
  std::vector<std::vector<int>> out;
  std::vector<int> mu(static_cast<size_t>(p), 0);
  // Per class: nondecreasing tuples over {0..t_c} of length |class|.
  std::function<void(int)> rec = [&](int c) {
    if (c == spec.num_classes()) {
      out.push_back(mu);
      return;
    }
    const auto& cls = spec.symmetry_classes[static_cast<size_t>(c)];
    int t = spec.class_var_count(c);
    std::vector<int> vals(cls.size(), 0);
    std::function<void(size_t, int)> fill = [&](size_t i, int lo) {
      if (i == cls.size()) {
        for (size_t q = 0; q < cls.size(); ++q) mu[static_cast<size_t>(cls[q])] = vals[q];
        rec(c + 1);
        return;
      }
      for (int v = lo; v <= t; ++v) {
        vals[i] = v;
        fill(i + 1, v);
      }
    };
    fill(0, 0);
  };
  rec(0);
  return out;
}

StateTensorResult state_to_tensor(const DensityMatrix& rho, const PartitionSpec& spec) {
  spec.validate();
  validate_density_matrix(rho);
  if (rho.factor_dims != spec.parties)
    throw std::invalid_argument("state_to_tensor: factor dims do not match partition");

  StateTensorResult result;
  result.tensor.partition = spec;

  MatrixXcd work = rho.mat;
  bool has_symmetry = std::any_of(spec.symmetry_classes.begin(), spec.symmetry_classes.end(),
                                  [](const auto& c) { return c.size() >= 2; });
  if (has_symmetry) {
    MatrixXcd P = MatrixXcd::Identity(rho.dim(), rho.dim());
    for (const auto& cls : spec.symmetry_classes) {
      if (cls.size() >= 2) P = class_symmetrizer(spec.parties, cls) * P;
    }
    MatrixXcd projected = P * work * P;
    if ((projected - work).cwiseAbs().maxCoeff() > 1e-10) {
      result.projected = true;
      double tr = projected.trace().real();
      if (tr < 1e-12) throw std::invalid_argument("state_to_tensor: state has no weight on the symmetric subspace");
      work = projected / tr;
    } else {
      work = projected;  // exact projection for numerical hygiene
      work /= work.trace().real();
    }
  }

  auto mus = enumerate_canonical_mu(spec);
  if (all_qubits(spec)) {
    int nb = spec.num_parties();
    unsigned D = 1u << nb;
    for (const auto& mu : mus) {
      cplx acc = 0.0;
      for (unsigned t = 0; t < D; ++t) {
        unsigned tp;
        cplx phase;
        pauli_action(mu, t, nb, tp, phase);
        acc += phase * work(t, tp);
      }
      result.tensor.coords[mu] = acc.real();
    }
  } else {
    std::vector<LocalBasis> bases;
    for (int d : spec.parties) bases.push_back(standard_basis(d));
    for (const auto& mu : mus) {
      MatrixXcd op = MatrixXcd::Identity(1, 1);
      for (int q = 0; q < spec.num_parties(); ++q)
        op = kron(op, bases[static_cast<size_t>(q)].ops[static_cast<size_t>(mu[static_cast<size_t>(q)])]);
      result.tensor.coords[mu] = (work * op).trace().real();
    }
  }
  return result;
}

DensityMatrix tensor_to_state(const StateTensor& tensor) {
  const PartitionSpec& spec = tensor.partition;
  spec.validate();
  int D = 1;
  for (int d : spec.parties) D *= d;
  double norm = 1.0;
  for (int d : spec.parties) norm /= d;

  DensityMatrix rho;
  rho.factor_dims = spec.parties;
  rho.mat = MatrixXcd::Zero(D, D);

  int p = spec.num_parties();
  if (all_qubits(spec)) {
    unsigned nb = static_cast<unsigned>(p);
    std::vector<int> mu(static_cast<size_t>(p), 0);
    // Iterate all mu tuples; coords are looked up via their canonical form.
    std::function<void(int)> rec = [&](int q) {
      if (q == p) {
        double x = tensor.at(mu);
        if (x == 0.0) return;
        unsigned Dn = 1u << nb;
        for (unsigned t = 0; t < Dn; ++t) {
          unsigned tp;
          cplx phase;
          pauli_action(mu, t, static_cast<int>(nb), tp, phase);
          rho.mat(tp, t) += norm * x * phase;
        }
        return;
      }
      for (int m = 0; m <= 3; ++m) {
        mu[static_cast<size_t>(q)] = m;
        rec(q + 1);
      }
    };
    rec(0);
  } else {
    std::vector<LocalBasis> bases;
    for (int d : spec.parties) bases.push_back(standard_basis(d));
    std::vector<int> mu(static_cast<size_t>(p), 0);
    std::function<void(int)> rec = [&](int q) {
      if (q == p) {
        double x = tensor.at(mu);
        if (x == 0.0) return;
        MatrixXcd op = MatrixXcd::Identity(1, 1);
        for (int i = 0; i < p; ++i)
          op = kron(op, bases[static_cast<size_t>(i)].ops[static_cast<size_t>(mu[static_cast<size_t>(i)])]);
        rho.mat += norm * x * op;
        return;
      }
      int t = spec.parties[static_cast<size_t>(q)] * spec.parties[static_cast<size_t>(q)] - 1;
      for (int m = 0; m <= t; ++m) {
        mu[static_cast<size_t>(q)] = m;
        rec(q + 1);
      }
    };
    rec(0);
  }
  return rho;
}

StateTensor symmetric_tensor_from_dicke(const Eigen::MatrixXcd& rho_sym, int num_qubits) {
  if (rho_sym.rows() != num_qubits + 1 || rho_sym.cols() != num_qubits + 1)
    throw std::invalid_argument("symmetric_tensor_from_dicke: matrix must be (N+1)x(N+1)");
  StateTensor tensor;
  tensor.partition = PartitionSpec::symmetric_qubits(num_qubits);
  std::vector<double> amp(static_cast<size_t>(num_qubits) + 1);
  for (int k = 0; k <= num_qubits; ++k) amp[static_cast<size_t>(k)] = 1.0 / std::sqrt(binomial(num_qubits, k));
  unsigned D = 1u << num_qubits;
  for (const auto& mu : enumerate_canonical_mu(tensor.partition)) {
    cplx acc = 0.0;
    for (unsigned t = 0; t < D; ++t) {
      unsigned tp;
      cplx phase;
      pauli_action(mu, t, num_qubits, tp, phase);
      int l0 = popcount_zeros(t, num_qubits);
      int j0 = popcount_zeros(tp, num_qubits);
      acc += phase * rho_sym(l0, j0) * amp[static_cast<size_t>(l0)] * amp[static_cast<size_t>(j0)];
    }
    tensor.coords[mu] = acc.real();
  }
  return tensor;
}

StateTensor tensor_from_bloch_mixture(const std::vector<double>& weights,
                                      const std::vector<Eigen::Vector3d>& bloch, int num_qubits) {
  if (weights.size() != bloch.size() || weights.empty())
    throw std::invalid_argument("tensor_from_bloch_mixture: need matching nonempty weights and vectors");
  StateTensor tensor;
  tensor.partition = PartitionSpec::symmetric_qubits(num_qubits);
  for (const auto& mu : enumerate_canonical_mu(tensor.partition)) {
    double x = 0.0;
    for (size_t i = 0; i < weights.size(); ++i) {
      double term = weights[i];
      for (int m : mu) {
        if (m > 0) term *= bloch[i](m - 1);
      }
      x += term;
    }
    tensor.coords[mu] = x;
  }
  return tensor;
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho, const std::vector<int>& subset) {
  int p = static_cast<int>(rho.factor_dims.size());
  if (subset.empty() || static_cast<int>(subset.size()) >= p)
    throw std::invalid_argument("partial_transpose: subset must be a nonempty proper subset of parties");
  std::set<int> sub(subset.begin(), subset.end());
  if (static_cast<int>(sub.size()) != static_cast<int>(subset.size()))
    throw std::invalid_argument("partial_transpose: duplicate party index");
  for (int q : sub)
    if (q < 0 || q >= p) throw std::invalid_argument("partial_transpose: party index out of range");

  const auto& dims = rho.factor_dims;
  int D = rho.dim();
  std::vector<int> strides(static_cast<size_t>(p), 1);
  for (int q = p - 2; q >= 0; --q) strides[static_cast<size_t>(q)] = strides[static_cast<size_t>(q + 1)] * dims[static_cast<size_t>(q + 1)];

  MatrixXcd out(D, D);
  std::vector<int> iq(static_cast<size_t>(p)), jq(static_cast<size_t>(p));
  for (int i = 0; i < D; ++i) {
    int rem = i;
    for (int q = 0; q < p; ++q) {
      iq[static_cast<size_t>(q)] = rem / strides[static_cast<size_t>(q)];
      rem %= strides[static_cast<size_t>(q)];
    }
    for (int j = 0; j < D; ++j) {
      rem = j;
      for (int q = 0; q < p; ++q) {
        jq[static_cast<size_t>(q)] = rem / strides[static_cast<size_t>(q)];
        rem %= strides[static_cast<size_t>(q)];
      }
      int ii = 0, jj = 0;
      for (int q = 0; q < p; ++q) {
        bool swap = sub.count(q) > 0;
        ii += (swap ? jq[static_cast<size_t>(q)] : iq[static_cast<size_t>(q)]) * strides[static_cast<size_t>(q)];
        jj += (swap ? iq[static_cast<size_t>(q)] : jq[static_cast<size_t>(q)]) * strides[static_cast<size_t>(q)];
      }
      out(ii, jj) = rho.mat(i, j);
    }
  }
  return out;
}

PptResult ppt_check(const DensityMatrix& rho, const std::vector<int>& subset) {
  MatrixXcd pt = partial_transpose(rho, subset);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es((pt + pt.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  double mn = es.eigenvalues().minCoeff();
  double mx = es.eigenvalues().cwiseAbs().maxCoeff();
  PptResult r;
  r.min_eigenvalue = mn;
  r.is_ppt = mn >= -1e-9 * std::max(1.0, mx);
  return r;
}

Eigen::MatrixXd t_matrix(const StateTensor& tensor) {
  const PartitionSpec& spec = tensor.partition;
  if (spec.num_classes() != 1 || !all_qubits(spec))
    throw std::invalid_argument("t_matrix: requires a single symmetric qubit class");
  int N = spec.num_parties();
  if (N % 2 != 0) throw std::invalid_argument("t_matrix: qubit count must be even");
  int k = N / 2;
  int side = 1;
  for (int i = 0; i < k; ++i) side *= 4;

  Eigen::MatrixXd T(side, side);
  std::vector<int> mu(static_cast<size_t>(N));
  for (int r = 0; r < side; ++r) {
    int rr = r;
    for (int q = k - 1; q >= 0; --q) {
      mu[static_cast<size_t>(q)] = rr % 4;
      rr /= 4;
    }
    for (int c = 0; c < side; ++c) {
      int cc = c;
      for (int q = k - 1; q >= 0; --q) {
        mu[static_cast<size_t>(k + q)] = cc % 4;
        cc /= 4;
      }
      T(r, c) = tensor.at(mu);
    }
  }
  return T;
}

std::vector<std::pair<Polynomial, Relation>> local_constraint_polynomials(int dim, bool pure) {
  if (dim < 2) throw std::invalid_argument("local_constraint_polynomials: dim must be >= 2");
  int n = dim * dim - 1;
  if (dim == 2) {
    Polynomial sq(n);
    for (int i = 0; i < 3; ++i) sq.add_term(MultiIndex::unit(3, i) + MultiIndex::unit(3, i), 1.0);
    std::vector<std::pair<Polynomial, Relation>> out;
    if (pure) {
      out.emplace_back(sq - Polynomial::constant(3, 1.0), Relation::EQ);  // x1^2+x2^2+x3^2 - 1 = 0
    } else {
      out.emplace_back(Polynomial::constant(3, 1.0) - sq, Relation::GEQ);  // Bloch ball
    }
    return out;
  }
  if (pure)
    throw std::invalid_argument("local_constraint_polynomials: pure-state constraints are only available for dim 2");

  // Power sums p_j(y) = tr(rho^j) with rho = (1/dim)(I + sum_a y_a S_a),
  // accumulated over all operator tuples; the real parts of reversed tuples
  // pair up, so taking the real part termwise is exact.
  LocalBasis basis = standard_basis(dim);
  std::vector<Polynomial> power_sums;  // p_1 .. p_dim
  power_sums.push_back(Polynomial::constant(n, 1.0));
  for (int j = 2; j <= dim; ++j) power_sums.push_back(Polynomial::zero(n));

  double inv_d = 1.0 / dim;
  std::vector<int> tuple;
  std::function<void(const MatrixXcd&, const MultiIndex&, double, int)> rec =
      [&](const MatrixXcd& prod, const MultiIndex& mono, double scale, int depth) {
        if (depth >= 2) power_sums[static_cast<size_t>(depth - 1)].add_term(mono, prod.trace().real() * scale);
        if (depth == dim) return;
        for (int m = 0; m <= n; ++m) {
          MatrixXcd next = prod * basis.ops[static_cast<size_t>(m)];
          MultiIndex nm = (m == 0) ? mono : mono + MultiIndex::unit(n, m - 1);
          rec(next, nm, scale * inv_d, depth + 1);
        }
      };
  rec(MatrixXcd::Identity(dim, dim), MultiIndex::zero(n), 1.0, 0);

  // Newton's identities: j e_j = sum_{i=1..j} (-1)^{i-1} e_{j-i} p_i.
  std::vector<Polynomial> elem;  // e_0 .. e_dim
  elem.push_back(Polynomial::constant(n, 1.0));
  for (int j = 1; j <= dim; ++j) {
    Polynomial ej = Polynomial::zero(n);
    for (int i = 1; i <= j; ++i) {
      Polynomial term = elem[static_cast<size_t>(j - i)] * power_sums[static_cast<size_t>(i - 1)];
      ej = (i % 2 == 1) ? ej + term : ej - term;
    }
    elem.push_back(ej * (1.0 / j));
  }

  std::vector<std::pair<Polynomial, Relation>> out;
  for (int j = 2; j <= dim; ++j) {
    Polynomial g = elem[static_cast<size_t>(j)];
    double g0 = g.coefficient(MultiIndex::zero(n));
    if (g0 <= 0) throw std::logic_error("local_constraint_polynomials: unexpected constant term");
    out.emplace_back(g * (1.0 / g0), Relation::GEQ);
  }
  return out;
}

}  // namespace momentsep
