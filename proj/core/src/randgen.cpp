#include "momentsep/randgen.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace momentsep {

uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ull;
  uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double Rng::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u1 = uniform01();
  double u2 = uniform01();
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  double theta = 2.0 * std::numbers::pi * u2;
  cached_ = r * std::sin(theta);
  has_cached_ = true;
  return r * std::cos(theta);
}

uint64_t Rng::uniform_below(uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::uniform_below: bound must be positive");
  uint64_t threshold = -bound % bound;
  while (true) {
    uint64_t v = next_u64();
    if (v >= threshold) return v % bound;
  }
}

DensityMatrix haar_random_state(int dim, int rank, Rng& rng) {
  if (rank < 1 || rank > dim) throw std::invalid_argument("haar_random_state: rank out of range");
  Eigen::MatrixXcd g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = rng.complex_normal();
  Eigen::MatrixXcd m = g * g.adjoint();
  DensityMatrix rho;
  rho.mat = m / m.trace().real();
  rho.factor_dims = {dim};
  return rho;
}

Eigen::Vector3d random_bloch_vector(Rng& rng) {
  Eigen::Vector3d v;
  do {
    v << rng.normal(), rng.normal(), rng.normal();
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

BlochMixture random_bloch_mixture(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("random_bloch_mixture: m must be >= 1");
  BlochMixture mix;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    mix.vectors.push_back(random_bloch_vector(rng));
    double w = -std::log(1.0 - rng.uniform01());
    mix.weights.push_back(w);
    total += w;
  }
  for (double& w : mix.weights) w /= total;
  return mix;
}

namespace {

Eigen::MatrixXcd bloch_pure_state(const Eigen::Vector3d& n) {
  Eigen::MatrixXcd rho(2, 2);
  rho(0, 0) = (1.0 + n(2)) / 2.0;
  rho(1, 1) = (1.0 - n(2)) / 2.0;
  rho(0, 1) = std::complex<double>(n(0), -n(1)) / 2.0;
  rho(1, 0) = std::complex<double>(n(0), n(1)) / 2.0;
  return rho;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

DensityMatrix random_separable_symmetric(int num_qubits, int m, Rng& rng) {
  BlochMixture mix = random_bloch_mixture(m, rng);
  int D = 1 << num_qubits;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(D, D);
  for (int i = 0; i < m; ++i) {
    Eigen::MatrixXcd local = bloch_pure_state(mix.vectors[static_cast<size_t>(i)]);
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(1, 1);
    for (int q = 0; q < num_qubits; ++q) prod = kron(prod, local);
    rho += mix.weights[static_cast<size_t>(i)] * prod;
  }
  DensityMatrix out;
  out.mat = std::move(rho);
  out.factor_dims.assign(static_cast<size_t>(num_qubits), 2);
  return out;
}

DensityMatrix random_product_state(const PartitionSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<Eigen::MatrixXcd> class_states;
  for (int c = 0; c < spec.num_classes(); ++c) {
    int d = spec.class_dim(c);
    int rank = spec.purity_flags[static_cast<size_t>(c)] ? 1 : d;
    class_states.push_back(haar_random_state(d, rank, rng).mat);
  }
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < spec.num_parties(); ++q)
    rho = kron(rho, class_states[static_cast<size_t>(spec.class_of_party(q))]);
  DensityMatrix out;
  out.mat = std::move(rho);
  out.factor_dims = spec.parties;
  return out;
}

Eigen::MatrixXcd haar_random_symmetric_dicke(int num_qubits, int rank, Rng& rng) {
  return haar_random_state(num_qubits + 1, rank, rng).mat;
}

DensityMatrix haar_random_symmetric(int num_qubits, int rank, Rng& rng) {
  Eigen::MatrixXcd rho_sym = haar_random_symmetric_dicke(num_qubits, rank, rng);
  Eigen::MatrixXcd b = dicke_basis(num_qubits);
  DensityMatrix out;
  out.mat = b * rho_sym * b.adjoint();
  out.factor_dims.assign(static_cast<size_t>(num_qubits), 2);
  return out;
}

int default_mixture_size(int num_qubits) { return num_qubits <= 6 ? 25 : 45; }

}  // namespace momentsep
