#include "momentsep/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace momentsep {

MultiIndex::MultiIndex(std::vector<int> exponents) : e_(std::move(exponents)) {
  for (int v : e_) {
    if (v < 0) throw std::invalid_argument("MultiIndex: negative exponent");
  }
}

MultiIndex MultiIndex::zero(int n) { return MultiIndex(std::vector<int>(static_cast<size_t>(n), 0)); }

MultiIndex MultiIndex::unit(int n, int i) {
  std::vector<int> e(static_cast<size_t>(n), 0);
  e.at(static_cast<size_t>(i)) = 1;
  return MultiIndex(std::move(e));
}

int MultiIndex::degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  if (e_.size() != other.e_.size()) throw std::invalid_argument("MultiIndex: size mismatch");
  std::vector<int> r(e_.size());
  for (size_t i = 0; i < e_.size(); ++i) r[i] = e_[i] + other.e_[i];
  return MultiIndex(std::move(r));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  if (e_.size() != other.e_.size()) throw std::invalid_argument("MultiIndex: size mismatch");
  std::vector<int> r(e_.size());
  for (size_t i = 0; i < e_.size(); ++i) {
    r[i] = e_[i] - other.e_[i];
    if (r[i] < 0) throw std::invalid_argument("MultiIndex: negative difference");
  }
  return MultiIndex(std::move(r));
}

std::string MultiIndex::to_string() const {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < e_.size(); ++i) {
    if (i) os << ',';
    os << e_[i];
  }
  os << ')';
  return os.str();
}

bool deg_lex_less(const MultiIndex& a, const MultiIndex& b) {
  int da = a.degree(), db = b.degree();
  if (da != db) return da < db;
  // Same degree: earlier entry with the larger exponent comes first.
  for (int i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

std::vector<MultiIndex> monomial_basis(int n, int k) {
  if (n < 1) throw std::invalid_argument("monomial_basis: n must be >= 1");
  if (k < 0) throw std::invalid_argument("monomial_basis: k must be >= 0");
  std::vector<MultiIndex> out;
  std::vector<int> cur(static_cast<size_t>(n), 0);
  for (int deg = 0; deg <= k; ++deg) {
    // Compositions of deg into n parts, descending-lex, so that x1^deg
    // comes first and xn^deg last.
    std::fill(cur.begin(), cur.end(), 0);
    cur[0] = deg;
    while (true) {
      out.emplace_back(cur);
      // Successor: move one unit from the rightmost positive entry that is
      // not the last, pushing its tail weight to the next position.
      int i = n - 2;
      while (i >= 0 && cur[static_cast<size_t>(i)] == 0) --i;
      if (i < 0) break;
      cur[static_cast<size_t>(i)] -= 1;
      int tail = 0;
      for (int j = i + 1; j < n; ++j) {
        tail += cur[static_cast<size_t>(j)];
        cur[static_cast<size_t>(j)] = 0;
      }
      cur[static_cast<size_t>(i + 1)] = tail + 1;
    }
    if (deg == 0 && n >= 1) continue;
  }
  return out;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace momentsep
