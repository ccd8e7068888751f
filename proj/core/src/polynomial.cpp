#include "momentsep/polynomial.hpp"

#include <cmath>
#include <stdexcept>

namespace momentsep {

Polynomial Polynomial::constant(int n, double c) {
  Polynomial p(n);
  p.add_term(MultiIndex::zero(n), c);
  return p;
}

Polynomial Polynomial::variable(int n, int i) {
  if (i < 0 || i >= n) throw std::invalid_argument("Polynomial::variable: index out of range");
  Polynomial p(n);
  p.add_term(MultiIndex::unit(n, i), 1.0);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_) d = std::max(d, a.degree());
  return d;
}

double Polynomial::coefficient(const MultiIndex& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& alpha, double c) {
  if (alpha.size() != n_) throw std::invalid_argument("Polynomial::add_term: wrong index size");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(alpha, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Polynomial::eval(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("Polynomial::eval: wrong point size");
  double v = 0.0;
  for (const auto& [a, c] : terms_) {
    double m = c;
    for (int i = 0; i < n_; ++i) {
      for (int p = 0; p < a[i]; ++p) m *= x[static_cast<size_t>(i)];
    }
    v += m;
  }
  return v;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  if (n_ != other.n_) throw std::invalid_argument("Polynomial: variable count mismatch");
  Polynomial r = *this;
  for (const auto& [a, c] : other.terms_) r.add_term(a, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  if (n_ != other.n_) throw std::invalid_argument("Polynomial: variable count mismatch");
  Polynomial r = *this;
  for (const auto& [a, c] : other.terms_) r.add_term(a, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (n_ != other.n_) throw std::invalid_argument("Polynomial: variable count mismatch");
  Polynomial r(n_);
  for (const auto& [a, ca] : terms_) {
    for (const auto& [b, cb] : other.terms_) r.add_term(a + b, ca * cb);
  }
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(n_);
  if (s == 0.0) return r;
  for (const auto& [a, c] : terms_) r.add_term(a, c * s);
  return r;
}

Polynomial Polynomial::shift_variables(int offset, int new_n) const {
  if (offset < 0 || offset + n_ > new_n) throw std::invalid_argument("Polynomial::shift_variables: bad offset");
  Polynomial r(new_n);
  for (const auto& [a, c] : terms_) {
    std::vector<int> e(static_cast<size_t>(new_n), 0);
    for (int i = 0; i < n_; ++i) e[static_cast<size_t>(offset + i)] = a[i];
    r.add_term(MultiIndex(std::move(e)), c);
  }
  return r;
}

}  // namespace momentsep
