#pragma once

#include <map>
#include <span>
#include <vector>

#include "momentsep/multi_index.hpp"

namespace momentsep {

/// Real multivariate polynomial stored as a sparse map alpha -> coefficient.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, DegLexLess>;

  explicit Polynomial(int n) : n_(n) {}

  static Polynomial zero(int n) { return Polynomial(n); }
  static Polynomial constant(int n, double c);
  /// The monomial x_i (0-based).
  static Polynomial variable(int n, int i);

  int num_vars() const { return n_; }
  int degree() const;
  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }

  double coefficient(const MultiIndex& alpha) const;
  /// Adds c to the coefficient of x^alpha, erasing entries that cancel.
  void add_term(const MultiIndex& alpha, double c);

  double eval(std::span<const double> x) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double s) const;

  /// Same polynomial over new_n variables with every variable index shifted
  /// by `offset`; used to embed factor constraints in a product set.
  Polynomial shift_variables(int offset, int new_n) const;

 private:
  int n_;
  TermMap terms_;
};

}  // namespace momentsep
