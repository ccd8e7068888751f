#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace momentsep {

/// Exponent vector alpha of a monomial x^alpha = x1^a1 ... xn^an.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents);

  static MultiIndex zero(int n);
  /// Unit vector e_i (0-based variable index).
  static MultiIndex unit(int n, int i);

  int size() const { return static_cast<int>(e_.size()); }
  int degree() const;
  int operator[](int i) const { return e_[static_cast<size_t>(i)]; }
  const std::vector<int>& exponents() const { return e_; }

  MultiIndex operator+(const MultiIndex& other) const;
  /// Component-wise difference; caller must ensure the result is nonnegative.
  MultiIndex operator-(const MultiIndex& other) const;
  bool operator==(const MultiIndex& other) const { return e_ == other.e_; }
  bool operator!=(const MultiIndex& other) const { return e_ != other.e_; }

  std::string to_string() const;

 private:
  std::vector<int> e_;
};

/// Degree-lexicographic order: lower degree first; within a degree the
/// monomial with the higher power of an earlier variable comes first
/// (x1^2 precedes x1 x2 precedes x2^2).
bool deg_lex_less(const MultiIndex& a, const MultiIndex& b);

struct DegLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    return deg_lex_less(a, b);
  }
};

/// All alpha with |alpha| <= k in n variables, in degree-lex order.
/// Size C(n+k, k).
std::vector<MultiIndex> monomial_basis(int n, int k);

/// C(n, k) as double (exact for the small arguments used here).
double binomial(int n, int k);

}  // namespace momentsep
