#include <doctest.h>

#include <stdexcept>

#include "momentsep/multi_index.hpp"
#include "momentsep/polynomial.hpp"

using namespace momentsep;

TEST_CASE("monomial basis n=3 k=1 is [1, x1, x2, x3]") {
  auto basis = monomial_basis(3, 1);
  REQUIRE(basis.size() == 4);
  CHECK(basis[0] == MultiIndex({0, 0, 0}));
  CHECK(basis[1] == MultiIndex({1, 0, 0}));
  CHECK(basis[2] == MultiIndex({0, 1, 0}));
  CHECK(basis[3] == MultiIndex({0, 0, 1}));
}

TEST_CASE("monomial basis n=3 k=2 matches the degree-lex listing") {
  auto basis = monomial_basis(3, 2);
  std::vector<std::vector<int>> expected = {
      {0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2, 0, 0},
      {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
  REQUIRE(basis.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) CHECK(basis[i].exponents() == expected[i]);
}

TEST_CASE("coefficient vector of 7*x3 - 3*x2^2 + 2 in the degree-lex basis") {
  Polynomial p(3);
  p.add_term(MultiIndex({0, 0, 1}), 7.0);
  p.add_term(MultiIndex({0, 2, 0}), -3.0);
  p.add_term(MultiIndex::zero(3), 2.0);
  auto basis = monomial_basis(3, 2);
  std::vector<double> vec;
  for (const auto& a : basis) vec.push_back(p.coefficient(a));
  std::vector<double> expected = {2, 0, 0, 7, 0, 0, 0, -3, 0, 0};
  CHECK(vec == expected);
}

TEST_CASE("basis size is C(n+k, k) and lower bases are prefixes") {
  for (int n : {1, 2, 3, 6}) {
    for (int k : {0, 1, 2, 3}) {
      auto b = monomial_basis(n, k);
      CHECK(static_cast<double>(b.size()) == binomial(n + k, k));
      if (k > 0) {
        auto prev = monomial_basis(n, k - 1);
        for (size_t i = 0; i < prev.size(); ++i) CHECK(b[i] == prev[i]);
      }
    }
  }
}

TEST_CASE("deg-lex order sorts by degree then descending exponent tuples") {
  CHECK(deg_lex_less(MultiIndex({0, 0, 1}), MultiIndex({2, 0, 0})));
  CHECK(deg_lex_less(MultiIndex({2, 0, 0}), MultiIndex({1, 1, 0})));
  CHECK(deg_lex_less(MultiIndex({0, 2, 0}), MultiIndex({0, 1, 1})));
  CHECK(!deg_lex_less(MultiIndex({1, 0, 0}), MultiIndex({1, 0, 0})));
}

TEST_CASE("index arithmetic and validation") {
  MultiIndex a({1, 2, 0}), b({0, 1, 1});
  CHECK((a + b) == MultiIndex({1, 3, 1}));
  CHECK(a.degree() == 3);
  CHECK_THROWS_AS(MultiIndex({-1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(b - a, std::invalid_argument);
}
