#include <doctest.h>

#include <cmath>
#include <numbers>

#include "factorlab/error.hpp"
#include "factorlab/io.hpp"
#include "factorlab/parallel.hpp"
#include "factorlab/poly.hpp"
#include "factorlab/search.hpp"
#include "oracles.hpp"

using namespace factorlab;

namespace {

const Complex kI(0.0, 1.0);

ComplexVector vec(std::initializer_list<Complex> values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (const Complex& c : values) v[i++] = c;
  return v;
}

bool same_terms(const HomogeneousPoly& a, const std::map<std::vector<int>, Complex>& b, double tol) {
  std::size_t nonzero = 0;
  for (const auto& [alpha, c] : b) nonzero += c != 0.0;
  if (a.size() != nonzero) return false;
  for (const auto& t : a.terms()) {
    auto it = b.find(t.exponents);
    if (it == b.end() || std::abs(it->second - t.coef) > tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_poly builds canonical forms") {
  const auto z1z2 = make_poly(2, 2, {{{1, 1}, 1.0}});
  CHECK(z1z2.size() == 1);
  CHECK(z1z2.terms()[0].exponents == MultiIndex{1, 1});

  const auto pruned = make_poly(2, 2, {{{2, 0}, 1.0}, {{1, 1}, 0.0}});
  REQUIRE(pruned.size() == 1);
  CHECK(pruned.terms()[0].exponents == MultiIndex{2, 0});

  try {
    make_poly(2, 2, {{{1, 0}, 1.0}});
    FAIL("expected DegreeMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegreeMismatch);
  }
  try {
    make_poly(2, 2, {{{1, 1, 0}, 1.0}});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionMismatch);
  }
}

TEST_CASE("make_poly sums repeats and orders terms graded-lexicographically") {
  const auto p = make_poly(2, 2, {{{0, 2}, 1.0}, {{1, 1}, 2.0}, {{2, 0}, 3.0}, {{1, 1}, -2.0}});
  REQUIRE(p.size() == 2);
  CHECK(p.terms()[0].exponents == MultiIndex{2, 0});
  CHECK(p.terms()[1].exponents == MultiIndex{0, 2});
  CHECK(grlex_before({2, 0}, {1, 1}));
  CHECK(grlex_before({1, 1}, {0, 2}));
  CHECK_FALSE(grlex_before({0, 2}, {1, 1}));
}

TEST_CASE("make_poly rejects empty dimensions and degrees") {
  CHECK_THROWS_AS(make_poly(0, 1, {}), Error);
  CHECK_THROWS_AS(make_poly(1, 0, {}), Error);
  CHECK_THROWS_AS(make_poly(2, 1, {{{2, -1}, 1.0}}), Error);
}

TEST_CASE("evaluate") {
  const auto z1z2 = make_poly(2, 2, {{{1, 1}, 1.0}});
  CHECK(std::abs(evaluate(z1z2, vec({1.0, kI})) - kI) < 1e-15);
  const auto z1sq = make_poly(2, 2, {{{2, 0}, 1.0}});
  CHECK(std::abs(evaluate(z1sq, vec({2.0, 5.0})) - 4.0) < 1e-15);
  const Complex lambda(3.0, 4.0);
  CHECK(std::abs(evaluate(z1z2, vec({lambda, lambda * kI})) - lambda * lambda * kI) < 1e-12);
  CHECK_THROWS_AS(evaluate(z1z2, vec({1.0})), Error);
}

TEST_CASE("evaluate_with_gradient matches finite differences") {
  const auto p = random_poly(3, 4, 11);
  Rng rng(5);
  const ComplexVector z = complex_gaussian_vector(rng, 3);
  ComplexVector grad;
  const Complex v = evaluate_with_gradient(p, z, grad);
  CHECK(std::abs(v - evaluate(p, z)) < 1e-12 * std::abs(v));
  for (Eigen::Index m = 0; m < 3; ++m) {
    ComplexVector zp = z, zm = z;
    const double h = 1e-6;
    zp[m] += h;
    zm[m] -= h;
    const Complex fd = (evaluate(p, zp) - evaluate(p, zm)) / (2.0 * h);
    CHECK(std::abs(fd - grad[m]) < 1e-6 * (1.0 + std::abs(grad[m])));
  }
}

TEST_CASE("multiply") {
  const auto z1 = coordinate_power(0, 1, 2);
  const auto z2 = coordinate_power(1, 1, 2);
  CHECK(multiply(z1, z2) == make_poly(2, 2, {{{1, 1}, 1.0}}));
  CHECK(multiply(z1, z1) == make_poly(2, 2, {{{2, 0}, 1.0}}));
  const auto sum = add(z1, z2);
  const auto diff = add(z1, scale(z2, -1.0));
  CHECK(multiply(sum, diff) == make_poly(2, 2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}}));
  CHECK_THROWS_AS(multiply(z1, coordinate_power(0, 1, 3)), Error);
}

TEST_CASE("multiply agrees with a schoolbook product") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto a = random_poly(3, 2, derive_seed(1, s));
    const auto b = random_poly(3, 3, derive_seed(2, s));
    CHECK(same_terms(multiply(a, b), oracle::product_direct(a, b), 1e-14));
  }
}

TEST_CASE("coordinate_power") {
  CHECK(coordinate_power(0, 3, 2) == make_poly(2, 3, {{{3, 0}, 1.0}}));
  CHECK(coordinate_power(1, 1, 2) == make_poly(2, 1, {{{0, 1}, 1.0}}));
  CHECK(std::abs(evaluate(coordinate_power(0, 2, 2), vec({kI, 0.0})) + 1.0) < 1e-15);
  CHECK_THROWS_AS(coordinate_power(2, 1, 2), Error);
  CHECK_THROWS_AS(coordinate_power(-1, 1, 2), Error);
}

TEST_CASE("linear_form_power") {
  CHECK(linear_form_power(vec({1.0, 1.0}), 2) == make_poly(2, 2, {{{2, 0}, 1.0}, {{1, 1}, 2.0}, {{0, 2}, 1.0}}));
  CHECK(linear_form_power(vec({1.0, -1.0}), 1) == make_poly(2, 1, {{{1, 0}, 1.0}, {{0, 1}, -1.0}}));
  const double t = 2.0 * std::numbers::pi / 3.0;
  const auto g = vec({1.0, std::polar(1.0, t), std::polar(1.0, 2.0 * t)});
  CHECK(std::abs(evaluate(linear_form_power(g, 2), vec({1.0, 0.0, 0.0})) - 1.0) < 1e-14);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexVector h = complex_gaussian_vector(rng, 4);
    const ComplexVector z = complex_gaussian_vector(rng, 4);
    const Complex expected = std::pow((h.transpose() * z).value(), 5);
    const double scale = std::pow((h.cwiseAbs().transpose() * z.cwiseAbs()).value(), 5);
    CHECK(std::abs(evaluate(linear_form_power(h, 5), z) - expected) <= 1e-12 * scale);
  }
}

TEST_CASE("linear_form_power guards the expansion size") {
  CHECK(monomial_count(3, 2) == 6);
  CHECK(monomial_count(8, 6) == 1716);
  CHECK(monomial_count(200, 50) == UINT64_MAX);
  try {
    linear_form_power(ComplexVector::Ones(60), 6);
    FAIL("expected ExpansionTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ExpansionTooLarge);
  }
}

TEST_CASE("monomials_of_degree enumerates in canonical order") {
  const auto ms = monomials_of_degree(3, 2);
  REQUIRE(ms.size() == 6);
  for (std::size_t i = 1; i < ms.size(); ++i) CHECK(grlex_before(ms[i - 1], ms[i]));
  CHECK(ms.front() == MultiIndex{2, 0, 0});
  CHECK(ms.back() == MultiIndex{0, 0, 2});
}

TEST_CASE("depends_only_on and support") {
  const auto z1z2 = make_poly(2, 2, {{{1, 1}, 1.0}});
  const std::vector<int> both{0, 1}, first{0};
  CHECK(depends_only_on(z1z2, both));
  CHECK_FALSE(depends_only_on(z1z2, first));
  const auto z1sq = coordinate_power(0, 2, 3);
  const std::vector<int> one_three{0, 2};
  CHECK(depends_only_on(z1sq, one_three));
  CHECK(support(z1z2) == std::vector<int>{0, 1});
  CHECK(support(z1sq) == std::vector<int>{0});
}

TEST_CASE("embed") {
  const auto z1z2 = make_poly(2, 2, {{{1, 1}, 1.0}});
  CHECK(embed(z1z2, 3) == make_poly(3, 2, {{{1, 1, 0}, 1.0}}));
  const auto z1 = coordinate_power(0, 1, 1);
  CHECK(embed(z1, 1) == z1);
  CHECK_THROWS_AS(embed(z1z2, 1), Error);

  Rng rng(9);
  const auto p = random_poly(2, 3, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexVector z = complex_gaussian_vector(rng, 2);
    const ComplexVector padded = vec({z[0], z[1], 7.0});
    CHECK(std::abs(evaluate(embed(p, 3), padded) - evaluate(p, z)) < 1e-12);
  }
}

TEST_CASE("substitute_linear composes with a matrix") {
  Rng rng(21);
  const auto p = random_poly(3, 3, 8);
  Eigen::MatrixXcd u(3, 2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 2; ++j) u(i, j) = complex_gaussian(rng);
  }
  const auto q = substitute_linear(p, u);
  CHECK(q.num_vars() == 2);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexVector w = complex_gaussian_vector(rng, 2);
    const Complex expected = evaluate(p, ComplexVector(u * w));
    CHECK(std::abs(evaluate(q, w) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("property: homogeneity") {
  Rng rng(101);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int n = 1 + static_cast<int>(s % 4);
    const int k = 1 + static_cast<int>(s % 5);
    const auto p = random_poly(n, k, derive_seed(7, s));
    const ComplexVector z = complex_gaussian_vector(rng, n);
    const Complex lambda = complex_gaussian(rng) * 2.0;
    const Complex pz = evaluate(p, z);
    const Complex lhs = evaluate(p, ComplexVector(lambda * z));
    const double lk = std::pow(std::abs(lambda), k);
    CHECK(std::abs(lhs - std::pow(lambda, k) * pz) <= 1e-10 * lk * std::max(1.0, std::abs(pz)));
  }
}

TEST_CASE("property: evaluation matches term-by-term powers") {
  Rng rng(102);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = random_poly(3, 1 + static_cast<int>(s % 6), derive_seed(8, s));
    const ComplexVector z = complex_gaussian_vector(rng, 3);
    const Complex expected = oracle::eval_direct(p, z);
    CHECK(std::abs(evaluate(p, z) - expected) <= 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("property: product consistency") {
  Rng rng(103);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const int n = 1 + static_cast<int>(s % 4);
    const auto p = random_poly(n, 1 + static_cast<int>(s % 3), derive_seed(9, s));
    const auto q = random_poly(n, 1 + static_cast<int>((s / 3) % 3), derive_seed(10, s));
    const ComplexVector z = complex_gaussian_vector(rng, n);
    const Complex expected = evaluate(p, z) * evaluate(q, z);
    CHECK(std::abs(evaluate(multiply(p, q), z) - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("property: canonical form is idempotent and serialization round-trips") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto p = random_poly(3, 1 + static_cast<int>(s % 4), derive_seed(11, s), CoefDistribution::Sparse);
    CHECK(make_poly(p.num_vars(), p.degree(), p.terms()) == p);
    const std::string text = to_json(p).dump();
    const auto back = poly_from_json(parse_json(text));
    CHECK(back == p);
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(back.terms()[i].coef.real() == p.terms()[i].coef.real());
      CHECK(back.terms()[i].coef.imag() == p.terms()[i].coef.imag());
    }
  }
}

TEST_CASE("property: embed preserves depends_only_on") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = random_poly(3, 2, derive_seed(12, s), CoefDistribution::Sparse);
    for (const std::vector<int>& set : {std::vector<int>{0}, {0, 1}, {1, 2}, {2}}) {
      CHECK(depends_only_on(p, set) == depends_only_on(embed(p, 5), set));
    }
  }
}
