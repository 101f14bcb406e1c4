#include <doctest.h>

#include <cmath>
#include <functional>

#include "factorlab/constants.hpp"
#include "factorlab/error.hpp"
#include "factorlab/schatten.hpp"
#include "oracles.hpp"

using namespace factorlab;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgs;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("schatten_norm examples") {
  const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
  CHECK(schatten_norm(id, 1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(schatten_norm(id, 2.0) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(schatten_norm(id, kInfinity) == doctest::Approx(1.0).epsilon(1e-14));

  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = Complex(0.0, -4.0);
  CHECK(schatten_norm(d, 1.0) == doctest::Approx(7.0).epsilon(1e-14));
  CHECK(schatten_norm(d, 2.0) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(schatten_norm(d, 3.0) == doctest::Approx(std::cbrt(91.0)).epsilon(1e-14));

  ComplexMatrix r1(2, 2);
  r1 << 1.0, 1.0, 1.0, 1.0;
  CHECK(schatten_norm(r1, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(schatten_norm(r1, 1.7) == doctest::Approx(2.0).epsilon(1e-14));

  CHECK(code_of([&] { schatten_norm(id, 0.5); }) == Errc::InvalidExponent);
  CHECK(code_of([] { schatten_norm(ComplexMatrix::Zero(2, 3), 2.0); }) == Errc::DimensionMismatch);
}

TEST_CASE("property: 2x2 singular values against the closed form") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2);
    const auto [s1, s2] = oracle::singular_values_2x2(a(0, 0), a(0, 1), a(1, 0), a(1, 1));
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double expected = std::pow(std::pow(s1, p) + std::pow(s2, p), 1.0 / p);
      CHECK(rel(schatten_norm(a, p), expected) < 1e-10);
    }
    CHECK(rel(schatten_norm(a, kInfinity), s1) < 1e-12);
  }
}

TEST_CASE("property: unitary invariance and Frobenius at p = 2") {
  Rng rng(4);
  for (int m = 1; m <= 5; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix a = random_matrix(rng, m);
      const ComplexMatrix u = random_unitary(rng, m);
      const ComplexMatrix v = random_unitary(rng, m);
      CHECK((u.adjoint() * u - ComplexMatrix::Identity(m, m)).norm() < 1e-12);
      CHECK(rel(schatten_norm(a, 2.0), a.norm()) < 1e-12);
      for (double p : {1.0, 1.5, 3.0, kInfinity}) {
        CHECK(rel(schatten_norm(u * a * v, p), schatten_norm(a, p)) < 1e-10);
      }
    }
  }
}

TEST_CASE("vectorize is row-major") {
  ComplexMatrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const ComplexVector v = vectorize(a);
  CHECK(v[1] == Complex(2.0));
  CHECK(v[2] == Complex(3.0));
  CHECK(unvectorize(v, 2) == a);
  CHECK(code_of([&] { unvectorize(v, 3); }) == Errc::DimensionMismatch);
  CHECK(evaluate(entry_poly(0, 1, 2), v) == Complex(2.0));
  CHECK(code_of([] { entry_poly(2, 0, 2); }) == Errc::IndexOutOfRange);
}

TEST_CASE("ProjectionPair and pinch") {
  const ProjectionPair pp(3, {0, 2});
  CHECK(pp.block(0) == std::vector<int>{0, 2});
  CHECK(pp.block(1) == std::vector<int>{1});

  ComplexMatrix a(3, 3);
  a << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  ComplexMatrix expected(3, 3);
  expected << 1, 0, 3, 0, 5, 0, 7, 0, 9;
  CHECK(pinch(a, pp) == expected);
  const ComplexMatrix first = compress(a, pp, 0);
  CHECK(first(1, 1) == Complex(0.0));
  CHECK(first(2, 0) == Complex(7.0));
  CHECK(first + compress(a, pp, 1) == expected);

  CHECK(code_of([] { ProjectionPair(1, {0}); }) == Errc::InvalidArgs);
  CHECK(code_of([] { ProjectionPair(3, {}); }) == Errc::InvalidArgs);
  CHECK(code_of([] { ProjectionPair(3, {0, 1, 2}); }) == Errc::InvalidArgs);
  CHECK(code_of([] { ProjectionPair(3, {0, 0}); }) == Errc::InvalidArgs);
  CHECK(code_of([] { ProjectionPair(3, {3}); }) == Errc::InvalidArgs);
  CHECK(code_of([&] { pinch(ComplexMatrix::Zero(2, 2), pp); }) == Errc::DimensionMismatch);
}

TEST_CASE("pinching examples") {
  ComplexMatrix ones = ComplexMatrix::Constant(2, 2, 1.0);
  const PinchingCheck c = pinching_checks(ones, ProjectionPair(2, {0}), 1.0);
  CHECK(c.additivity);
  CHECK(c.contraction);
  CHECK(c.block_sum == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(c.full_power == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("property: pinching additivity and contraction") {
  Rng rng(5);
  for (int m = 2; m <= 6; ++m) {
    for (int trial = 0; trial < 20; ++trial) {
      const ComplexMatrix a = random_matrix(rng, m);
      const ProjectionPair pp(m, m == 2 ? std::vector<int>{1} : std::vector<int>{0, m - 1});
      for (double p : {1.0, 1.5, 2.0, 4.0}) {
        const PinchingCheck c = pinching_checks(a, pp, p);
        CHECK(c.additivity);
        CHECK(c.contraction);
      }
    }
  }
}

TEST_CASE("matrix_poly_sup examples") {
  const HomogeneousPoly a11 = entry_poly(0, 0, 2);
  for (double p : {1.25, 2.0, 3.0}) {
    const NormEstimate e = matrix_poly_sup(a11, p, 2);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(schatten_norm(unvectorize(e.witness, 2), p) == doctest::Approx(1.0).epsilon(1e-12));
  }
  const HomogeneousPoly diag = multiply(a11, entry_poly(1, 1, 2));
  const NormEstimate d = matrix_poly_sup(diag, 1.5, 2);
  CHECK(d.value == doctest::Approx(std::pow(4.0, -2.0 / 3.0)).epsilon(1e-8));
  CHECK(d.value <= std::pow(4.0, -2.0 / 3.0) * (1.0 + 1e-12));

  const NormEstimate b = matrix_brute_force_sup(diag, 1.5, 2, 4000, 9);
  CHECK(b.value <= d.value * (1.0 + 1e-9));
  CHECK(b.value >= d.value * 0.99);

  CHECK(code_of([&] { matrix_poly_sup(a11, 1.0, 2); }) == Errc::InvalidExponent);
  CHECK(code_of([&] { matrix_poly_sup(a11, 2.0, 3); }) == Errc::DimensionMismatch);
}

TEST_CASE("matrix_ratio on the diagonal pair meets the constant") {
  const PolyTuple t({entry_poly(0, 0, 2), entry_poly(1, 1, 2)});
  for (double p : {1.25, 1.5, 2.0}) {
    const RatioReport r = matrix_ratio(t, p, 2);
    CHECK(rel(r.ratio, p_constant(DegreeList({1, 1}), p)) < 1e-8);
  }
}

TEST_CASE("verify_matrix_batch") {
  SearchConfig cfg;
  cfg.num_vars = 4;
  cfg.degrees = {1, 1};
  cfg.p = 1.5;
  cfg.num_tuples = 6;
  cfg.norm_cfg.num_starts = 16;
  const SearchResult res = verify_matrix_batch(cfg, 2);
  CHECK(res.reports.size() == 6);
  CHECK(res.flags.empty());
  cfg.num_vars = 3;
  CHECK(code_of([&] { verify_matrix_batch(cfg, 2); }) == Errc::DimensionMismatch);
}

TEST_CASE("property: padding leaves norms and sup-norms unchanged") {
  Rng rng(6);
  for (int m = 1; m <= 3; ++m) {
    const ComplexMatrix a = random_matrix(rng, m);
    const ComplexMatrix padded = pad_matrix(a);
    for (double p : {1.0, 1.5, 3.0}) CHECK(rel(schatten_norm(padded, p), schatten_norm(a, p)) < 1e-12);
    const HomogeneousPoly poly = multiply(entry_poly(0, 0, m), entry_poly(m - 1, 0, m));
    CHECK(std::abs(evaluate(pad_poly(poly, m), vectorize(padded)) - evaluate(poly, vectorize(a))) < 1e-12);
  }
  const HomogeneousPoly diag = multiply(entry_poly(0, 0, 2), entry_poly(1, 1, 2));
  const double small = matrix_poly_sup(diag, 1.5, 2).value;
  const double big = matrix_poly_sup(pad_poly(diag, 2), 1.5, 3).value;
  CHECK(rel(big, small) < 1e-7);
}
