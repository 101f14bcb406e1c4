#include <doctest.h>

#include <functional>

#include "factorlab/error.hpp"
#include "factorlab/io.hpp"
#include "factorlab/parallel.hpp"
#include "factorlab/search.hpp"

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

}  // namespace

TEST_CASE("complex and vector layout") {
  CHECK(to_json(Complex(1.5, -2.0)).dump() == R"({"re":1.5,"im":-2.0})");
  CHECK(complex_from_json(parse_json(R"({"re":0.25,"im":3})")) == Complex(0.25, 3.0));
  ComplexVector v(2);
  v << Complex(1.0, 0.0), Complex(0.0, 1.0);
  CHECK(vector_from_json(to_json(v)) == v);
}

TEST_CASE("poly round trip is bit-exact") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const HomogeneousPoly p = random_poly(3, 3, seed, seed % 2 ? CoefDistribution::Gaussian : CoefDistribution::Sparse);
    const HomogeneousPoly back = poly_from_json(parse_json(to_json(p).dump()));
    CHECK(back == p);
    for (std::size_t i = 0; i < p.terms().size(); ++i) CHECK(back.terms()[i].coef == p.terms()[i].coef);
  }
}

TEST_CASE("matrix round trip") {
  Rng rng(8);
  const ComplexMatrix a = random_matrix(rng, 3);
  const Json j = matrix_to_json(a);
  CHECK(j["dim"] == 3);
  CHECK(j["entries"].size() == 9);
  CHECK(matrix_from_json(parse_json(j.dump())) == a);
}

TEST_CASE("field order is stable") {
  const Json r = to_json(make_report(0.5, {1.0, 2.0}, 0.2, NormMethod::Estimated));
  std::vector<std::string> keys;
  for (auto it = r.begin(); it != r.end(); ++it) keys.push_back(it.key());
  CHECK(keys.front() == "product_norm");
  CHECK(to_json(ConstantsRecord{}).begin().key() == "ks");
}

TEST_CASE("malformed input is a parse error") {
  CHECK(code_of([] { parse_json("{not json"); }) == Errc::ParseError);
  CHECK(code_of([] { complex_from_json(parse_json(R"({"re":1})")); }) == Errc::ParseError);
  CHECK(code_of([] { complex_from_json(parse_json(R"({"re":"a","im":0})")); }) == Errc::ParseError);
  CHECK(code_of([] { vector_from_json(parse_json(R"({"re":1,"im":0})")); }) == Errc::ParseError);
  CHECK(code_of([] { poly_from_json(parse_json(R"({"num_vars":2,"degree":1})")); }) == Errc::ParseError);
  CHECK(code_of([] { poly_from_json(parse_json(R"({"num_vars":2.5,"degree":1,"terms":[]})")); }) ==
        Errc::ParseError);
  CHECK(code_of([] { matrix_from_json(parse_json(R"({"dim":2,"entries":[]})")); }) == Errc::ParseError);
  CHECK(code_of([] { matrix_from_json(parse_json(R"({"dim":0,"entries":[]})")); }) == Errc::ParseError);
}

TEST_CASE("distribution names") {
  CHECK(to_string(CoefDistribution::Gaussian) == "gaussian");
  CHECK(to_string(CoefDistribution::Sparse) == "sparse");
}
