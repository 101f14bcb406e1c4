#include "factorlab/io.hpp"

#include <cmath>

#include "factorlab/error.hpp"

namespace factorlab {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw Error(Errc::ParseError, std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw Error(Errc::ParseError, std::string(what) + " must be an integer");
  return j.get<int>();
}

const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::ParseError, std::string(what) + " must be an array");
  return j;
}

}  // namespace

Json to_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

Json to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (const Complex& c : v) out.push_back(to_json(c));
  return out;
}

Json to_json(const HomogeneousPoly& poly) {
  Json terms = Json::array();
  for (const auto& t : poly.terms()) terms.push_back(Json{{"exponents", t.exponents}, {"coef", to_json(t.coef)}});
  return Json{{"num_vars", poly.num_vars()}, {"degree", poly.degree()}, {"terms", std::move(terms)}};
}

Json to_json(const NormEstimate& est) {
  return Json{{"value", est.value},
              {"witness", to_json(est.witness)},
              {"starts_used", est.starts_used},
              {"converged", est.converged},
              {"spread", est.spread}};
}

Json to_json(const RatioReport& report) {
  return Json{{"product_norm", report.product_norm},
              {"factor_norms", report.factor_norms},
              {"ratio", report.ratio},
              {"target", report.target},
              {"slack", report.slack},
              {"method", to_string(report.method)},
              {"converged", report.converged}};
}

Json to_json(const SearchResult& result) {
  Json tuple = Json::array();
  for (const auto& p : result.best_tuple) tuple.push_back(to_json(p));
  Json trace = Json::array();
  for (const auto& [evals, value] : result.trace) trace.push_back(Json::array({evals, value}));
  Json reports = Json::array();
  for (const auto& r : result.reports) reports.push_back(to_json(r));
  return Json{{"best_ratio", result.best_ratio},
              {"best_tuple", std::move(tuple)},
              {"flags", result.flags},
              {"seeds", result.seeds},
              {"trace", std::move(trace)},
              {"reports", std::move(reports)}};
}

Json to_json(const ConstantsRecord& record) {
  Json out{{"ks", record.ks},       {"p", record.p},   {"bst", record.bst},
           {"hilbert", record.hilbert}, {"lp", record.lp}, {"dn_bound", record.dn_bound},
           {"lemma1", record.lemma1}};
  if (record.sandwich_low) out["sandwich_low"] = *record.sandwich_low;
  if (record.sandwich_high) out["sandwich_high"] = *record.sandwich_high;
  return out;
}

Json to_json(const EstimatorConfig& cfg) {
  return Json{{"num_starts", cfg.num_starts},
              {"max_iters", cfg.max_iters},
              {"grad_tol", cfg.grad_tol},
              {"seed", cfg.seed}};
}

Json to_json(const SearchConfig& cfg) {
  return Json{{"num_vars", cfg.num_vars},
              {"degrees", cfg.degrees},
              {"p", cfg.p},
              {"num_tuples", cfg.num_tuples},
              {"seed", cfg.seed},
              {"norm_cfg", to_json(cfg.norm_cfg)},
              {"restarts", cfg.restarts},
              {"max_evals", cfg.max_evals},
              {"coef_distribution", to_string(cfg.coef_distribution)}};
}

Json to_json(const PinchingCheck& check) {
  return Json{{"additivity", check.additivity},
              {"contraction", check.contraction},
              {"block_sum", check.block_sum},
              {"pinched_power", check.pinched_power},
              {"full_power", check.full_power}};
}

Json matrix_to_json(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::DimensionMismatch, "expected a square matrix");
  return Json{{"dim", a.rows()}, {"entries", to_json(vectorize(a))}};
}

Complex complex_from_json(const Json& j) {
  return {number(field(j, "re"), "re"), number(field(j, "im"), "im")};
}

ComplexVector vector_from_json(const Json& j) {
  array(j, "complex vector");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = complex_from_json(j[i]);
  return v;
}

HomogeneousPoly poly_from_json(const Json& j) {
  const int num_vars = integer(field(j, "num_vars"), "num_vars");
  const int degree = integer(field(j, "degree"), "degree");
  std::vector<Term> terms;
  for (const Json& t : array(field(j, "terms"), "terms")) {
    MultiIndex alpha;
    for (const Json& e : array(field(t, "exponents"), "exponents")) alpha.push_back(integer(e, "exponent"));
    terms.push_back({std::move(alpha), complex_from_json(field(t, "coef"))});
  }
  return make_poly(num_vars, degree, std::move(terms));
}

ComplexMatrix matrix_from_json(const Json& j) {
  const int m = integer(field(j, "dim"), "dim");
  if (m < 1) throw Error(Errc::ParseError, "dim must be >= 1");
  const ComplexVector v = vector_from_json(field(j, "entries"));
  if (v.size() != static_cast<Eigen::Index>(m) * m) {
    throw Error(Errc::ParseError, "entries must hold dim^2 values");
  }
  return unvectorize(v, m);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
}

std::string_view to_string(CoefDistribution distribution) noexcept {
  return distribution == CoefDistribution::Gaussian ? "gaussian" : "sparse";
}

}  // namespace factorlab
