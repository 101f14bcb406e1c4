#include "factorlab/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "factorlab/error.hpp"

namespace factorlab {

namespace {

constexpr double kRotationTol = 1e-9;
constexpr double kOrthogonalityTol = 1e-9;

// Norm of a product of powers of orthogonal linear forms on l_2, computed
// after rotating the forms onto coordinates.
std::optional<double> rotated_product_norm(const PolyTuple& tuple) {
  std::vector<ComplexVector> forms;
  for (const auto& factor : tuple.polys()) {
    auto g = as_linear_form_power(factor);
    if (!g) return std::nullopt;
    forms.push_back(*g);
  }
  for (std::size_t i = 0; i < forms.size(); ++i) {
    for (std::size_t j = i + 1; j < forms.size(); ++j) {
      const double overlap = std::abs(forms[i].dot(forms[j]));
      if (overlap > kOrthogonalityTol * forms[i].norm() * forms[j].norm()) return std::nullopt;
    }
  }
  const Eigen::MatrixXcd unitary = orthonormal_completion(forms);
  const HomogeneousPoly rotated = substitute_linear(tuple.product(), unitary);

  // What survives must be a single monomial up to rounding.
  const Term* lead = nullptr;
  for (const auto& t : rotated.terms()) {
    if (!lead || std::abs(t.coef) > std::abs(lead->coef)) lead = &t;
  }
  if (!lead) return std::nullopt;
  for (const auto& t : rotated.terms()) {
    if (&t != lead && std::abs(t.coef) > kRotationTol * std::abs(lead->coef)) return std::nullopt;
  }
  std::vector<int> used;
  for (int e : lead->exponents) {
    if (e != 0) used.push_back(e);
  }
  return std::abs(lead->coef) * monomial_norm_exact(used, 2.0);
}

}  // namespace

PolyTuple::PolyTuple(std::vector<HomogeneousPoly> polys) : polys_(std::move(polys)) {
  if (polys_.empty()) throw Error(Errc::InvalidArgs, "empty polynomial tuple");
  for (const auto& p : polys_) {
    if (p.num_vars() != polys_.front().num_vars()) {
      throw Error(Errc::DimensionMismatch, "tuple factors use different numbers of variables");
    }
  }
}

DegreeList PolyTuple::degrees() const {
  std::vector<int> ks;
  ks.reserve(polys_.size());
  for (const auto& p : polys_) ks.push_back(p.degree());
  return DegreeList(std::move(ks));
}

HomogeneousPoly PolyTuple::product() const {
  HomogeneousPoly acc = polys_.front();
  for (std::size_t i = 1; i < polys_.size(); ++i) acc = multiply(acc, polys_[i]);
  return acc;
}

std::string_view to_string(NormMethod method) noexcept {
  return method == NormMethod::Exact ? "exact" : "estimated";
}

RatioReport make_report(double product_norm, std::vector<double> factor_norms, double target,
                        NormMethod method, bool converged) {
  double denom = 1.0;
  for (double n : factor_norms) {
    if (!(n > 0.0)) throw Error(Errc::InvalidArgs, "factor norms must be positive");
    denom *= n;
  }
  RatioReport r;
  r.product_norm = product_norm;
  r.factor_norms = std::move(factor_norms);
  r.ratio = product_norm / denom;
  r.target = target;
  r.slack = r.ratio - target;
  r.method = method;
  r.converged = converged;
  return r;
}

PolyTuple coordinate_tuple(const DegreeList& ks, int num_vars) {
  if (num_vars < ks.count()) {
    throw Error(Errc::DimensionTooSmall, std::to_string(ks.count()) + " factors need at least " +
                                             std::to_string(ks.count()) + " variables");
  }
  std::vector<HomogeneousPoly> polys;
  for (int i = 0; i < ks.count(); ++i) {
    polys.push_back(coordinate_power(i, ks[static_cast<std::size_t>(i)], num_vars));
  }
  return PolyTuple(std::move(polys));
}

std::vector<ComplexVector> roots_of_unity_forms(int n, int num_vars) {
  if (n < 1 || num_vars < n) {
    throw Error(Errc::InvalidArgs, "need 1 <= n <= num_vars, got n=" + std::to_string(n) +
                                       ", N=" + std::to_string(num_vars));
  }
  std::vector<ComplexVector> forms;
  for (int j = 1; j <= n; ++j) {
    ComplexVector g(num_vars);
    for (int m = 0; m < num_vars; ++m) {
      // Reduce m*j modulo N first so the angle stays in [0, 2 pi).
      const int r = (m * j) % num_vars;
      g[m] = std::polar(1.0, 2.0 * std::numbers::pi * r / num_vars);
    }
    forms.push_back(std::move(g));
  }
  return forms;
}

PolyTuple roots_of_unity_tuple(const DegreeList& ks, int num_vars) {
  const auto forms = roots_of_unity_forms(ks.count(), num_vars);
  std::vector<HomogeneousPoly> polys;
  for (int j = 0; j < ks.count(); ++j) {
    polys.push_back(linear_form_power(forms[static_cast<std::size_t>(j)], ks[static_cast<std::size_t>(j)]));
  }
  return PolyTuple(std::move(polys));
}

ComplexVector splitting_witness(const ComplexVector& x0, const ComplexVector& y0, int k, int l,
                                double p) {
  if (x0.size() != y0.size()) throw Error(Errc::DimensionMismatch, "x0 and y0 differ in length");
  if (k < 1 || l < 1) throw Error(Errc::InvalidArgs, "degrees must be >= 1");
  if (std::abs(vector_p_norm(x0, p) - 1.0) > 1e-9 || std::abs(vector_p_norm(y0, p) - 1.0) > 1e-9) {
    throw Error(Errc::NotNormalized, "x0 and y0 must have unit l_p norm");
  }
  for (Eigen::Index m = 0; m < x0.size(); ++m) {
    if (x0[m] != Complex(0.0, 0.0) && y0[m] != Complex(0.0, 0.0)) {
      throw Error(Errc::SupportOverlap, "x0 and y0 share coordinate " + std::to_string(m));
    }
  }
  const double total = k + l;
  const double inv_p = p == kInfinity ? 0.0 : 1.0 / p;
  return std::pow(k / total, inv_p) * x0 + std::pow(l / total, inv_p) * y0;
}

Eigen::MatrixXcd orthonormal_completion(std::span<const ComplexVector> forms) {
  if (forms.empty()) throw Error(Errc::InvalidArgs, "no forms to complete");
  const Eigen::Index n = forms.front().size();
  std::vector<ComplexVector> columns;
  for (const auto& g : forms) {
    if (g.size() != n) throw Error(Errc::DimensionMismatch, "forms differ in length");
    columns.push_back(g.conjugate() / g.norm());
  }
  for (Eigen::Index e = 0; e < n && static_cast<Eigen::Index>(columns.size()) < n; ++e) {
    ComplexVector v = ComplexVector::Unit(n, e);
    // Two Gram-Schmidt passes keep the completion orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& c : columns) v -= c.dot(v) * c;
    }
    if (v.norm() > 1e-8) columns.push_back(v / v.norm());
  }
  Eigen::MatrixXcd u(n, n);
  for (Eigen::Index j = 0; j < n; ++j) u.col(j) = columns[static_cast<std::size_t>(j)];
  return u;
}

RatioReport certify_equality(const PolyTuple& tuple, double p, NormMethod mode,
                             const EstimatorConfig& cfg) {
  const double target = p_constant(tuple.degrees(), p);
  const HomogeneousPoly product = tuple.product();

  if (mode == NormMethod::Estimated) {
    std::vector<double> norms;
    bool converged = true;
    for (const auto& factor : tuple.polys()) {
      const NormEstimate est = estimate_sup_norm(factor, p, cfg);
      norms.push_back(est.value);
      converged = converged && est.converged;
    }
    const NormEstimate num = estimate_sup_norm(product, p, cfg);
    return make_report(num.value, std::move(norms), target, mode, converged && num.converged);
  }

  std::vector<double> norms;
  for (const auto& factor : tuple.polys()) {
    const auto exact = exact_sup_norm(factor, p);
    if (!exact) throw Error(Errc::ExactFormUnavailable, "factor has no closed-form norm");
    norms.push_back(exact->value);
  }
  std::optional<double> product_norm;
  if (const auto exact = exact_sup_norm(product, p)) product_norm = exact->value;
  if (!product_norm && p == 2.0) product_norm = rotated_product_norm(tuple);
  if (!product_norm) throw Error(Errc::ExactFormUnavailable, "product has no closed-form norm");
  return make_report(*product_norm, std::move(norms), target, mode);
}

}  // namespace factorlab
