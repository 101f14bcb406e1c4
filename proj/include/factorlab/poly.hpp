#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace factorlab {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;

/// Exponent of each variable; its length is always the ambient number of
/// variables.
using MultiIndex = std::vector<int>;

struct Term {
  MultiIndex exponents;
  Complex coef;
};

inline int total_degree(const MultiIndex& alpha) {
  int d = 0;
  for (int e : alpha) d += e;
  return d;
}

/// Graded lexicographic order, strict "comes first" relation. Among indices of
/// equal total degree the one with the larger leading exponent comes first,
/// so z1^2 precedes z1*z2 precedes z2^2.
bool grlex_before(const MultiIndex& a, const MultiIndex& b);

/// Sparse complex homogeneous polynomial in a fixed number of variables.
///
/// Instances are only produced by make_poly() and the operations below, so
/// every stored term has total degree degree(), no stored coefficient is
/// exactly zero, and terms are kept in grlex_before order. Values are
/// immutable after construction.
class HomogeneousPoly {
 public:
  int num_vars() const noexcept { return num_vars_; }
  int degree() const noexcept { return degree_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }

  friend bool operator==(const HomogeneousPoly& a, const HomogeneousPoly& b);

 private:
  HomogeneousPoly(int num_vars, int degree, std::vector<Term> terms)
      : num_vars_(num_vars), degree_(degree), terms_(std::move(terms)) {}

  friend HomogeneousPoly make_poly(int num_vars, int degree, std::vector<Term> terms);

  int num_vars_;
  int degree_;
  std::vector<Term> terms_;
};

/// Builds the canonical form: repeated multi-indices are summed, exact zeros
/// are pruned and terms are sorted. Throws DegreeMismatch for a term of the
/// wrong total degree (or a negative exponent) and DimensionMismatch for a
/// multi-index of the wrong length.
HomogeneousPoly make_poly(int num_vars, int degree, std::vector<Term> terms);

Complex evaluate(const HomogeneousPoly& poly, const ComplexVector& z);

template <typename Derived>
Complex evaluate(const HomogeneousPoly& poly, const Eigen::MatrixBase<Derived>& z) {
  return evaluate(poly, ComplexVector(z));
}

/// Value together with the holomorphic partials dP/dz_m, written to grad.
Complex evaluate_with_gradient(const HomogeneousPoly& poly, const ComplexVector& z,
                               ComplexVector& grad);

HomogeneousPoly multiply(const HomogeneousPoly& lhs, const HomogeneousPoly& rhs);
HomogeneousPoly add(const HomogeneousPoly& lhs, const HomogeneousPoly& rhs);
HomogeneousPoly scale(const HomogeneousPoly& poly, Complex factor);

/// z_index^k in num_vars variables. Indices are zero-based.
HomogeneousPoly coordinate_power(int index, int k, int num_vars);

/// Multinomial expansion of (sum_m g_m z_m)^k. Throws ExpansionTooLarge when
/// the expansion would exceed kMaxExpansionTerms monomials.
HomogeneousPoly linear_form_power(const ComplexVector& g, int k);

inline constexpr std::uint64_t kMaxExpansionTerms = 1'000'000;

/// C(num_vars + degree - 1, degree), saturating at UINT64_MAX.
std::uint64_t monomial_count(int num_vars, int degree);

/// Every multi-index of the given total degree, in canonical order.
std::vector<MultiIndex> monomials_of_degree(int num_vars, int degree);

/// True iff every stored monomial only involves variables in index_set
/// (zero-based).
bool depends_only_on(const HomogeneousPoly& poly, std::span<const int> index_set);

/// Zero-based indices of the variables that appear in some stored monomial.
std::vector<int> support(const HomogeneousPoly& poly);

/// Same polynomial viewed in new_num_vars >= num_vars variables.
HomogeneousPoly embed(const HomogeneousPoly& poly, int new_num_vars);

/// Linear change of variables: returns Q with Q(w) = P(U w). U has
/// poly.num_vars() rows.
HomogeneousPoly substitute_linear(const HomogeneousPoly& poly, const Eigen::MatrixXcd& transform);

/// Euclidean norm of the coefficient vector.
double coefficient_norm(const HomogeneousPoly& poly);

}  // namespace factorlab
