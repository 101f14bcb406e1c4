#include "factorlab/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "factorlab/error.hpp"

namespace factorlab {

namespace {

struct GrlexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const { return grlex_before(a, b); }
};

using TermMap = std::map<MultiIndex, Complex, GrlexLess>;

std::vector<Term> to_terms(const TermMap& map) {
  std::vector<Term> out;
  out.reserve(map.size());
  for (const auto& [alpha, c] : map) {
    if (c != Complex(0.0, 0.0)) out.push_back({alpha, c});
  }
  return out;
}

// Fills table[m * (degree + 1) + j] = z_m^j.
void power_table(const ComplexVector& z, int degree, std::vector<Complex>& table) {
  const auto n = static_cast<std::size_t>(z.size());
  const auto stride = static_cast<std::size_t>(degree + 1);
  table.resize(n * stride);
  for (std::size_t m = 0; m < n; ++m) {
    Complex acc(1.0, 0.0);
    table[m * stride] = acc;
    for (std::size_t j = 1; j < stride; ++j) {
      acc *= z[static_cast<Eigen::Index>(m)];
      table[m * stride + j] = acc;
    }
  }
}

void check_length(const HomogeneousPoly& poly, const ComplexVector& z) {
  if (z.size() != poly.num_vars()) {
    throw Error(Errc::DimensionMismatch, "vector of length " + std::to_string(z.size()) +
                                             " for a polynomial in " +
                                             std::to_string(poly.num_vars()) + " variables");
  }
}

void enumerate(int remaining_vars, int remaining_degree, MultiIndex& current,
               std::vector<MultiIndex>& out) {
  const auto pos = current.size() - static_cast<std::size_t>(remaining_vars);
  if (remaining_vars == 1) {
    current[pos] = remaining_degree;
    out.push_back(current);
    return;
  }
  for (int e = remaining_degree; e >= 0; --e) {
    current[pos] = e;
    enumerate(remaining_vars - 1, remaining_degree - e, current, out);
  }
  current[pos] = 0;
}

}  // namespace

bool grlex_before(const MultiIndex& a, const MultiIndex& b) {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

bool operator==(const HomogeneousPoly& a, const HomogeneousPoly& b) {
  if (a.num_vars_ != b.num_vars_ || a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) {
    return false;
  }
  for (std::size_t t = 0; t < a.terms_.size(); ++t) {
    if (a.terms_[t].exponents != b.terms_[t].exponents || a.terms_[t].coef != b.terms_[t].coef) {
      return false;
    }
  }
  return true;
}

HomogeneousPoly make_poly(int num_vars, int degree, std::vector<Term> terms) {
  if (num_vars < 1) throw Error(Errc::InvalidArgs, "num_vars must be at least 1");
  if (degree < 1) throw Error(Errc::InvalidArgs, "degree must be at least 1");
  TermMap map;
  for (auto& term : terms) {
    if (term.exponents.size() != static_cast<std::size_t>(num_vars)) {
      throw Error(Errc::DimensionMismatch, "multi-index of length " +
                                               std::to_string(term.exponents.size()) +
                                               ", expected " + std::to_string(num_vars));
    }
    if (std::any_of(term.exponents.begin(), term.exponents.end(), [](int e) { return e < 0; })) {
      throw Error(Errc::DegreeMismatch, "negative exponent");
    }
    if (total_degree(term.exponents) != degree) {
      throw Error(Errc::DegreeMismatch, "term of degree " +
                                            std::to_string(total_degree(term.exponents)) +
                                            " in a polynomial of degree " + std::to_string(degree));
    }
    map[std::move(term.exponents)] += term.coef;
  }
  return HomogeneousPoly(num_vars, degree, to_terms(map));
}

Complex evaluate(const HomogeneousPoly& poly, const ComplexVector& z) {
  check_length(poly, z);
  thread_local std::vector<Complex> table;
  power_table(z, poly.degree(), table);
  const auto stride = static_cast<std::size_t>(poly.degree() + 1);
  Complex sum(0.0, 0.0);
  for (const auto& term : poly.terms()) {
    Complex mono = term.coef;
    for (std::size_t m = 0; m < term.exponents.size(); ++m) {
      if (term.exponents[m] != 0) mono *= table[m * stride + static_cast<std::size_t>(term.exponents[m])];
    }
    sum += mono;
  }
  return sum;
}

Complex evaluate_with_gradient(const HomogeneousPoly& poly, const ComplexVector& z,
                               ComplexVector& grad) {
  check_length(poly, z);
  thread_local std::vector<Complex> table;
  power_table(z, poly.degree(), table);
  const auto stride = static_cast<std::size_t>(poly.degree() + 1);
  const auto n = static_cast<std::size_t>(poly.num_vars());
  grad.setZero(poly.num_vars());
  Complex sum(0.0, 0.0);
  for (const auto& term : poly.terms()) {
    const auto& alpha = term.exponents;
    Complex mono = term.coef;
    for (std::size_t m = 0; m < n; ++m) {
      if (alpha[m] != 0) mono *= table[m * stride + static_cast<std::size_t>(alpha[m])];
    }
    sum += mono;
    for (std::size_t m = 0; m < n; ++m) {
      if (alpha[m] == 0) continue;
      Complex partial = term.coef * static_cast<double>(alpha[m]) *
                        table[m * stride + static_cast<std::size_t>(alpha[m] - 1)];
      for (std::size_t j = 0; j < n; ++j) {
        if (j != m && alpha[j] != 0) partial *= table[j * stride + static_cast<std::size_t>(alpha[j])];
      }
      grad[static_cast<Eigen::Index>(m)] += partial;
    }
  }
  return sum;
}

HomogeneousPoly multiply(const HomogeneousPoly& lhs, const HomogeneousPoly& rhs) {
  if (lhs.num_vars() != rhs.num_vars()) {
    throw Error(Errc::DimensionMismatch, "factors live in different numbers of variables");
  }
  TermMap map;
  MultiIndex alpha(static_cast<std::size_t>(lhs.num_vars()));
  for (const auto& a : lhs.terms()) {
    for (const auto& b : rhs.terms()) {
      for (std::size_t m = 0; m < alpha.size(); ++m) alpha[m] = a.exponents[m] + b.exponents[m];
      map[alpha] += a.coef * b.coef;
    }
  }
  std::vector<Term> terms = to_terms(map);
  return make_poly(lhs.num_vars(), lhs.degree() + rhs.degree(), std::move(terms));
}

HomogeneousPoly add(const HomogeneousPoly& lhs, const HomogeneousPoly& rhs) {
  if (lhs.num_vars() != rhs.num_vars()) {
    throw Error(Errc::DimensionMismatch, "summands live in different numbers of variables");
  }
  if (lhs.degree() != rhs.degree()) throw Error(Errc::DegreeMismatch, "summands of different degree");
  std::vector<Term> terms = lhs.terms();
  terms.insert(terms.end(), rhs.terms().begin(), rhs.terms().end());
  return make_poly(lhs.num_vars(), lhs.degree(), std::move(terms));
}

HomogeneousPoly scale(const HomogeneousPoly& poly, Complex factor) {
  std::vector<Term> terms = poly.terms();
  for (auto& t : terms) t.coef *= factor;
  return make_poly(poly.num_vars(), poly.degree(), std::move(terms));
}

HomogeneousPoly coordinate_power(int index, int k, int num_vars) {
  if (index < 0 || index >= num_vars) {
    throw Error(Errc::IndexOutOfRange, "coordinate " + std::to_string(index) + " outside [0, " +
                                           std::to_string(num_vars) + ")");
  }
  if (k < 1) throw Error(Errc::InvalidArgs, "degree must be at least 1");
  MultiIndex alpha(static_cast<std::size_t>(num_vars), 0);
  alpha[static_cast<std::size_t>(index)] = k;
  return make_poly(num_vars, k, {{alpha, Complex(1.0, 0.0)}});
}

std::uint64_t monomial_count(int num_vars, int degree) {
  // C(n + k - 1, k) built incrementally; every partial product is an exact
  // binomial coefficient.
  std::uint64_t result = 1;
  for (int j = 1; j <= degree; ++j) {
    const auto num = static_cast<std::uint64_t>(num_vars - 1 + j);
    if (result > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = result * num / static_cast<std::uint64_t>(j);
  }
  return result;
}

std::vector<MultiIndex> monomials_of_degree(int num_vars, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex current(static_cast<std::size_t>(num_vars), 0);
  enumerate(num_vars, degree, current, out);
  return out;
}

HomogeneousPoly linear_form_power(const ComplexVector& g, int k) {
  if (g.size() < 1) throw Error(Errc::InvalidArgs, "empty linear form");
  if (k < 1) throw Error(Errc::InvalidArgs, "degree must be at least 1");
  const int n = static_cast<int>(g.size());
  if (monomial_count(n, k) > kMaxExpansionTerms) {
    throw Error(Errc::ExpansionTooLarge, "expansion of degree " + std::to_string(k) + " in " +
                                             std::to_string(n) + " variables");
  }
  std::vector<Term> terms;
  for (auto& alpha : monomials_of_degree(n, k)) {
    double multinomial = 1.0;
    int remaining = k;
    Complex c(1.0, 0.0);
    for (int m = 0; m < n; ++m) {
      const int e = alpha[static_cast<std::size_t>(m)];
      for (int j = 1; j <= e; ++j) {
        multinomial = multinomial * (remaining - e + j) / j;
        c *= g[m];
      }
      remaining -= e;
    }
    terms.push_back({std::move(alpha), multinomial * c});
  }
  return make_poly(n, k, std::move(terms));
}

bool depends_only_on(const HomogeneousPoly& poly, std::span<const int> index_set) {
  std::vector<bool> allowed(static_cast<std::size_t>(poly.num_vars()), false);
  for (int i : index_set) {
    if (i >= 0 && i < poly.num_vars()) allowed[static_cast<std::size_t>(i)] = true;
  }
  for (const auto& term : poly.terms()) {
    for (std::size_t m = 0; m < term.exponents.size(); ++m) {
      if (term.exponents[m] != 0 && !allowed[m]) return false;
    }
  }
  return true;
}

std::vector<int> support(const HomogeneousPoly& poly) {
  std::vector<bool> used(static_cast<std::size_t>(poly.num_vars()), false);
  for (const auto& term : poly.terms()) {
    for (std::size_t m = 0; m < term.exponents.size(); ++m) {
      if (term.exponents[m] != 0) used[m] = true;
    }
  }
  std::vector<int> out;
  for (std::size_t m = 0; m < used.size(); ++m) {
    if (used[m]) out.push_back(static_cast<int>(m));
  }
  return out;
}

HomogeneousPoly embed(const HomogeneousPoly& poly, int new_num_vars) {
  if (new_num_vars < poly.num_vars()) {
    throw Error(Errc::DimensionMismatch, "cannot embed into fewer variables");
  }
  std::vector<Term> terms = poly.terms();
  for (auto& t : terms) t.exponents.resize(static_cast<std::size_t>(new_num_vars), 0);
  return make_poly(new_num_vars, poly.degree(), std::move(terms));
}

HomogeneousPoly substitute_linear(const HomogeneousPoly& poly, const Eigen::MatrixXcd& transform) {
  if (transform.rows() != poly.num_vars()) {
    throw Error(Errc::DimensionMismatch, "transform rows must match the number of variables");
  }
  const int new_vars = static_cast<int>(transform.cols());
  std::vector<Term> collected;
  for (const auto& term : poly.terms()) {
    HomogeneousPoly piece = make_poly(new_vars, poly.degree(), {});
    bool first = true;
    for (std::size_t m = 0; m < term.exponents.size(); ++m) {
      const int e = term.exponents[m];
      if (e == 0) continue;
      ComplexVector row = transform.row(static_cast<Eigen::Index>(m)).transpose();
      HomogeneousPoly factor = linear_form_power(row, e);
      piece = first ? factor : multiply(piece, factor);
      first = false;
    }
    for (const auto& t : piece.terms()) collected.push_back({t.exponents, t.coef * term.coef});
  }
  return make_poly(new_vars, poly.degree(), std::move(collected));
}

double coefficient_norm(const HomogeneousPoly& poly) {
  double sum = 0.0;
  for (const auto& t : poly.terms()) sum += std::norm(t.coef);
  return std::sqrt(sum);
}

}  // namespace factorlab
