#include "factorlab/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "factorlab/constants.hpp"
#include "factorlab/detail/ascent.hpp"
#include "factorlab/error.hpp"

namespace factorlab {

namespace {

constexpr double kSmoothing = 1e-18;
constexpr double kPinchTolerance = 1e-9;

void require_square(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(Errc::DimensionMismatch, "expected a nonempty square matrix");
  }
}

Eigen::VectorXd singular_values(const ComplexMatrix& a) {
  Eigen::VectorXd s = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  const double cutoff = kSingularCutoff * (s.size() > 0 ? s[0] : 0.0);
  for (auto& v : s) {
    if (v < cutoff) v = 0.0;
  }
  return s;
}

int matrix_side(const HomogeneousPoly& poly, int m) {
  if (m < 1) throw Error(Errc::InvalidArgs, "matrix dimension must be >= 1");
  if (poly.num_vars() != m * m) {
    throw Error(Errc::DimensionMismatch, "polynomial has " + std::to_string(poly.num_vars()) +
                                             " variables, expected " + std::to_string(m * m));
  }
  return m;
}

detail::NormModel schatten_model(double p, int m) {
  detail::NormModel model;
  // sum (sigma^2 + eps)^(p/2); its complex-form gradient is
  // U diag(p sigma (sigma^2 + eps)^(p/2 - 1)) V^*.
  model.smoothed_power = [p, m](const ComplexVector& z, ComplexVector* grad) {
    const ComplexMatrix a = unvectorize(z, m);
    if (!grad) {
      double h = 0.0;
      const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
      for (const double s : sv) {
        h += std::pow(s * s + kSmoothing, 0.5 * p);
      }
      return h;
    }
    Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    double h = 0.0;
    Eigen::VectorXd weight(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      const double t = sv[i] * sv[i] + kSmoothing;
      const double tp = std::pow(t, 0.5 * p);
      h += tp;
      weight[i] = p * sv[i] * tp / t;
    }
    const ComplexMatrix g = svd.matrixU() * weight.asDiagonal() * svd.matrixV().adjoint();
    *grad = vectorize(g);
    return h;
  };
  model.exact_norm = [p, m](const ComplexVector& z) { return schatten_norm(unvectorize(z, m), p); };
  return model;
}

}  // namespace

double schatten_norm(const ComplexMatrix& a, double p) {
  if (!(p >= 1.0)) throw Error(Errc::InvalidExponent, "p must be >= 1, got " + format_number(p));
  require_square(a);
  const Eigen::VectorXd s = singular_values(a);
  if (p == kInfinity || s[0] == 0.0) return s[0];
  // Scaled by the largest singular value to avoid overflow for large p.
  double sum = 0.0;
  for (const double v : s) sum += std::pow(v / s[0], p);
  return s[0] * std::pow(sum, 1.0 / p);
}

ComplexVector vectorize(const ComplexMatrix& a) {
  const Eigen::Index m = a.rows();
  ComplexVector v(a.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) v[i * a.cols() + j] = a(i, j);
  }
  return v;
}

ComplexMatrix unvectorize(const ComplexVector& v, int m) {
  if (m < 1 || v.size() != static_cast<Eigen::Index>(m) * m) {
    throw Error(Errc::DimensionMismatch, "vector length is not m^2");
  }
  ComplexMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = v[i * m + j];
  }
  return a;
}

ProjectionPair::ProjectionPair(int dim, std::vector<int> first_block) {
  if (dim < 2) throw Error(Errc::InvalidArgs, "a projection pair needs dim >= 2");
  in_first_.assign(static_cast<std::size_t>(dim), false);
  for (const int i : first_block) {
    if (i < 0 || i >= dim) throw Error(Errc::InvalidArgs, "block index out of range");
    if (in_first_[i]) throw Error(Errc::InvalidArgs, "repeated block index");
    in_first_[i] = true;
  }
  if (first_block.empty() || static_cast<int>(first_block.size()) == dim) {
    throw Error(Errc::InvalidArgs, "both blocks must be nonempty");
  }
}

std::vector<int> ProjectionPair::block(int which) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i) {
    if (in_first_[i] == (which == 0)) out.push_back(i);
  }
  return out;
}

ComplexMatrix compress(const ComplexMatrix& a, const ProjectionPair& pp, int which) {
  require_square(a);
  if (a.rows() != pp.dim()) throw Error(Errc::DimensionMismatch, "projection and matrix sizes differ");
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  const auto idx = pp.block(which);
  for (const int i : idx) {
    for (const int j : idx) out(i, j) = a(i, j);
  }
  return out;
}

ComplexMatrix pinch(const ComplexMatrix& a, const ProjectionPair& pp) {
  return compress(a, pp, 0) + compress(a, pp, 1);
}

PinchingCheck pinching_checks(const ComplexMatrix& a, const ProjectionPair& pp, double p) {
  PinchingCheck out;
  out.block_sum = std::pow(schatten_norm(compress(a, pp, 0), p), p) +
                  std::pow(schatten_norm(compress(a, pp, 1), p), p);
  out.pinched_power = std::pow(schatten_norm(pinch(a, pp), p), p);
  out.full_power = std::pow(schatten_norm(a, p), p);
  const double scale = std::max({1.0, out.block_sum, out.pinched_power, out.full_power});
  out.additivity = std::abs(out.block_sum - out.pinched_power) <= kPinchTolerance * scale;
  out.contraction = out.block_sum <= out.full_power + kPinchTolerance * scale;
  return out;
}

ComplexMatrix random_matrix(Rng& rng, int m) {
  if (m < 1) throw Error(Errc::InvalidArgs, "matrix dimension must be >= 1");
  ComplexMatrix a(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) a(i, j) = complex_gaussian(rng);
  }
  return a;
}

ComplexMatrix random_unitary(Rng& rng, int m) {
  const ComplexMatrix a = random_matrix(rng, m);
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m, m);
  // Fix the phases so the distribution does not depend on QR conventions.
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const double mod = std::abs(r(j, j));
    if (mod > 0.0) q.col(j) *= r(j, j) / mod;
  }
  return q;
}

HomogeneousPoly entry_poly(int i, int j, int m) {
  if (m < 1 || i < 0 || j < 0 || i >= m || j >= m) {
    throw Error(Errc::IndexOutOfRange, "matrix entry out of range");
  }
  return coordinate_power(i * m + j, 1, m * m);
}

NormEstimate matrix_poly_sup(const HomogeneousPoly& poly, double p, int m, const EstimatorConfig& cfg) {
  matrix_side(poly, m);
  return detail::multistart_ascent(poly, p, schatten_model(p, m), cfg);
}

NormEstimate matrix_brute_force_sup(const HomogeneousPoly& poly, double p, int m, int num_samples,
                                    std::uint64_t seed) {
  matrix_side(poly, m);
  if (!(p >= 1.0)) throw Error(Errc::InvalidExponent, "p must be >= 1, got " + format_number(p));
  return detail::brute_force_sup(
      poly, [p, m](const ComplexVector& z) { return schatten_norm(unvectorize(z, m), p); }, num_samples,
      seed);
}

RatioReport matrix_ratio(const PolyTuple& tuple, double p, int m, const EstimatorConfig& cfg) {
  std::vector<double> norms;
  bool converged = true;
  for (const auto& factor : tuple.polys()) {
    const NormEstimate est = matrix_poly_sup(factor, p, m, cfg);
    norms.push_back(est.value);
    converged = converged && est.converged;
  }
  const NormEstimate num = matrix_poly_sup(tuple.product(), p, m, cfg);
  return make_report(num.value, std::move(norms), inequality_target(tuple.degrees(), p),
                     NormMethod::Estimated, converged && num.converged);
}

SearchResult verify_matrix_batch(const SearchConfig& cfg, int m) {
  cfg.validate();
  if (m < 1 || cfg.num_vars != m * m) {
    throw Error(Errc::DimensionMismatch, "num_vars must equal m^2 for matrix verification");
  }
  const auto n = static_cast<std::size_t>(cfg.num_tuples);
  std::vector<std::vector<HomogeneousPoly>> tuples(n);
  std::vector<RatioReport> reports(n);
  std::vector<std::uint64_t> seeds(n);
  parallel_for(n, [&](std::size_t t) {
    seeds[t] = derive_seed(cfg.seed, t);
    tuples[t] = random_tuple(cfg, seeds[t]);
    reports[t] = matrix_ratio(PolyTuple(tuples[t]), cfg.p, m, cfg.norm_cfg);
  });

  SearchResult result;
  std::size_t best = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (reports[t].ratio < reports[best].ratio) best = t;
    if (reports[t].ratio < reports[t].target * (1.0 - kFlagSlack)) result.flags.push_back(t);
    const double running = result.trace.empty() ? reports[t].ratio
                                                : std::min(result.trace.back().second, reports[t].ratio);
    result.trace.emplace_back(static_cast<int>(t + 1), running);
  }
  result.best_tuple = tuples[best];
  result.best_ratio = reports[best].ratio;
  result.reports = std::move(reports);
  result.seeds = std::move(seeds);
  return result;
}

ComplexMatrix pad_matrix(const ComplexMatrix& a) {
  require_square(a);
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + 1, a.cols() + 1);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

HomogeneousPoly pad_poly(const HomogeneousPoly& poly, int m) {
  matrix_side(poly, m);
  const int big = m + 1;
  std::vector<Term> terms;
  terms.reserve(poly.size());
  for (const auto& t : poly.terms()) {
    MultiIndex alpha(static_cast<std::size_t>(big * big), 0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) alpha[i * big + j] = t.exponents[i * m + j];
    }
    terms.push_back({std::move(alpha), t.coef});
  }
  return make_poly(big * big, poly.degree(), std::move(terms));
}

}  // namespace factorlab
