#include "factorlab/search.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "factorlab/error.hpp"
#include "factorlab/parallel.hpp"

namespace factorlab {

namespace {

constexpr double kInitialStep = 0.1;
constexpr double kMinStep = 1e-6;

HomogeneousPoly unit_coefficients(const HomogeneousPoly& poly) {
  return scale(poly, Complex(1.0 / coefficient_norm(poly), 0.0));
}

// Coefficients of all factors flattened; the support of each factor stays
// fixed during the search.
struct CoefficientLayout {
  std::vector<std::vector<MultiIndex>> supports;
  int num_vars = 0;
  std::vector<int> degrees;

  explicit CoefficientLayout(const std::vector<HomogeneousPoly>& polys) {
    num_vars = polys.front().num_vars();
    for (const auto& p : polys) {
      degrees.push_back(p.degree());
      std::vector<MultiIndex> s;
      for (const auto& t : p.terms()) s.push_back(t.exponents);
      supports.push_back(std::move(s));
    }
  }

  std::vector<std::vector<Complex>> coefficients(const std::vector<HomogeneousPoly>& polys) const {
    std::vector<std::vector<Complex>> out(polys.size());
    for (std::size_t f = 0; f < polys.size(); ++f) {
      for (const auto& alpha : supports[f]) {
        Complex c(0.0, 0.0);
        for (const auto& t : polys[f].terms()) {
          if (t.exponents == alpha) c = t.coef;
        }
        out[f].push_back(c);
      }
    }
    return out;
  }

  HomogeneousPoly build(std::size_t f, const std::vector<Complex>& coefs) const {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < coefs.size(); ++i) terms.push_back({supports[f][i], coefs[i]});
    return make_poly(num_vars, degrees[f], std::move(terms));
  }
};

struct RestartOutcome {
  std::vector<HomogeneousPoly> best;
  RatioReport report;
  std::vector<std::pair<int, double>> trace;
  int evals = 0;
};

// Orthonormal basis of R^dim drawn from the restart's stream; polling along a
// basis that is re-rotated every sweep avoids stalling on the kinks of the
// max-type objective, where every coordinate direction can fail at once.
Eigen::MatrixXd random_rotation(Rng& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

RestartOutcome pattern_search(const SearchConfig& cfg, std::uint64_t seed) {
  std::vector<HomogeneousPoly> polys;
  for (const auto& p : random_tuple(cfg, seed)) polys.push_back(unit_coefficients(p));
  const CoefficientLayout layout(polys);
  auto coefs = layout.coefficients(polys);

  RestartOutcome out;
  out.report = ratio(PolyTuple(polys), cfg.p, cfg.norm_cfg);
  out.best = polys;
  out.evals = 1;
  out.trace.emplace_back(out.evals, out.report.ratio);

  std::size_t total_coefs = 0;
  for (const auto& c : coefs) total_coefs += c.size();
  const auto dim = static_cast<Eigen::Index>(2 * total_coefs);
  double step = kInitialStep / std::sqrt(static_cast<double>(total_coefs) / coefs.size());
  Rng rng(derive_seed(seed, 0x5eed));

  auto perturbed = [&](const Eigen::VectorXd& move) {
    std::vector<HomogeneousPoly> trial;
    Eigen::Index pos = 0;
    for (std::size_t f = 0; f < coefs.size(); ++f) {
      std::vector<Complex> c = coefs[f];
      for (auto& v : c) {
        v += Complex(move[pos], move[pos + 1]);
        pos += 2;
      }
      HomogeneousPoly poly = layout.build(f, c);
      if (poly.is_zero()) return std::vector<HomogeneousPoly>{};
      trial.push_back(unit_coefficients(poly));
    }
    return trial;
  };
  auto flatten = [&](const std::vector<std::vector<Complex>>& c) {
    Eigen::VectorXd v(dim);
    Eigen::Index pos = 0;
    for (const auto& f : c) {
      for (const auto& x : f) {
        v[pos++] = x.real();
        v[pos++] = x.imag();
      }
    }
    return v;
  };
  double last_value = 0.0;
  // Evaluates base + move; on improvement moves the base there.
  auto try_move = [&](const Eigen::VectorXd& move) {
    auto trial = perturbed(move);
    last_value = out.report.ratio;
    if (trial.empty()) return false;
    const RatioReport r = ratio(PolyTuple(trial), cfg.p, cfg.norm_cfg);
    ++out.evals;
    last_value = r.ratio;
    if (!(r.ratio < out.report.ratio)) return false;
    out.report = r;
    out.best = std::move(trial);
    coefs = layout.coefficients(out.best);
    out.trace.emplace_back(out.evals, r.ratio);
    return true;
  };

  while (step >= kMinStep && out.evals < cfg.max_evals) {
    const Eigen::VectorXd sweep_start = flatten(coefs);
    const double f0 = out.report.ratio;
    const Eigen::MatrixXd basis = random_rotation(rng, dim);
    Eigen::VectorXd plus(dim), minus(dim);
    bool improved = false;
    for (Eigen::Index d = 0; d < 2 * dim && !improved && out.evals < cfg.max_evals; ++d) {
      const double sign = d % 2 == 0 ? 1.0 : -1.0;
      improved = try_move(sign * step * basis.col(d / 2));
      if (!improved) (sign > 0 ? plus : minus)[d / 2] = last_value;
    }
    if (!improved && out.evals < cfg.max_evals) {
      // The odd part of the poll values estimates the smooth slope, the even
      // part the kink; damp slope components along steep kink directions.
      const Eigen::VectorXd slope = (plus - minus) / (2.0 * step);
      const Eigen::VectorXd kink = ((plus + minus).array() - 2.0 * f0).max(0.0).matrix() / (2.0 * step);
      Eigen::VectorXd w(dim);
      for (Eigen::Index i = 0; i < dim; ++i) {
        const double damping = kink[i] / (std::abs(slope[i]) + 1e-300);
        w[i] = -slope[i] / (1.0 + damping * damping);
      }
      if (w.norm() > 0.0) improved = try_move(step * (basis * w) / w.norm());
    }
    if (!improved) {
      step *= 0.5;
      continue;
    }
    // Pattern moves: keep extrapolating along the displacement of the sweep
    // while it pays off.
    Eigen::VectorXd pattern = flatten(coefs) - sweep_start;
    while (out.evals < cfg.max_evals && try_move(pattern)) pattern *= 2.0;
  }
  return out;
}

}  // namespace

void SearchConfig::validate() const {
  if (num_vars < 1) throw Error(Errc::InvalidArgs, "num_vars must be >= 1");
  DegreeList check(degrees);
  if (!(p > 1.0) || p == std::numeric_limits<double>::infinity()) {
    throw Error(Errc::InvalidExponent, "search needs 1 < p < inf");
  }
  if (num_tuples < 1) throw Error(Errc::InvalidArgs, "num_tuples must be >= 1");
  if (restarts < 1) throw Error(Errc::InvalidArgs, "restarts must be >= 1");
  if (max_evals < 1) throw Error(Errc::InvalidArgs, "max_evals must be >= 1");
  norm_cfg.validate();
}

HomogeneousPoly random_poly(int num_vars, int degree, std::uint64_t seed,
                            CoefDistribution distribution) {
  if (num_vars < 1 || degree < 1) throw Error(Errc::InvalidArgs, "need num_vars >= 1 and degree >= 1");
  if (monomial_count(num_vars, degree) > kMaxExpansionTerms) {
    throw Error(Errc::ExpansionTooLarge, "too many monomials for a dense random polynomial");
  }
  Rng rng(seed);
  const auto monomials = monomials_of_degree(num_vars, degree);
  std::vector<Term> terms;
  if (distribution == CoefDistribution::Gaussian) {
    for (const auto& alpha : monomials) terms.push_back({alpha, complex_gaussian(rng)});
  } else {
    std::bernoulli_distribution keep(0.25);
    std::vector<bool> chosen(monomials.size());
    bool any = false;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      chosen[i] = keep(rng);
      any = any || chosen[i];
    }
    if (!any) chosen[std::uniform_int_distribution<std::size_t>(0, monomials.size() - 1)(rng)] = true;
    for (std::size_t i = 0; i < monomials.size(); ++i) {
      const Complex c = complex_gaussian(rng);
      if (chosen[i]) terms.push_back({monomials[i], c});
    }
  }
  return make_poly(num_vars, degree, std::move(terms));
}

std::vector<HomogeneousPoly> random_tuple(const SearchConfig& cfg, std::uint64_t seed) {
  std::vector<HomogeneousPoly> polys;
  for (std::size_t j = 0; j < cfg.degrees.size(); ++j) {
    polys.push_back(random_poly(cfg.num_vars, cfg.degrees[j], derive_seed(seed, j),
                                cfg.coef_distribution));
  }
  return polys;
}

RatioReport ratio(const PolyTuple& tuple, double p, const EstimatorConfig& cfg) {
  const DegreeList ks = tuple.degrees();
  std::vector<double> norms;
  bool converged = true;
  for (const auto& factor : tuple.polys()) {
    const NormEstimate est = estimate_sup_norm(factor, p, cfg);
    norms.push_back(est.value);
    converged = converged && est.converged;
  }
  const NormEstimate num =
      tuple.size() == 1 ? estimate_sup_norm(tuple.polys().front(), p, cfg)
                        : estimate_sup_norm(tuple.product(), p, cfg);
  return make_report(num.value, std::move(norms), inequality_target(ks, p), NormMethod::Estimated,
                     converged && num.converged);
}

SearchResult verify_batch(const SearchConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.num_tuples);
  std::vector<std::vector<HomogeneousPoly>> tuples(n);
  std::vector<RatioReport> reports(n);
  std::vector<std::uint64_t> seeds(n);
  parallel_for(n, [&](std::size_t i) {
    seeds[i] = derive_seed(cfg.seed, i);
    tuples[i] = random_tuple(cfg, seeds[i]);
    reports[i] = ratio(PolyTuple(tuples[i]), cfg.p, cfg.norm_cfg);
  });

  SearchResult result;
  std::size_t best = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (reports[i].ratio < reports[best].ratio) best = i;
    if (reports[i].ratio < reports[i].target * (1.0 - kFlagSlack)) result.flags.push_back(i);
    const double running = result.trace.empty() ? reports[i].ratio
                                                : std::min(result.trace.back().second, reports[i].ratio);
    result.trace.emplace_back(static_cast<int>(i + 1), running);
  }
  result.best_tuple = tuples[best];
  result.best_ratio = reports[best].ratio;
  result.reports = std::move(reports);
  result.seeds = std::move(seeds);
  return result;
}

SearchResult minimize_ratio(const SearchConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.restarts);
  std::vector<RestartOutcome> outcomes(n);
  std::vector<std::uint64_t> seeds(n);
  parallel_for(n, [&](std::size_t r) {
    seeds[r] = derive_seed(cfg.seed, r);
    outcomes[r] = pattern_search(cfg, seeds[r]);
  });

  SearchResult result;
  std::size_t best = 0;
  int offset = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& o = outcomes[r];
    if (o.report.ratio < outcomes[best].report.ratio) best = r;
    for (const auto& [evals, value] : o.trace) {
      if (result.trace.empty() || value < result.trace.back().second) {
        result.trace.emplace_back(offset + evals, value);
      }
    }
    offset += o.evals;
    result.reports.push_back(o.report);
    if (o.report.ratio < o.report.target * (1.0 - kFlagSlack)) result.flags.push_back(r);
  }
  result.best_tuple = outcomes[best].best;
  result.best_ratio = outcomes[best].report.ratio;
  result.seeds = std::move(seeds);
  return result;
}

}  // namespace factorlab
