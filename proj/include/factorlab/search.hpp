#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "factorlab/constants.hpp"
#include "factorlab/extremal.hpp"
#include "factorlab/norms.hpp"

namespace factorlab {

enum class CoefDistribution { Gaussian, Sparse };

struct SearchConfig {
  int num_vars = 2;
  std::vector<int> degrees = {1, 1};
  double p = 2.0;
  int num_tuples = 200;
  std::uint64_t seed = 42;
  EstimatorConfig norm_cfg;
  int restarts = 16;
  int max_evals = 1500;
  CoefDistribution coef_distribution = CoefDistribution::Gaussian;

  /// Throws InvalidArgs/InvalidExponent for out-of-range fields.
  void validate() const;
};

/// Relative slack below the target at which a ratio is flagged.
inline constexpr double kFlagSlack = 1e-3;

struct SearchResult {
  std::vector<HomogeneousPoly> best_tuple;
  double best_ratio = 0.0;
  /// (evaluation count, best ratio so far); ratios are nonincreasing.
  std::vector<std::pair<int, double>> trace;
  std::vector<RatioReport> reports;
  /// Seed of the task behind each report (tuple seed or restart seed).
  std::vector<std::uint64_t> seeds;
  /// Indices into reports with ratio < target * (1 - kFlagSlack).
  std::vector<std::size_t> flags;
};

/// Random polynomial with complex Gaussian coefficients on every monomial of
/// the given degree (Gaussian) or on a random quarter of them, at least one
/// (Sparse). Deterministic in seed.
HomogeneousPoly random_poly(int num_vars, int degree, std::uint64_t seed,
                            CoefDistribution distribution = CoefDistribution::Gaussian);

/// One random factor per entry of cfg.degrees; factor j uses
/// derive_seed(seed, j).
std::vector<HomogeneousPoly> random_tuple(const SearchConfig& cfg, std::uint64_t seed);

/// Estimated ratio of the product norm to the product of factor norms, all
/// norms from estimate_sup_norm with cfg. Target is inequality_target.
RatioReport ratio(const PolyTuple& tuple, double p, const EstimatorConfig& cfg = {});

/// Ratio reports for num_tuples random tuples. Tuple i draws its factors
/// from derive_seed(cfg.seed, i). Violations are flagged, never dropped.
SearchResult verify_batch(const SearchConfig& cfg);

/// Pattern search over real and imaginary coefficient parts, from
/// cfg.restarts random tuples, minimizing the estimated ratio. Each factor is
/// rescaled to unit coefficient 2-norm after every accepted move.
SearchResult minimize_ratio(const SearchConfig& cfg);

}  // namespace factorlab
