#pragma once

#include <cstdint>
#include <functional>

#include "factorlab/norms.hpp"
#include "factorlab/poly.hpp"

namespace factorlab::detail {

/// Smoothed p-th power of the ambient norm, h(z) ~ ||z||^p. The gradient is
/// written in complex form (d/dRe + i d/dIm). The optional preconditioner is
/// a positive per-coordinate weight applied to the ascent direction.
struct NormModel {
  std::function<double(const ComplexVector&, ComplexVector*)> smoothed_power;
  std::function<double(const ComplexVector&)> exact_norm;
  std::function<void(const ComplexVector&, Eigen::VectorXd&)> preconditioner;
};

/// Multi-start ascent of log|P(z)|^2 - (2k/p) log h(z), shared by the l_p and
/// Schatten estimators.
NormEstimate multistart_ascent(const HomogeneousPoly& poly, double p, const NormModel& model,
                               const EstimatorConfig& cfg);

/// Random sampling plus coordinate polish of |P(z)| / norm(z)^k.
NormEstimate brute_force_sup(const HomogeneousPoly& poly,
                             const std::function<double(const ComplexVector&)>& norm, int num_samples,
                             std::uint64_t seed);

}  // namespace factorlab::detail
