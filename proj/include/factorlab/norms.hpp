#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>

#include "factorlab/poly.hpp"

namespace factorlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum |z_m|^p)^(1/p); p = infinity gives the max modulus. Throws
/// InvalidExponent for p < 1.
double vector_p_norm(const ComplexVector& z, double p);

template <typename Derived>
double vector_p_norm(const Eigen::MatrixBase<Derived>& z, double p) {
  return vector_p_norm(ComplexVector(z), p);
}

/// Conjugate exponent q with 1/p + 1/q = 1 (p = 1 maps to infinity and back).
double dual_exponent(double p);

/// Sup of prod |z_i|^{k_i} over the unit sphere of l_p, i.e.
/// prod (k_i / K)^{k_i / p} with K = sum k_i.
double monomial_norm_exact(std::span<const int> exponents, double p);

/// Sup-norm of (sum g_m z_m)^k on l_p, which is ||g||_q^k.
double linear_power_norm_exact(const ComplexVector& g, int k, double p);

/// sup { |a|^k |b|^l : |a|^p + |b|^p = 1 } = (k^k l^l / (k+l)^(k+l))^(1/p).
double two_block_sup(int k, int l, double p);

struct EstimatorConfig {
  int num_starts = 64;
  int max_iters = 500;
  double grad_tol = 1e-10;
  std::uint64_t seed = 42;

  /// Throws InvalidArgs when a field is out of range.
  void validate() const;
};

/// A certified lower bound for a sup-norm: value is |P(witness)| at a point
/// with unit norm, so it never exceeds the true norm.
struct NormEstimate {
  double value = 0.0;
  ComplexVector witness;
  int starts_used = 0;
  bool converged = false;
  /// max - min over the converged local maxima; a multimodality diagnostic.
  double spread = 0.0;
};

/// Multi-start gradient ascent of log|P(z)|^2 - 2k log ||z||_p over nonzero
/// z. Requires 1 < p < infinity and a nonzero polynomial. Starts run in
/// parallel and the result does not depend on the thread count.
NormEstimate estimate_sup_norm(const HomogeneousPoly& poly, double p,
                               const EstimatorConfig& cfg = {});

/// Independent oracle: best of num_samples complex Gaussian directions, then
/// a coordinate-wise pattern polish. Accepts any p >= 1 including infinity.
NormEstimate brute_force_norm(const HomogeneousPoly& poly, double p, int num_samples,
                              std::uint64_t seed);

/// If poly is (sum g_m z_m)^k, returns g (defined up to a k-th root of unity).
/// Coefficients must agree with the expansion to rel_tol.
std::optional<ComplexVector> as_linear_form_power(const HomogeneousPoly& poly,
                                                  double rel_tol = 1e-12);

/// Closed-form sup-norm with an attaining witness, for the two shapes that
/// have one: a single monomial and a power of a linear form.
std::optional<NormEstimate> exact_sup_norm(const HomogeneousPoly& poly, double p);

}  // namespace factorlab
