#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "factorlab/constants.hpp"
#include "factorlab/norms.hpp"
#include "factorlab/poly.hpp"

namespace factorlab {

/// Factors P_1..P_n over a common number of variables.
class PolyTuple {
 public:
  /// Throws InvalidArgs for an empty tuple and DimensionMismatch when the
  /// factors do not share num_vars.
  explicit PolyTuple(std::vector<HomogeneousPoly> polys);

  const std::vector<HomogeneousPoly>& polys() const noexcept { return polys_; }
  std::size_t size() const noexcept { return polys_.size(); }
  int num_vars() const noexcept { return polys_.front().num_vars(); }
  DegreeList degrees() const;

  /// P_1 * ... * P_n.
  HomogeneousPoly product() const;

 private:
  std::vector<HomogeneousPoly> polys_;
};

enum class NormMethod { Exact, Estimated };

std::string_view to_string(NormMethod method) noexcept;

/// One sample of the quotient ||P_1...P_n|| / prod ||P_i|| compared against
/// a target constant; slack = ratio - target.
struct RatioReport {
  double product_norm = 0.0;
  std::vector<double> factor_norms;
  double ratio = 0.0;
  double target = 0.0;
  double slack = 0.0;
  NormMethod method = NormMethod::Exact;
  /// False when some estimator run stopped on max_iters.
  bool converged = true;
};

/// Fills ratio and slack. Throws InvalidArgs when a factor norm is not > 0.
RatioReport make_report(double product_norm, std::vector<double> factor_norms, double target,
                        NormMethod method, bool converged = true);

/// (z_1^k_1, ..., z_n^k_n) in num_vars variables; DimensionTooSmall when
/// num_vars < n.
PolyTuple coordinate_tuple(const DegreeList& ks, int num_vars);

/// g_j = (e^{2 pi i m j / N})_{m=0..N-1} for j = 1..n. Pairwise orthogonal in
/// l_2^N with ||g_j||_2 = sqrt(N).
std::vector<ComplexVector> roots_of_unity_forms(int n, int num_vars);

/// (g_1^k_1, ..., g_n^k_n) built from roots_of_unity_forms.
PolyTuple roots_of_unity_tuple(const DegreeList& ks, int num_vars);

/// (k/(k+l))^(1/p) x0 + (l/(k+l))^(1/p) y0 for unit vectors with disjoint
/// supports; the result has unit l_p norm.
ComplexVector splitting_witness(const ComplexVector& x0, const ComplexVector& y0, int k, int l,
                                double p);

/// Unitary whose leading columns are conj(g_j)/||g_j||_2, completed by
/// Gram-Schmidt on the standard basis. The g_j must be pairwise orthogonal.
/// Substituting z = U w turns sum_m g_jm z_m into ||g_j||_2 w_j.
Eigen::MatrixXcd orthonormal_completion(std::span<const ComplexVector> forms);

/// Ratio report against p_constant(degrees, p).
///
/// Exact mode uses closed forms: single monomials and powers of a linear
/// form. At p = 2 a product of powers of mutually orthogonal linear forms is
/// also handled, by the unitary change of variables that makes the forms
/// coordinates. Any other shape throws ExactFormUnavailable. Estimated mode
/// runs estimate_sup_norm on every factor and on the product.
RatioReport certify_equality(const PolyTuple& tuple, double p, NormMethod mode,
                             const EstimatorConfig& cfg = {});

}  // namespace factorlab
