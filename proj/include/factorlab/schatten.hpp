#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "factorlab/extremal.hpp"
#include "factorlab/norms.hpp"
#include "factorlab/parallel.hpp"
#include "factorlab/poly.hpp"
#include "factorlab/search.hpp"

namespace factorlab {

using ComplexMatrix = Eigen::MatrixXcd;

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kSingularCutoff = 1e-13;

/// l_p norm of the singular values of a square matrix; p = infinity gives the
/// operator norm. Throws InvalidExponent for p < 1 and DimensionMismatch for
/// a non-square matrix.
double schatten_norm(const ComplexMatrix& a, double p);

template <typename Derived>
double schatten_norm(const Eigen::MatrixBase<Derived>& a, double p) {
  return schatten_norm(ComplexMatrix(a), p);
}

/// Matrix polynomials act on the entries in row-major order: variable
/// i * m + j is A_ij (zero-based).
ComplexVector vectorize(const ComplexMatrix& a);
/// Inverse of vectorize; throws DimensionMismatch unless v has m^2 entries.
ComplexMatrix unvectorize(const ComplexVector& v, int m);

/// Two complementary coordinate projections on C^m.
class ProjectionPair {
 public:
  /// first_block lists the zero-based coordinates of the first block; the
  /// rest form the second. Throws InvalidArgs unless both blocks are
  /// nonempty and the indices are distinct and in range.
  ProjectionPair(int dim, std::vector<int> first_block);

  int dim() const noexcept { return static_cast<int>(in_first_.size()); }
  /// mask()[i] is true iff coordinate i belongs to the first block.
  const std::vector<bool>& mask() const noexcept { return in_first_; }
  std::vector<int> block(int which) const;

 private:
  std::vector<bool> in_first_;
};

/// pi_b A pi_b for block b in {0, 1}.
ComplexMatrix compress(const ComplexMatrix& a, const ProjectionPair& pp, int which);

/// pi_1 A pi_1 + pi_2 A pi_2: the off-diagonal blocks zeroed.
ComplexMatrix pinch(const ComplexMatrix& a, const ProjectionPair& pp);

struct PinchingCheck {
  bool additivity = false;
  bool contraction = false;
  /// ||pi_1 A pi_1||^p + ||pi_2 A pi_2||^p.
  double block_sum = 0.0;
  double pinched_power = 0.0;
  double full_power = 0.0;
};

/// Additivity: block_sum equals ||pinch(A)||^p; contraction: block_sum is at
/// most ||A||^p. Both at tolerance 1e-9 * max(1, magnitude).
PinchingCheck pinching_checks(const ComplexMatrix& a, const ProjectionPair& pp, double p);

/// Complex Gaussian entries.
ComplexMatrix random_matrix(Rng& rng, int m);
/// Haar-like unitary from the QR factorization of a Gaussian matrix.
ComplexMatrix random_unitary(Rng& rng, int m);

/// The entry A_ij as a degree-1 polynomial in m^2 variables.
HomogeneousPoly entry_poly(int i, int j, int m);

/// Sup of |P(A)| over ||A||_{S_p} = 1 for P in m^2 variables, by multi-start
/// ascent as in estimate_sup_norm. The witness is vectorize(A). Requires
/// 1 < p < infinity.
NormEstimate matrix_poly_sup(const HomogeneousPoly& poly, double p, int m,
                             const EstimatorConfig& cfg = {});

/// Sampling oracle for matrix_poly_sup; accepts any p >= 1.
NormEstimate matrix_brute_force_sup(const HomogeneousPoly& poly, double p, int m, int num_samples,
                                    std::uint64_t seed);

/// Factor ratio with all norms taken on S_p of m x m matrices; target is
/// inequality_target.
RatioReport matrix_ratio(const PolyTuple& tuple, double p, int m, const EstimatorConfig& cfg = {});

/// verify_batch on matrix space: cfg.num_vars must be m^2.
SearchResult verify_matrix_batch(const SearchConfig& cfg, int m);

/// A in the top-left corner of an (m+1) x (m+1) zero matrix.
ComplexMatrix pad_matrix(const ComplexMatrix& a);
/// P on m x m matrices viewed on (m+1) x (m+1) matrices through the top-left
/// block, so pad_poly(P, m)(pad_matrix(A)) = P(A).
HomogeneousPoly pad_poly(const HomogeneousPoly& poly, int m);

}  // namespace factorlab
