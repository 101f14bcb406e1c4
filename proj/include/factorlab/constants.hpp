#pragma once

#include <optional>
#include <span>
#include <vector>

namespace factorlab {

/// Degrees k_1..k_n of the factors; n >= 1 and every k_i >= 1.
class DegreeList {
 public:
  /// Throws InvalidArgs on an empty list or a degree below 1.
  explicit DegreeList(std::vector<int> ks);

  const std::vector<int>& ks() const noexcept { return ks_; }
  int count() const noexcept { return static_cast<int>(ks_.size()); }
  int total() const noexcept { return total_; }
  int operator[](std::size_t i) const { return ks_[i]; }

  friend bool operator==(const DegreeList&, const DegreeList&) = default;

 private:
  std::vector<int> ks_;
  int total_ = 0;
};

/// k_1^k_1 ... k_n^k_n / K^K, the constant valid on every complex Banach space.
double bst_constant(const DegreeList& ks);

/// Square root of bst_constant: the sharp constant on Hilbert spaces.
double hilbert_constant(const DegreeList& ks);

/// bst_constant^(1/p), sharp on l_p for 1 <= p <= 2. Rejects p < 1 and
/// p = infinity with InvalidExponent.
double p_constant(const DegreeList& ks, double p);

/// n^|1/p - 1/2|, the bound on the Banach-Mazur distance of n-dimensional
/// subspaces of L_p to l_2^n. Accepts p = infinity.
double dn_bound(int n, double p);

/// hilbert_constant(ks) * dn^(-K); requires dn >= 1.
double lemma1_bound(const DegreeList& ks, double dn);

struct Sandwich {
  double low = 0.0;
  double high = 0.0;
};

/// For p >= 2 (infinity included) the optimal l_p constant lies in
/// [n^(K(1/p-1/2)) * hilbert, hilbert].
Sandwich sandwich_bounds(const DegreeList& ks, double p);

/// Lower bound the factor inequality is checked against: p_constant for
/// 1 <= p <= 2, the sandwich low end for p > 2.
double inequality_target(const DegreeList& ks, double p);

struct ConstantsRecord {
  std::vector<int> ks;
  double p = 0.0;
  double bst = 0.0;
  double hilbert = 0.0;
  double lp = 0.0;
  double dn_bound = 0.0;
  double lemma1 = 0.0;
  std::optional<double> sandwich_low;
  std::optional<double> sandwich_high;
};

/// Every constant for (ks, p); sandwich fields only when p >= 2. The lemma1
/// field uses dn = dn_bound(n, p).
ConstantsRecord all_constants(const DegreeList& ks, double p);

}  // namespace factorlab
