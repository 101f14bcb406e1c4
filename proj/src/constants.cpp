#include "factorlab/constants.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "factorlab/error.hpp"

namespace factorlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(k_1^k_1 ... k_n^k_n / K^K), kept in log space since K^K overflows a
// double near K = 144.
double log_bst(const DegreeList& ks) {
  const double total = ks.total();
  double acc = 0.0;
  for (int k : ks.ks()) acc += k * std::log(k / total);
  return acc;
}

double inverse(double p) { return p == kInf ? 0.0 : 1.0 / p; }

void require_at_least(double p, double lo) {
  if (!(p >= lo)) {
    throw Error(Errc::InvalidExponent, "p must be >= " + format_number(lo) + ", got " + format_number(p));
  }
}

}  // namespace

DegreeList::DegreeList(std::vector<int> ks) : ks_(std::move(ks)) {
  if (ks_.empty()) throw Error(Errc::InvalidArgs, "degree list is empty");
  for (int k : ks_) {
    if (k < 1) throw Error(Errc::InvalidArgs, "degrees must be >= 1");
    total_ += k;
  }
}

double bst_constant(const DegreeList& ks) { return std::exp(log_bst(ks)); }

double hilbert_constant(const DegreeList& ks) { return std::exp(0.5 * log_bst(ks)); }

double p_constant(const DegreeList& ks, double p) {
  require_at_least(p, 1.0);
  if (p == kInf) throw Error(Errc::InvalidExponent, "p_constant is not defined at p = inf");
  if (p == 1.0) return bst_constant(ks);
  if (p == 2.0) return hilbert_constant(ks);
  return std::exp(log_bst(ks) / p);
}

double dn_bound(int n, double p) {
  if (n < 1) throw Error(Errc::InvalidArgs, "n must be >= 1");
  require_at_least(p, 1.0);
  return std::pow(static_cast<double>(n), std::abs(inverse(p) - 0.5));
}

double lemma1_bound(const DegreeList& ks, double dn) {
  if (!(dn >= 1.0)) throw Error(Errc::InvalidArgs, "Banach-Mazur distance must be >= 1");
  return std::exp(0.5 * log_bst(ks) - ks.total() * std::log(dn));
}

Sandwich sandwich_bounds(const DegreeList& ks, double p) {
  require_at_least(p, 2.0);
  const double high = hilbert_constant(ks);
  const double log_low = 0.5 * log_bst(ks) +
                         ks.total() * (inverse(p) - 0.5) * std::log(static_cast<double>(ks.count()));
  return {p == 2.0 ? high : std::exp(log_low), high};
}

double inequality_target(const DegreeList& ks, double p) {
  require_at_least(p, 1.0);
  return p <= 2.0 ? p_constant(ks, p) : sandwich_bounds(ks, p).low;
}

ConstantsRecord all_constants(const DegreeList& ks, double p) {
  ConstantsRecord rec;
  rec.ks = ks.ks();
  rec.p = p;
  rec.bst = bst_constant(ks);
  rec.hilbert = hilbert_constant(ks);
  rec.lp = p_constant(ks, p);
  rec.dn_bound = dn_bound(ks.count(), p);
  rec.lemma1 = lemma1_bound(ks, rec.dn_bound);
  if (p >= 2.0) {
    const Sandwich s = sandwich_bounds(ks, p);
    rec.sandwich_low = s.low;
    rec.sandwich_high = s.high;
  }
  return rec;
}

}  // namespace factorlab
