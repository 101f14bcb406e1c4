#include "factorlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>
#include <vector>

#include "factorlab/detail/ascent.hpp"
#include "factorlab/error.hpp"
#include "factorlab/parallel.hpp"

namespace factorlab {

namespace {

constexpr double kSmoothing = 1e-18;
constexpr double kArmijo = 1e-4;
constexpr double kMaxPreconditioner = 1e8;
constexpr std::size_t kHistory = 8;

void require_exponent(double p) {
  if (!(p >= 1.0)) throw Error(Errc::InvalidExponent, "p must be >= 1, got " + format_number(p));
}

bool witness_before(const ComplexVector& a, const ComplexVector& b) {
  for (Eigen::Index m = 0; m < a.size(); ++m) {
    if (a[m].real() != b[m].real()) return a[m].real() < b[m].real();
    if (a[m].imag() != b[m].imag()) return a[m].imag() < b[m].imag();
  }
  return false;
}

struct StartOutcome {
  double value = 0.0;
  ComplexVector witness;
  bool converged = false;
};

StartOutcome ascend(const HomogeneousPoly& poly, double p, const detail::NormModel& model,
                    ComplexVector z, const EstimatorConfig& cfg) {
  const double weight = 2.0 * poly.degree() / p;

  auto objective = [&](const ComplexVector& x, ComplexVector* grad) -> double {
    ComplexVector poly_grad;
    const Complex v = grad ? evaluate_with_gradient(poly, x, poly_grad) : evaluate(poly, x);
    const double mod2 = std::norm(v);
    if (!(mod2 > 0.0) || !std::isfinite(mod2)) return -kInfinity;
    ComplexVector norm_grad;
    const double h = model.smoothed_power(x, grad ? &norm_grad : nullptr);
    if (grad) *grad = 2.0 * (poly_grad / v).conjugate() - (weight / h) * norm_grad;
    return std::log(mod2) - weight * std::log(h);
  };

  auto normalize = [&](ComplexVector& x) { x /= model.exact_norm(x); };

  normalize(z);
  ComplexVector grad;
  double f = objective(z, &grad);
  StartOutcome out;
  if (f == -kInfinity) {
    out.witness = z;
    return out;
  }

  // Limited-memory BFGS on the real parameters (Re z_m, Im z_m). The initial
  // inverse Hessian is the diagonal preconditioner scaled by the latest
  // curvature pair; with no usable pair the step is preconditioned gradient.
  const Eigen::Index dim = 2 * z.size();
  auto as_real = [](const ComplexVector& c) {
    return Eigen::Map<const Eigen::VectorXd>(reinterpret_cast<const double*>(c.data()), 2 * c.size()).eval();
  };
  auto as_complex = [](const Eigen::VectorXd& r) {
    return Eigen::Map<const ComplexVector>(reinterpret_cast<const Complex*>(r.data()), r.size() / 2).eval();
  };
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> history;  // (s, y) for minimizing -f
  Eigen::VectorXd precond_c = Eigen::VectorXd::Ones(z.size());
  Eigen::VectorXd precond(dim);
  double step = 1.0;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const double gmax = std::max(grad.real().cwiseAbs().maxCoeff(), grad.imag().cwiseAbs().maxCoeff());
    if (gmax <= cfg.grad_tol) {
      out.converged = true;
      break;
    }
    if (model.preconditioner) model.preconditioner(z, precond_c);
    for (Eigen::Index m = 0; m < z.size(); ++m) precond[2 * m] = precond[2 * m + 1] = precond_c[m];

    const Eigen::VectorXd g = as_real(grad);
    Eigen::VectorXd dir;
    bool quasi_newton = !history.empty();
    if (quasi_newton) {
      // Two-loop recursion on q = -g (gradient of -f); direction = -H q.
      Eigen::VectorXd q = -g;
      std::vector<double> alpha(history.size());
      for (std::size_t i = history.size(); i-- > 0;) {
        const auto& [sv, yv] = history[i];
        alpha[i] = sv.dot(q) / yv.dot(sv);
        q -= alpha[i] * yv;
      }
      const auto& [s_last, y_last] = history.back();
      const double gamma = s_last.dot(y_last) / y_last.dot(precond.cwiseProduct(y_last));
      Eigen::VectorXd r = gamma * precond.cwiseProduct(q);
      for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& [sv, yv] = history[i];
        const double beta = yv.dot(r) / yv.dot(sv);
        r += (alpha[i] - beta) * sv;
      }
      dir = -r;
      if (!(dir.dot(g) > 0.0)) {
        history.clear();
        quasi_newton = false;
      }
    }
    if (!quasi_newton) dir = precond.cwiseProduct(g);
    const double slope = dir.dot(g);
    const double roundoff = 4e-16 * (1.0 + std::abs(f));
    const ComplexVector direction = as_complex(dir);

    step = quasi_newton ? 1.0 : std::min(step * 2.0, 1e6);
    bool accepted = false;
    ComplexVector trial;
    double f_trial = f;
    while (step > 1e-30) {
      trial = z + step * direction;
      f_trial = objective(trial, nullptr);
      if (f_trial >= f + kArmijo * step * slope - roundoff) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    // Keep halving while the objective still improves; the first Armijo step
    // can sit at the stability edge of the stiffest direction and oscillate.
    while (step > 1e-30) {
      const ComplexVector shorter = z + 0.5 * step * direction;
      const double f_shorter = objective(shorter, nullptr);
      if (!(f_shorter > f_trial)) break;
      trial = shorter;
      f_trial = f_shorter;
      step *= 0.5;
    }

    const Eigen::VectorXd x_old = as_real(z);
    z = trial;
    normalize(z);
    f = objective(z, &grad);
    if (f == -kInfinity) break;
    const Eigen::VectorXd sv = as_real(z) - x_old;
    const Eigen::VectorXd yv = g - as_real(grad);
    if (sv.dot(yv) > 1e-12 * sv.norm() * yv.norm()) {
      history.emplace_back(sv, yv);
      if (history.size() > kHistory) history.pop_front();
    }
  }
  if (!out.converged) {
    const double gmax = std::max(grad.real().cwiseAbs().maxCoeff(), grad.imag().cwiseAbs().maxCoeff());
    out.converged = gmax <= cfg.grad_tol;
  }

  out.witness = z / model.exact_norm(z);
  out.value = std::abs(evaluate(poly, out.witness));
  return out;
}

detail::NormModel lp_model(double p) {
  detail::NormModel model;
  model.smoothed_power = [p](const ComplexVector& z, ComplexVector* grad) {
    double h = 0.0;
    if (grad) grad->resize(z.size());
    for (Eigen::Index m = 0; m < z.size(); ++m) {
      const double s = std::norm(z[m]) + kSmoothing;
      const double sp = std::pow(s, 0.5 * p);
      h += sp;
      if (grad) (*grad)[m] = (p * sp / s) * z[m];
    }
    return h;
  };
  model.exact_norm = [p](const ComplexVector& z) { return vector_p_norm(z, p); };
  model.preconditioner = [p](const ComplexVector& z, Eigen::VectorXd& d) {
    d.resize(z.size());
    for (Eigen::Index m = 0; m < z.size(); ++m) {
      d[m] = std::min(std::pow(std::norm(z[m]) + kSmoothing, 1.0 - 0.5 * p), kMaxPreconditioner);
    }
  };
  return model;
}

}  // namespace

void EstimatorConfig::validate() const {
  if (num_starts < 1) throw Error(Errc::InvalidArgs, "num_starts must be >= 1");
  if (max_iters < 1) throw Error(Errc::InvalidArgs, "max_iters must be >= 1");
  if (!(grad_tol > 0.0)) throw Error(Errc::InvalidArgs, "grad_tol must be > 0");
}

double vector_p_norm(const ComplexVector& z, double p) {
  require_exponent(p);
  if (z.size() == 0) return 0.0;
  const double largest = z.cwiseAbs().maxCoeff();
  if (p == kInfinity || !(largest > 0.0)) return largest;
  double sum = 0.0;
  for (Eigen::Index m = 0; m < z.size(); ++m) sum += std::pow(std::abs(z[m]) / largest, p);
  return largest * std::pow(sum, 1.0 / p);
}

double dual_exponent(double p) {
  require_exponent(p);
  if (p == 1.0) return kInfinity;
  if (p == kInfinity) return 1.0;
  return p / (p - 1.0);
}

double monomial_norm_exact(std::span<const int> exponents, double p) {
  require_exponent(p);
  if (exponents.empty()) throw Error(Errc::InvalidArgs, "empty exponent list");
  double total = 0.0;
  for (int k : exponents) {
    if (k < 1) throw Error(Errc::InvalidArgs, "exponents must be >= 1");
    total += k;
  }
  if (p == kInfinity) return 1.0;
  double log_sup = 0.0;
  for (int k : exponents) log_sup += k * std::log(k / total);
  return std::exp(log_sup / p);
}

double linear_power_norm_exact(const ComplexVector& g, int k, double p) {
  if (k < 1) throw Error(Errc::InvalidArgs, "degree must be >= 1");
  return std::pow(vector_p_norm(g, dual_exponent(p)), k);
}

double two_block_sup(int k, int l, double p) {
  const int both[] = {k, l};
  return monomial_norm_exact(both, p);
}

namespace detail {

NormEstimate multistart_ascent(const HomogeneousPoly& poly, double p, const NormModel& model,
                               const EstimatorConfig& cfg) {
  cfg.validate();
  if (!(p > 1.0) || p == kInfinity) {
    throw Error(Errc::InvalidExponent, "gradient estimator needs 1 < p < inf; use brute_force_norm");
  }
  if (poly.is_zero()) throw Error(Errc::InvalidArgs, "zero polynomial");

  std::vector<StartOutcome> outcomes(static_cast<std::size_t>(cfg.num_starts));
  parallel_for(outcomes.size(), [&](std::size_t s) {
    Rng rng(derive_seed(cfg.seed, s));
    outcomes[s] = ascend(poly, p, model, complex_gaussian_vector(rng, poly.num_vars()), cfg);
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < outcomes.size(); ++s) {
    const auto& a = outcomes[s];
    const auto& b = outcomes[best];
    if (a.value > b.value || (a.value == b.value && witness_before(a.witness, b.witness))) best = s;
  }
  double lo = kInfinity;
  double hi = -kInfinity;
  for (const auto& o : outcomes) {
    if (!o.converged) continue;
    lo = std::min(lo, o.value);
    hi = std::max(hi, o.value);
  }

  NormEstimate est;
  est.value = outcomes[best].value;
  est.witness = outcomes[best].witness;
  est.starts_used = cfg.num_starts;
  est.converged = outcomes[best].converged;
  est.spread = hi >= lo ? hi - lo : 0.0;
  return est;
}

NormEstimate brute_force_sup(const HomogeneousPoly& poly,
                             const std::function<double(const ComplexVector&)>& norm, int num_samples,
                             std::uint64_t seed) {
  if (num_samples < 1) throw Error(Errc::InvalidArgs, "num_samples must be >= 1");
  auto ratio_at = [&](const ComplexVector& z) {
    const double r = norm(z);
    if (!(r > 0.0)) return 0.0;
    return std::abs(evaluate(poly, z)) / std::pow(r, poly.degree());
  };
  Rng rng(seed);
  const int n = poly.num_vars();
  ComplexVector best = complex_gaussian_vector(rng, n);
  double best_ratio = ratio_at(best);
  for (int s = 1; s < num_samples; ++s) {
    ComplexVector z = complex_gaussian_vector(rng, n);
    const double r = ratio_at(z);
    if (r > best_ratio) {
      best_ratio = r;
      best = std::move(z);
    }
  }

  // Coordinate-wise pattern polish on the real and imaginary parts.
  best /= norm(best);
  constexpr int kMaxPolishEvals = 200000;
  int evals = 0;
  for (double h = 0.1; h > 1e-10 && evals < kMaxPolishEvals;) {
    bool improved = false;
    for (Eigen::Index m = 0; m < n; ++m) {
      for (const Complex dir : {Complex(h, 0), Complex(-h, 0), Complex(0, h), Complex(0, -h)}) {
        ComplexVector trial = best;
        trial[m] += dir;
        const double r = ratio_at(trial);
        ++evals;
        if (r > best_ratio) {
          best_ratio = r;
          best = trial / norm(trial);
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.5;
  }

  NormEstimate est;
  est.witness = best;
  est.value = std::abs(evaluate(poly, best));
  est.starts_used = num_samples;
  est.converged = true;
  est.spread = 0.0;
  return est;
}

}  // namespace detail

NormEstimate estimate_sup_norm(const HomogeneousPoly& poly, double p, const EstimatorConfig& cfg) {
  if (!(p > 1.0) || p == kInfinity) {
    throw Error(Errc::InvalidExponent, "gradient estimator needs 1 < p < inf; use brute_force_norm");
  }
  return detail::multistart_ascent(poly, p, lp_model(p), cfg);
}

NormEstimate brute_force_norm(const HomogeneousPoly& poly, double p, int num_samples,
                              std::uint64_t seed) {
  require_exponent(p);
  return detail::brute_force_sup(poly, [p](const ComplexVector& z) { return vector_p_norm(z, p); },
                                 num_samples, seed);
}

std::optional<ComplexVector> as_linear_form_power(const HomogeneousPoly& poly, double rel_tol) {
  if (poly.is_zero()) return std::nullopt;
  const int n = poly.num_vars();
  const int k = poly.degree();
  ComplexVector g = ComplexVector::Zero(n);
  if (k == 1) {
    for (const auto& t : poly.terms()) {
      for (int m = 0; m < n; ++m) {
        if (t.exponents[static_cast<std::size_t>(m)] == 1) g[m] = t.coef;
      }
    }
    return g;
  }
  if (monomial_count(n, k) > kMaxExpansionTerms) return std::nullopt;

  // Pivot on the pure power with the largest coefficient: its coefficient is
  // g_m^k and the z_m^(k-1) z_j coefficients are k g_m^(k-1) g_j.
  int pivot = -1;
  Complex pivot_coef;
  for (const auto& t : poly.terms()) {
    for (int m = 0; m < n; ++m) {
      if (t.exponents[static_cast<std::size_t>(m)] == k &&
          (pivot < 0 || std::abs(t.coef) > std::abs(pivot_coef))) {
        pivot = m;
        pivot_coef = t.coef;
      }
    }
  }
  if (pivot < 0) return std::nullopt;
  const Complex gm = std::pow(pivot_coef, 1.0 / k);
  g[pivot] = gm;
  const Complex denom = static_cast<double>(k) * std::pow(gm, k - 1);
  for (const auto& t : poly.terms()) {
    if (t.exponents[static_cast<std::size_t>(pivot)] != k - 1) continue;
    for (int j = 0; j < n; ++j) {
      if (j != pivot && t.exponents[static_cast<std::size_t>(j)] == 1) g[j] = t.coef / denom;
    }
  }

  const HomogeneousPoly expanded = linear_form_power(g, k);
  double scale = 0.0;
  for (const auto& t : poly.terms()) scale = std::max(scale, std::abs(t.coef));
  const HomogeneousPoly diff = add(poly, factorlab::scale(expanded, Complex(-1.0, 0.0)));
  for (const auto& t : diff.terms()) {
    if (std::abs(t.coef) > rel_tol * scale) return std::nullopt;
  }
  return g;
}

std::optional<NormEstimate> exact_sup_norm(const HomogeneousPoly& poly, double p) {
  require_exponent(p);
  if (poly.is_zero()) return std::nullopt;
  const int n = poly.num_vars();
  NormEstimate est;
  est.starts_used = 0;
  est.converged = true;

  if (poly.size() == 1) {
    const auto& term = poly.terms().front();
    std::vector<int> used;
    ComplexVector w = ComplexVector::Zero(n);
    for (int m = 0; m < n; ++m) {
      const int e = term.exponents[static_cast<std::size_t>(m)];
      if (e == 0) continue;
      used.push_back(e);
      w[m] = p == kInfinity ? 1.0 : std::pow(static_cast<double>(e) / poly.degree(), 1.0 / p);
    }
    est.value = std::abs(term.coef) * monomial_norm_exact(used, p);
    est.witness = w;
    return est;
  }

  const auto g = as_linear_form_power(poly);
  if (!g) return std::nullopt;
  const double q = dual_exponent(p);
  ComplexVector w = ComplexVector::Zero(n);
  auto conj_phase = [](Complex c) { return std::abs(c) > 0.0 ? std::conj(c) / std::abs(c) : Complex(1.0, 0.0); };
  if (q == kInfinity) {
    Eigen::Index arg = 0;
    g->cwiseAbs().maxCoeff(&arg);
    w[arg] = conj_phase((*g)[arg]);
  } else if (q == 1.0) {
    for (int m = 0; m < n; ++m) w[m] = conj_phase((*g)[m]);
  } else {
    const double gq = vector_p_norm(*g, q);
    for (int m = 0; m < n; ++m) {
      w[m] = conj_phase((*g)[m]) * std::pow(std::abs((*g)[m]) / gq, q - 1.0);
    }
  }
  est.value = linear_power_norm_exact(*g, poly.degree(), p);
  est.witness = w;
  return est;
}

}  // namespace factorlab
