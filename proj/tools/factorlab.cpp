// factorlab command-line driver. JSON goes to stdout; the run manifest and
// errors go to stderr so stdout depends only on the inputs and the seed.

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "factorlab/constants.hpp"
#include "factorlab/error.hpp"
#include "factorlab/extremal.hpp"
#include "factorlab/io.hpp"
#include "factorlab/norms.hpp"
#include "factorlab/parallel.hpp"
#include "factorlab/schatten.hpp"
#include "factorlab/search.hpp"

#ifndef FACTORLAB_VERSION
#define FACTORLAB_VERSION "unknown"
#endif

namespace fl = factorlab;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

/// Thrown for bad flags, unreadable files and malformed input; exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
  const char* env = std::getenv("FACTORLAB_SEED");
  if (!env) return kDefaultSeed;
  try {
    std::size_t used = 0;
    const std::string text(env);
    const auto value = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw UsageError(std::string("FACTORLAB_SEED is not an unsigned integer: ") + env);
  }
}

double parse_p(const std::string& text) {
  if (text == "inf" || text == "infinity") return fl::kInfinity;
  try {
    std::size_t used = 0;
    const double p = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return p;
  } catch (const std::exception&) {
    throw UsageError("--p must be a number or 'inf', got '" + text + "'");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

struct EstimatorFlags {
  int starts = fl::EstimatorConfig{}.num_starts;
  int max_iters = fl::EstimatorConfig{}.max_iters;
  double grad_tol = fl::EstimatorConfig{}.grad_tol;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--starts", starts, "estimator multistart count")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iters", max_iters, "estimator iterations per start")->check(CLI::PositiveNumber);
    cmd->add_option("--grad-tol", grad_tol, "estimator gradient tolerance")->check(CLI::PositiveNumber);
  }

  fl::EstimatorConfig config(std::uint64_t seed) const {
    fl::EstimatorConfig cfg;
    cfg.num_starts = starts;
    cfg.max_iters = max_iters;
    cfg.grad_tol = grad_tol;
    cfg.seed = seed;
    return cfg;
  }
};

struct Options {
  unsigned threads = 0;
  std::string manifest_path;
  bool csv = false;
  std::optional<std::uint64_t> seed;
  std::vector<int> ks;
  std::string p_text;
  int num_vars = 0;
  EstimatorFlags est;

  // norm
  std::string poly_path;
  bool force_numeric = false;
  int norm_samples = 20000;
  // verify / search
  int tuples = 200;
  int restarts = 16;
  int max_evals = fl::SearchConfig{}.max_evals;
  std::string distribution = "gaussian";
  // extremal
  std::string mode = "exact";
  std::string construction = "coordinate";
  // pinch
  int dim = 4;
  int pinch_samples = 100;
  std::vector<int> block;
  std::string matrix_path;

  std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
  double p() const { return parse_p(p_text); }
};

struct Output {
  fl::Json json;
  std::string csv;  // used instead of json when non-empty
  fl::Json config;
};

fl::SearchConfig search_config(const Options& o) {
  fl::SearchConfig cfg;
  cfg.num_vars = o.num_vars;
  cfg.degrees = o.ks;
  cfg.p = o.p();
  cfg.num_tuples = o.tuples;
  cfg.seed = o.resolved_seed();
  cfg.norm_cfg = o.est.config(cfg.seed);
  cfg.restarts = o.restarts;
  cfg.max_evals = o.max_evals;
  if (o.distribution == "gaussian") {
    cfg.coef_distribution = fl::CoefDistribution::Gaussian;
  } else if (o.distribution == "sparse") {
    cfg.coef_distribution = fl::CoefDistribution::Sparse;
  } else {
    throw UsageError("--distribution must be gaussian or sparse");
  }
  return cfg;
}

std::string report_rows(const fl::SearchResult& result) {
  std::ostringstream ss;
  ss << "seed,ratio,slack,converged\n";
  for (std::size_t i = 0; i < result.reports.size(); ++i) {
    const auto& r = result.reports[i];
    ss << result.seeds[i] << ',' << format_double(r.ratio) << ',' << format_double(r.slack) << ','
       << (r.converged ? "true" : "false") << '\n';
  }
  return ss.str();
}

Output run_constants(const Options& o) {
  const double p = o.p();
  Output out;
  out.config = fl::Json{{"ks", o.ks}, {"p", p}};
  out.json = fl::to_json(fl::all_constants(fl::DegreeList(o.ks), p));
  return out;
}

Output run_norm(const Options& o) {
  const double p = o.p();
  const fl::HomogeneousPoly poly = fl::poly_from_json(fl::parse_json(read_file(o.poly_path)));
  const std::uint64_t seed = o.resolved_seed();
  Output out;
  out.config = fl::Json{{"poly", o.poly_path}, {"p", p}, {"force_numeric", o.force_numeric},
                        {"norm_cfg", fl::to_json(o.est.config(seed))}};
  std::optional<fl::NormEstimate> exact;
  if (!o.force_numeric) {
    if (!(p >= 1.0)) throw fl::Error(fl::Errc::InvalidExponent, "p must be >= 1");
    exact = fl::exact_sup_norm(poly, p);
  }
  if (exact) {
    out.json = fl::to_json(*exact);
    out.json["method"] = "exact";
  } else if (p > 1.0 && p < fl::kInfinity) {
    out.json = fl::to_json(fl::estimate_sup_norm(poly, p, o.est.config(seed)));
    out.json["method"] = "estimated";
  } else {
    // The gradient estimator needs 1 < p < inf; sample instead.
    out.json = fl::to_json(fl::brute_force_norm(poly, p, o.norm_samples, seed));
    out.json["method"] = "sampled";
  }
  return out;
}

Output run_verify(const Options& o) {
  const fl::SearchConfig cfg = search_config(o);
  const fl::SearchResult result = fl::verify_batch(cfg);
  Output out;
  out.config = fl::to_json(cfg);
  if (o.csv) out.csv = report_rows(result);
  out.json = fl::to_json(result);
  return out;
}

Output run_search(const Options& o) {
  const fl::SearchConfig cfg = search_config(o);
  const fl::SearchResult result = fl::minimize_ratio(cfg);
  Output out;
  out.config = fl::to_json(cfg);
  if (o.csv) out.csv = report_rows(result);
  out.json = fl::to_json(result);
  return out;
}

Output run_extremal(const Options& o) {
  const double p = o.p();
  const fl::DegreeList ks(o.ks);
  const std::uint64_t seed = o.resolved_seed();
  fl::NormMethod mode;
  if (o.mode == "exact") {
    mode = fl::NormMethod::Exact;
  } else if (o.mode == "estimated") {
    mode = fl::NormMethod::Estimated;
  } else {
    throw UsageError("--mode must be exact or estimated");
  }
  std::optional<fl::PolyTuple> tuple;
  if (o.construction == "coordinate") {
    tuple = fl::coordinate_tuple(ks, o.num_vars);
  } else if (o.construction == "roots") {
    tuple = fl::roots_of_unity_tuple(ks, o.num_vars);
  } else {
    throw UsageError("--construction must be coordinate or roots");
  }
  Output out;
  out.config = fl::Json{{"ks", o.ks}, {"p", p}, {"n_vars", o.num_vars}, {"mode", o.mode},
                        {"construction", o.construction}, {"norm_cfg", fl::to_json(o.est.config(seed))}};
  out.json = fl::to_json(fl::certify_equality(*tuple, p, mode, o.est.config(seed)));
  fl::Json polys = fl::Json::array();
  for (const auto& poly : tuple->polys()) polys.push_back(fl::to_json(poly));
  out.json["tuple"] = std::move(polys);
  return out;
}

Output run_pinch(const Options& o) {
  const double p = o.p();
  const std::uint64_t seed = o.resolved_seed();
  std::vector<fl::ComplexMatrix> matrices;
  int dim = o.dim;
  if (!o.matrix_path.empty()) {
    matrices.push_back(fl::matrix_from_json(fl::parse_json(read_file(o.matrix_path))));
    dim = static_cast<int>(matrices.front().rows());
  } else {
    fl::Rng rng(seed);
    for (int s = 0; s < o.pinch_samples; ++s) matrices.push_back(fl::random_matrix(rng, dim));
  }
  std::vector<int> first = o.block;
  if (first.empty()) {
    for (int i = 0; i < dim / 2; ++i) first.push_back(i);
  }
  const fl::ProjectionPair pp(dim, first);

  Output out;
  out.config = fl::Json{{"dim", dim}, {"p", p}, {"samples", matrices.size()}, {"seed", seed},
                        {"block", first}, {"matrix", o.matrix_path}};
  std::ostringstream rows;
  rows << "sample,block_sum,pinched_power,full_power,additivity,contraction\n";
  int add_pass = 0;
  int con_pass = 0;
  double worst_additivity = 0.0;
  double worst_contraction = -fl::kInfinity;
  for (std::size_t s = 0; s < matrices.size(); ++s) {
    const fl::PinchingCheck c = fl::pinching_checks(matrices[s], pp, p);
    add_pass += c.additivity;
    con_pass += c.contraction;
    worst_additivity = std::max(worst_additivity, std::abs(c.block_sum - c.pinched_power));
    worst_contraction = std::max(worst_contraction, c.block_sum - c.full_power);
    rows << s << ',' << format_double(c.block_sum) << ',' << format_double(c.pinched_power) << ','
         << format_double(c.full_power) << ',' << (c.additivity ? "true" : "false") << ','
         << (c.contraction ? "true" : "false") << '\n';
  }
  const int n = static_cast<int>(matrices.size());
  out.json = fl::Json{{"dim", dim},
                      {"p", p},
                      {"blocks", fl::Json::array({pp.block(0), pp.block(1)})},
                      {"samples", n},
                      {"additivity", {{"pass", add_pass}, {"fail", n - add_pass}}},
                      {"contraction", {{"pass", con_pass}, {"fail", n - con_pass}}},
                      {"max_additivity_error", worst_additivity},
                      {"max_contraction_excess", worst_contraction}};
  if (o.csv) out.csv = rows.str();
  return out;
}

void emit_error(const std::string& code, const std::string& message) {
  std::cerr << fl::Json{{"error", code}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factor problem toolkit: constants, sup-norms, verification and search."};
  app.set_version_flag("--version", FACTORLAB_VERSION);
  app.require_subcommand(1);
  Options o;
  app.add_option("--threads", o.threads, "worker thread cap (default: available parallelism)")
      ->check(CLI::PositiveNumber);
  app.add_option("--manifest", o.manifest_path, "write the run manifest to this file instead of stderr");

  auto add_common = [&](CLI::App* cmd, bool needs_ks) {
    cmd->add_option("--p", o.p_text, "exponent p (number or inf)")->required();
    if (needs_ks) cmd->add_option("--ks", o.ks, "factor degrees, comma separated")->required()->delimiter(',');
  };
  auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "random seed (default: $FACTORLAB_SEED or 42)");
  };

  auto* constants = app.add_subcommand("constants", "all constants for a degree list and p");
  add_common(constants, true);

  auto* norm = app.add_subcommand("norm", "sup-norm of a polynomial on the l_p sphere");
  norm->add_option("poly", o.poly_path, "polynomial JSON file")->required();
  add_common(norm, false);
  norm->add_flag("--force-numeric", o.force_numeric, "skip closed forms");
  norm->add_option("--samples", o.norm_samples, "samples for p = 1 or inf")->check(CLI::PositiveNumber);
  add_seed(norm);
  o.est.add_to(norm);

  auto* verify = app.add_subcommand("verify", "ratio reports for random tuples");
  auto* search = app.add_subcommand("search", "pattern search for small ratios");
  for (auto* cmd : {verify, search}) {
    add_common(cmd, true);
    cmd->add_option("--n-vars", o.num_vars, "number of variables")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--distribution", o.distribution, "gaussian or sparse");
    cmd->add_flag("--csv", o.csv, "emit seed,ratio,slack,converged rows");
    add_seed(cmd);
    o.est.add_to(cmd);
  }
  verify->add_option("--tuples", o.tuples, "number of random tuples")->check(CLI::PositiveNumber);
  search->add_option("--restarts", o.restarts, "number of restarts")->check(CLI::PositiveNumber);
  search->add_option("--max-evals", o.max_evals, "ratio evaluations per restart")->check(CLI::PositiveNumber);

  auto* extremal = app.add_subcommand("extremal", "certify an extremal tuple");
  add_common(extremal, true);
  extremal->add_option("--n-vars", o.num_vars, "number of variables")->required()->check(CLI::PositiveNumber);
  extremal->add_option("--mode", o.mode, "exact or estimated");
  extremal->add_option("--construction", o.construction, "coordinate or roots");
  add_seed(extremal);
  o.est.add_to(extremal);

  auto* pinch = app.add_subcommand("pinch", "pinching checks on random or given matrices");
  add_common(pinch, false);
  pinch->add_option("--dim", o.dim, "matrix dimension")->check(CLI::PositiveNumber);
  pinch->add_option("--samples", o.pinch_samples, "number of random matrices")->check(CLI::PositiveNumber);
  pinch->add_option("--block", o.block, "zero-based indices of the first block")->delimiter(',');
  pinch->add_option("--matrix", o.matrix_path, "check one matrix from a JSON file");
  pinch->add_flag("--csv", o.csv, "emit one row per matrix");
  add_seed(pinch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("UsageError", e.what());
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    if (o.threads > 0) fl::set_max_threads(o.threads);
    Output out;
    CLI::App* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "constants") out = run_constants(o);
    else if (name == "norm") out = run_norm(o);
    else if (name == "verify") out = run_verify(o);
    else if (name == "search") out = run_search(o);
    else if (name == "extremal") out = run_extremal(o);
    else out = run_pinch(o);

    if (!out.csv.empty()) {
      std::cout << out.csv;
    } else {
      std::cout << out.json.dump(2) << '\n';
    }
    std::cout.flush();

    std::vector<std::string> args(argv, argv + argc);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const fl::Json manifest{{"command_line", args},
                            {"seed", o.resolved_seed()},
                            {"config", out.config},
                            {"threads", fl::max_threads()},
                            {"version", FACTORLAB_VERSION},
                            {"wall_time_s", wall}};
    if (o.manifest_path.empty()) {
      std::cerr << fl::Json{{"manifest", manifest}}.dump() << '\n';
    } else {
      std::ofstream file(o.manifest_path);
      if (!file) throw UsageError("cannot write " + o.manifest_path);
      file << manifest.dump(2) << '\n';
    }
    return 0;
  } catch (const UsageError& e) {
    emit_error("UsageError", e.what());
    return 2;
  } catch (const fl::Error& e) {
    emit_error(std::string(fl::to_string(e.code())), e.what());
    return e.code() == fl::Errc::ParseError ? 2 : 1;
  } catch (const std::exception& e) {
    emit_error("InternalError", e.what());
    return 1;
  }
}
