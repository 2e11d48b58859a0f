#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "robustmean/bench.hpp"
#include "robustmean/csv_io.hpp"
#include "robustmean/estimator.hpp"
#include "robustmean/theory.hpp"

namespace {

using robustmean::Index;
using robustmean::Vector;
using json = nlohmann::ordered_json;

int log_level() {
  const char* env = std::getenv("ROBUSTMEAN_LOG");
  if (env == nullptr) return 1;
  const std::string v = env;
  if (v == "quiet" || v == "0") return 0;
  if (v == "debug" || v == "2") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "robustmean: " << msg << '\n';
}

struct AlgoFlags {
  std::optional<double> p, tau, c1, sigma, eps_check, final_threshold, c2_init;
  std::optional<double> tol_feas, eta, rw_delta, spectral_tol;
  std::optional<int> max_sweeps, rw_rounds, spectral_max_iters;
  bool allow_supercritical = false;

  void add_to(CLI::App* app) {
    app->add_option("--p", p, "objective exponent p in (0,1]");
    app->add_option("--tau", tau, "hard threshold tau in (0,1]");
    app->add_option("--c1", c1, "spectral slack factor (> 1)");
    app->add_option("--sigma", sigma, "covariance spectral-norm bound sigma");
    app->add_option("--eps-check", eps_check, "upper bound on corruption level");
    app->add_option("--final-threshold", final_threshold,
                    "re-threshold the last indicator at this value");
    app->add_option("--c2-init", c2_init, "initial radius (default 3 sqrt(d) + 2 c1)");
    app->add_option("--tol-feas", tol_feas, "feasibility tolerance");
    app->add_option("--max-sweeps", max_sweeps, "down-weighting sweep cap");
    app->add_option("--eta", eta, "down-weighting step size in (0,1)");
    app->add_option("--rw-delta", rw_delta, "reweighting smoothing for p < 1");
    app->add_option("--rw-rounds", rw_rounds, "reweighting round cap for p < 1");
    app->add_option("--spectral-tol", spectral_tol, "power-iteration tolerance");
    app->add_option("--spectral-max-iters", spectral_max_iters,
                    "power-iteration cap");
    app->add_flag("--allow-supercritical", allow_supercritical,
                  "accept eps_check above the breakdown point (warns)");
  }

  void apply(robustmean::PursuitConfig& cfg) const {
    if (p) cfg.p = *p;
    if (tau) cfg.tau = *tau;
    if (c1) cfg.c1 = *c1;
    if (sigma) cfg.sigma = *sigma;
    if (eps_check) cfg.eps_check = *eps_check;
    if (final_threshold) cfg.final_threshold = *final_threshold;
    if (c2_init) cfg.c2_init = *c2_init;
    if (tol_feas) cfg.step1.tol_feas = *tol_feas;
    if (max_sweeps) cfg.step1.max_sweeps = *max_sweeps;
    if (eta) cfg.step1.eta = *eta;
    if (rw_delta) cfg.rw_delta = *rw_delta;
    if (rw_rounds) cfg.rw_rounds = *rw_rounds;
    if (spectral_tol) cfg.step1.spectral_tol = *spectral_tol;
    if (spectral_max_iters) cfg.step1.spectral_max_iters = *spectral_max_iters;
    cfg.allow_eps_check_above_breakdown = allow_supercritical;
  }
};

int cmd_generate(const std::string& setting, Index d, Index n, double eps,
                 double shape, double scale, std::uint64_t seed,
                 std::uint64_t trial, const std::string& output) {
  namespace bench = robustmean::bench;
  const bench::Setting s = bench::setting_from_string(setting);
  const robustmean::RngSeed rng{seed, trial};
  robustmean::LabeledSample sample =
      s == bench::Setting::gaussian_two_cluster
          ? robustmean::gen_gaussian_two_cluster(d, n, eps, rng)
          : robustmean::gen_pareto_constant(d, n, eps, shape, scale, rng);

  robustmean::write_csv(output, sample.points.data());
  bench::SampleMeta meta;
  meta.setting = s;
  meta.d = d;
  meta.n = n;
  meta.eps = sample.epsilon;
  meta.seed = rng;
  meta.inlier_mask = sample.inlier_mask;
  meta.oracle_mean = sample.oracle_mean;
  meta.true_mean = sample.true_mean;
  meta.sigma_empirical = robustmean::empirical_sigma(sample);
  meta.sigma_theoretical =
      s == bench::Setting::gaussian_two_cluster
          ? 1.0
          : robustmean::pareto_sigma(shape, scale);
  bench::write_sample_meta(bench::meta_path_for(output), meta);
  log_info("wrote " + output + " and " + bench::meta_path_for(output));
  return 0;
}

int cmd_estimate(const std::string& input, bool header, const AlgoFlags& flags,
                 const std::string& sigma_mode) {
  namespace bench = robustmean::bench;
  const robustmean::Matrix data = robustmean::read_csv(input, header);
  robustmean::PursuitConfig cfg;
  flags.apply(cfg);

  if (!flags.sigma) {
    bench::SampleMeta meta;
    try {
      meta = bench::read_sample_meta(bench::meta_path_for(input));
    } catch (const robustmean::IoError&) {
      throw robustmean::ParameterError(
          "sigma not given and no sample metadata found; pass --sigma");
    }
    if (sigma_mode == "theoretical") {
      if (!meta.sigma_theoretical)
        throw robustmean::ParameterError(
            "sample metadata records no theoretical sigma; pass --sigma");
      cfg.sigma = *meta.sigma_theoretical;
    } else {
      cfg.sigma = meta.sigma_empirical;
    }
  }

  const robustmean::PursuitTrace trace =
      robustmean::run_pursuit(robustmean::PointSet(data), cfg);

  json out;
  json est = json::array();
  for (Index i = 0; i < trace.final_x.size(); ++i) est.push_back(trace.final_x[i]);
  out["estimate"] = std::move(est);
  out["iterations"] = trace.iterations();
  json c2s = json::array();
  for (const auto& it : trace.iterates) c2s.push_back(it.c2);
  out["c2_trace"] = std::move(c2s);
  Index support = 0;
  for (Index i = 0; i < trace.final_h.size(); ++i)
    if (trace.final_h[i] > 0.5) ++support;
  out["h_support_size"] = support;
  out["terminated_by"] = to_string(trace.terminated_by);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_bench(const std::string& config_path,
              const std::vector<std::string>& overrides) {
  namespace bench = robustmean::bench;
  bench::ExperimentConfig cfg = config_path.empty()
                                    ? bench::ExperimentConfig{}
                                    : bench::load_config(config_path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw robustmean::ParameterError("override must be key=value: " + kv);
    bench::apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  log_info("running bench: " + std::to_string(cfg.eps_values.size()) + " eps x " +
           std::to_string(cfg.n_values.size()) + " n x " +
           std::to_string(cfg.trials) + " trials");
  const bench::BenchReport report = bench::run_bench(cfg);
  bench::write_report(report, cfg.output_path);
  log_info("wrote " + cfg.output_path + ".json and " + cfg.output_path + ".csv");
  int failures = 0;
  for (const auto& a : report.aggregates) failures += a.failures;
  if (failures > 0) log_info(std::to_string(failures) + " trial failures recorded");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust mean estimation by iterative outlier-indicator pursuit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic sample as CSV");
  std::string gen_setting = "gaussian_two_cluster";
  Index gen_d = 100, gen_n = 1000;
  double gen_eps = 0.2, gen_shape = 2.5, gen_scale = 1.0;
  std::uint64_t gen_seed = 0, gen_trial = 0;
  std::string gen_output = "sample.csv";
  gen->add_option("--setting", gen_setting,
                  "gaussian_two_cluster or pareto_constant");
  gen->add_option("--d", gen_d, "dimension");
  gen->add_option("--n", gen_n, "sample size");
  gen->add_option("--eps", gen_eps, "corruption fraction in [0, 1/2)");
  gen->add_option("--shape", gen_shape, "Pareto shape (> 2)");
  gen->add_option("--scale", gen_scale, "Pareto scale (> 0)");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--trial", gen_trial, "trial index of the derived stream");
  gen->add_option("--output", gen_output, "output CSV path");

  // estimate
  auto* est = app.add_subcommand("estimate", "run the pursuit on a CSV file");
  std::string est_input;
  bool est_header = false;
  std::string est_sigma_mode = "empirical";
  AlgoFlags est_flags;
  est->add_option("input", est_input, "CSV file, one datapoint per row")
      ->required();
  est->add_flag("--header", est_header, "skip one header line");
  est->add_option("--sigma-mode", est_sigma_mode,
                  "empirical or theoretical (sidecar lookup)")
      ->check(CLI::IsMember({"empirical", "theoretical"}));
  est_flags.add_to(est);

  // bench
  auto* ben = app.add_subcommand("bench", "run a multi-trial benchmark");
  std::string ben_config;
  std::vector<std::string> ben_overrides;
  ben->add_option("--config", ben_config, "flat key = value config file");
  ben->add_option("--set", ben_overrides,
                  "override a config key, e.g. --set trials=5")
      ->take_all();
  std::optional<std::uint64_t> ben_seed;
  std::optional<std::string> ben_output;
  std::optional<int> ben_parallelism;
  ben->add_option("--seed", ben_seed, "master seed override");
  ben->add_option("--output", ben_output, "report base path override");
  ben->add_option("--parallelism", ben_parallelism, "worker pool size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_setting, gen_d, gen_n, gen_eps, gen_shape,
                          gen_scale, gen_seed, gen_trial, gen_output);
    if (est->parsed()) return cmd_estimate(est_input, est_header, est_flags,
                                           est_sigma_mode);
    if (ben->parsed()) {
      if (ben_seed) ben_overrides.push_back("seed=" + std::to_string(*ben_seed));
      if (ben_output) ben_overrides.push_back("output=" + *ben_output);
      if (ben_parallelism)
        ben_overrides.push_back("parallelism=" + std::to_string(*ben_parallelism));
      return cmd_bench(ben_config, ben_overrides);
    }
  } catch (const robustmean::ParameterError& e) {
    std::cerr << "robustmean: usage error: " << e.what() << '\n';
    return 1;
  } catch (const robustmean::ContractViolation& e) {
    std::cerr << "robustmean: usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "robustmean: data error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
