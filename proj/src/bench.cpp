#include "robustmean/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "robustmean/csv_io.hpp"
#include "robustmean/theory.hpp"

namespace robustmean::bench {

using json = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kKnownEstimators = {"l1", "lp", "median", "mean",
                                                   "simple_filter"};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    const auto piece = trim(s.substr(start, comma - start));
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not a number: " + v);
  }
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParameterError("config key '" + key + "': not an integer: " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParameterError("config key '" + key + "': expected true/false: " + v);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  for (Index i = 0; i < v.size(); ++i)
    v[i] = arr[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["setting"] = to_string(cfg.setting);
  j["d"] = cfg.d;
  j["n"] = cfg.n_values;
  j["eps"] = cfg.eps_values;
  j["trials"] = cfg.trials;
  j["estimators"] = cfg.estimators;
  j["seed"] = cfg.seed.master;
  j["parallelism"] = cfg.parallelism;
  j["sigma_mode"] =
      cfg.sigma_mode == SigmaMode::empirical ? "empirical" : "theoretical";
  j["c2_mode"] = cfg.c2_mode == C2Mode::formula ? "formula" : "median_oracle";
  if (cfg.sigma_override) j["sigma"] = *cfg.sigma_override;
  if (cfg.setting == Setting::pareto_constant) {
    j["pareto_shape"] = cfg.pareto_shape;
    j["pareto_scale"] = cfg.pareto_scale;
  }
  if (cfg.setting == Setting::csv_file) {
    j["csv_path"] = cfg.csv_path;
    j["csv_header"] = cfg.csv_header;
  }
  j["filter_c"] = cfg.filter_c;
  j["filter_max_rounds"] = cfg.filter_max_rounds;
  j["theory_delta"] = cfg.theory_delta;
  json a;
  a["p"] = cfg.algo.p;
  a["tau"] = cfg.algo.tau;
  a["c1"] = cfg.algo.c1;
  if (cfg.algo.eps_check) a["eps_check"] = *cfg.algo.eps_check;
  if (cfg.algo.final_threshold) a["final_threshold"] = *cfg.algo.final_threshold;
  if (cfg.algo.c2_init) a["c2_init"] = *cfg.algo.c2_init;
  a["tol_feas"] = cfg.algo.step1.tol_feas;
  a["max_sweeps"] = cfg.algo.step1.max_sweeps;
  a["eta"] = cfg.algo.step1.eta;
  a["spectral_tol"] = cfg.algo.step1.spectral_tol;
  a["spectral_max_iters"] = cfg.algo.step1.spectral_max_iters;
  a["rw_delta"] = cfg.algo.rw_delta;
  a["rw_rounds"] = cfg.algo.rw_rounds;
  a["allow_eps_check_above_breakdown"] = cfg.algo.allow_eps_check_above_breakdown;
  j["algo"] = a;
  return j;
}

struct EstimateOutcome {
  Vector estimate;
  int iterations = 0;
  std::string terminated_by;
};

EstimateOutcome run_one_estimator(const std::string& tag,
                                  const ExperimentConfig& cfg,
                                  const LabeledSample& sample, double sigma) {
  if (tag == "median")
    return {coordinate_wise_median(sample.points), 0, ""};
  if (tag == "mean") return {sample_mean(sample.points), 0, ""};
  if (tag == "simple_filter") {
    const int rounds = cfg.filter_max_rounds >= 0
                           ? cfg.filter_max_rounds
                           : static_cast<int>(sample.points.size() / 2);
    return {simple_filter_baseline(sample.points, sigma, cfg.filter_c, rounds),
            0, ""};
  }
  if (tag != "l1" && tag != "lp")
    throw ParameterError("unknown estimator tag: " + tag);

  PursuitConfig pc = cfg.algo;
  pc.sigma = sigma;
  pc.p = tag == "l1" ? 1.0 : (cfg.algo.p < 1.0 ? cfg.algo.p : 0.5);
  if (cfg.c2_mode == C2Mode::median_oracle) {
    const Vector med = coordinate_wise_median(sample.points);
    const double c2 = (med - sample.oracle_mean).norm() / sigma;
    pc.c2_init = std::max(c2, 1e-6);
  }
  const PursuitTrace trace = run_pursuit(sample.points, pc);
  return {trace.final_x, trace.iterations(), to_string(trace.terminated_by)};
}

}  // namespace

Setting setting_from_string(const std::string& s) {
  if (s == "gaussian_two_cluster") return Setting::gaussian_two_cluster;
  if (s == "pareto_constant") return Setting::pareto_constant;
  if (s == "csv_file") return Setting::csv_file;
  throw ParameterError("unknown setting: " + s);
}

std::string to_string(Setting s) {
  switch (s) {
    case Setting::gaussian_two_cluster: return "gaussian_two_cluster";
    case Setting::pareto_constant: return "pareto_constant";
    case Setting::csv_file: return "csv_file";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (d < 1) throw ParameterError("d must be positive");
  if (n_values.empty() || eps_values.empty())
    throw ParameterError("n and eps must be nonempty");
  for (Index n : n_values)
    if (n < 1) throw ParameterError("n must be positive");
  for (double e : eps_values)
    if (!(e >= 0.0) || !(e < 0.5)) throw ParameterError("eps must lie in [0, 1/2)");
  if (estimators.empty()) throw ParameterError("at least one estimator required");
  for (const auto& tag : estimators)
    if (std::find(kKnownEstimators.begin(), kKnownEstimators.end(), tag) ==
        kKnownEstimators.end())
      throw ParameterError("unknown estimator tag: " + tag);
  if (parallelism < 1) throw ParameterError("parallelism must be at least 1");
  if (!(filter_c > 1.0)) throw ParameterError("filter_c must exceed 1");
  if (setting == Setting::csv_file && csv_path.empty())
    throw ParameterError("csv_file setting requires csv_path");
  if (sigma_override && !(*sigma_override > 0.0))
    throw ParameterError("sigma must be positive");
  algo.validate();
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                      const std::string& value) {
  if (key == "setting") cfg.setting = setting_from_string(value);
  else if (key == "d") cfg.d = static_cast<Index>(parse_int(key, value));
  else if (key == "n") {
    cfg.n_values.clear();
    for (const auto& piece : split_list(value))
      cfg.n_values.push_back(static_cast<Index>(parse_int(key, piece)));
  } else if (key == "eps") {
    cfg.eps_values.clear();
    for (const auto& piece : split_list(value))
      cfg.eps_values.push_back(parse_double(key, piece));
  } else if (key == "trials") cfg.trials = static_cast<int>(parse_int(key, value));
  else if (key == "estimators") cfg.estimators = split_list(value);
  else if (key == "seed")
    cfg.seed.master = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "output") cfg.output_path = value;
  else if (key == "parallelism")
    cfg.parallelism = static_cast<int>(parse_int(key, value));
  else if (key == "sigma_mode") {
    if (value == "empirical") cfg.sigma_mode = SigmaMode::empirical;
    else if (value == "theoretical") cfg.sigma_mode = SigmaMode::theoretical;
    else throw ParameterError("sigma_mode must be empirical or theoretical");
  } else if (key == "c2_mode") {
    if (value == "formula") cfg.c2_mode = C2Mode::formula;
    else if (value == "median_oracle") cfg.c2_mode = C2Mode::median_oracle;
    else throw ParameterError("c2_mode must be formula or median_oracle");
  } else if (key == "sigma") cfg.sigma_override = parse_double(key, value);
  else if (key == "pareto_shape") cfg.pareto_shape = parse_double(key, value);
  else if (key == "pareto_scale") cfg.pareto_scale = parse_double(key, value);
  else if (key == "filter_c") cfg.filter_c = parse_double(key, value);
  else if (key == "filter_max_rounds")
    cfg.filter_max_rounds = static_cast<int>(parse_int(key, value));
  else if (key == "csv_path") cfg.csv_path = value;
  else if (key == "csv_header") cfg.csv_header = parse_bool(key, value);
  else if (key == "theory_delta") cfg.theory_delta = parse_double(key, value);
  else if (key == "p") cfg.algo.p = parse_double(key, value);
  else if (key == "tau") cfg.algo.tau = parse_double(key, value);
  else if (key == "c1") cfg.algo.c1 = parse_double(key, value);
  else if (key == "eps_check") cfg.algo.eps_check = parse_double(key, value);
  else if (key == "final_threshold")
    cfg.algo.final_threshold = parse_double(key, value);
  else if (key == "c2_init") cfg.algo.c2_init = parse_double(key, value);
  else if (key == "tol_feas") cfg.algo.step1.tol_feas = parse_double(key, value);
  else if (key == "max_sweeps")
    cfg.algo.step1.max_sweeps = static_cast<int>(parse_int(key, value));
  else if (key == "eta") cfg.algo.step1.eta = parse_double(key, value);
  else if (key == "spectral_tol")
    cfg.algo.step1.spectral_tol = parse_double(key, value);
  else if (key == "spectral_max_iters")
    cfg.algo.step1.spectral_max_iters = static_cast<int>(parse_int(key, value));
  else if (key == "rw_delta") cfg.algo.rw_delta = parse_double(key, value);
  else if (key == "rw_rounds")
    cfg.algo.rw_rounds = static_cast<int>(parse_int(key, value));
  else if (key == "allow_eps_check_above_breakdown")
    cfg.algo.allow_eps_check_above_breakdown = parse_bool(key, value);
  else throw ParameterError("unknown config key: " + key);
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) +
                           ": expected key = value");
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

LabeledSample make_sample(const ExperimentConfig& cfg, double eps, Index n,
                          RngSeed trial_seed) {
  switch (cfg.setting) {
    case Setting::gaussian_two_cluster:
      return gen_gaussian_two_cluster(cfg.d, n, eps, trial_seed);
    case Setting::pareto_constant:
      return gen_pareto_constant(cfg.d, n, eps, cfg.pareto_shape,
                                 cfg.pareto_scale, trial_seed);
    case Setting::csv_file: {
      const Matrix data = read_csv(cfg.csv_path, cfg.csv_header);
      const SampleMeta meta = read_sample_meta(meta_path_for(cfg.csv_path));
      if (meta.n != data.rows() || meta.d != data.cols())
        throw ParameterError("sample metadata does not match the CSV shape");
      LabeledSample sample{PointSet(data), meta.inlier_mask, meta.oracle_mean,
                           meta.true_mean, meta.eps};
      return sample;
    }
  }
  throw ParameterError("unknown setting");
}

double resolve_sigma(const ExperimentConfig& cfg, const LabeledSample& sample) {
  if (cfg.sigma_override) return *cfg.sigma_override;
  if (cfg.sigma_mode == SigmaMode::empirical) return empirical_sigma(sample);
  switch (cfg.setting) {
    case Setting::gaussian_two_cluster: return 1.0;
    case Setting::pareto_constant:
      return pareto_sigma(cfg.pareto_shape, cfg.pareto_scale);
    case Setting::csv_file:
      throw ParameterError(
          "theoretical sigma is undefined for csv data; pass sigma explicitly");
  }
  throw ParameterError("unknown setting");
}

std::vector<AggregateRecord> aggregate_trials(const std::vector<TrialRecord>& trials) {
  std::vector<AggregateRecord> out;
  for (const TrialRecord& rec : trials) {
    auto it = std::find_if(out.begin(), out.end(), [&](const AggregateRecord& a) {
      return a.eps == rec.eps && a.n == rec.n && a.estimator == rec.estimator;
    });
    if (it == out.end()) {
      out.push_back({rec.eps, rec.n, rec.estimator, 0, 0, 0, 0, 0});
      it = out.end() - 1;
    }
    if (rec.failed) {
      ++it->failures;
    } else {
      ++it->trials;
      it->mean_error += rec.recovery_error;
      it->std_error += rec.recovery_error * rec.recovery_error;
      it->mean_time_ms += rec.wall_time_ms;
    }
  }
  for (AggregateRecord& a : out) {
    if (a.trials == 0) continue;
    const double k = static_cast<double>(a.trials);
    a.mean_error /= k;
    a.mean_time_ms /= k;
    const double var =
        a.trials > 1
            ? std::max(0.0, (a.std_error - k * a.mean_error * a.mean_error) /
                                (k - 1.0))
            : 0.0;
    a.std_error = std::sqrt(var / k);
  }
  return out;
}

BenchReport run_bench(const ExperimentConfig& cfg) {
  cfg.validate();

  struct Job {
    double eps;
    Index n;
    int trial;
    std::uint64_t stream;
  };
  std::vector<Job> jobs;
  for (std::size_t ei = 0; ei < cfg.eps_values.size(); ++ei)
    for (std::size_t ni = 0; ni < cfg.n_values.size(); ++ni)
      for (int t = 0; t < cfg.trials; ++t)
        jobs.push_back({cfg.eps_values[ei], cfg.n_values[ni], t,
                        static_cast<std::uint64_t>(jobs.size())});

  std::vector<std::vector<TrialRecord>> results(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      std::vector<TrialRecord>& recs = results[k];
      std::optional<LabeledSample> sample;
      double sigma = 0.0;
      std::string sample_error;
      try {
        sample = make_sample(cfg, job.eps, job.n, cfg.seed.for_trial(job.stream));
        sigma = resolve_sigma(cfg, *sample);
      } catch (const std::exception& e) {
        sample_error = e.what();
      }
      for (const std::string& tag : cfg.estimators) {
        TrialRecord rec;
        rec.eps = job.eps;
        rec.n = job.n;
        rec.trial = job.trial;
        rec.estimator = tag;
        if (!sample_error.empty()) {
          rec.failed = true;
          rec.error = sample_error;
          recs.push_back(rec);
          continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
          const EstimateOutcome outcome =
              run_one_estimator(tag, cfg, *sample, sigma);
          rec.recovery_error = recovery_error(outcome.estimate, *sample);
          rec.iterations = outcome.iterations;
          rec.terminated_by = outcome.terminated_by;
        } catch (const std::exception& e) {
          rec.failed = true;
          rec.error = e.what();
        }
        const auto t1 = std::chrono::steady_clock::now();
        rec.wall_time_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        recs.push_back(rec);
      }
    }
  };

  const int workers =
      std::min<int>(cfg.parallelism, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BenchReport report;
  report.artifact_version = kArtifactVersion;
  report.timestamp = iso_timestamp();
  report.config_echo = config_to_json(cfg).dump();
  for (auto& recs : results)
    for (auto& rec : recs) report.trials.push_back(std::move(rec));
  report.aggregates = aggregate_trials(report.trials);

  const bool has_pursuit =
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "l1") !=
          cfg.estimators.end() ||
      std::find(cfg.estimators.begin(), cfg.estimators.end(), "lp") !=
          cfg.estimators.end();
  if (has_pursuit) {
    double sigma = 0.0;
    if (cfg.sigma_override) sigma = *cfg.sigma_override;
    else if (cfg.setting == Setting::gaussian_two_cluster) sigma = 1.0;
    else if (cfg.setting == Setting::pareto_constant)
      sigma = pareto_sigma(cfg.pareto_shape, cfg.pareto_scale);
    if (sigma > 0.0) {
      for (double eps : cfg.eps_values) {
        for (Index n : cfg.n_values) {
          TheoryAnnotation note;
          note.eps = eps;
          note.n = n;
          note.c2_0 = cfg.algo.c2_init
                          ? *cfg.algo.c2_init
                          : 3.0 * std::sqrt(static_cast<double>(cfg.d)) +
                                2.0 * cfg.algo.c1;
          try {
            const double ec = cfg.algo.effective_eps_check();
            note.horizon =
                theory::schedule_length(note.c2_0, ec, cfg.algo.tau, cfg.algo.c1);
            const theory::TheoryParams params{n,   cfg.d, cfg.theory_delta,
                                              cfg.algo.c1, sigma, eps,
                                              cfg.algo.tau};
            const auto bound =
                theory::iterate_error_bound(params, ec, note.horizon, note.c2_0);
            note.bound = bound.value;
            note.vacuous = bound.vacuous;
          } catch (const ParameterError&) {
            note.vacuous = true;
            note.bound = std::numeric_limits<double>::infinity();
          }
          report.theory.push_back(note);
        }
      }
    }
  }
  return report;
}

void write_report(const BenchReport& report, const std::string& base_path) {
  json j;
  j["artifact_version"] = report.artifact_version;
  j["timestamp"] = report.timestamp;
  j["config"] = json::parse(report.config_echo);
  json trials = json::array();
  for (const TrialRecord& r : report.trials) {
    json t;
    t["eps"] = r.eps;
    t["n"] = r.n;
    t["trial"] = r.trial;
    t["estimator"] = r.estimator;
    if (r.failed) {
      t["failed"] = true;
      t["error"] = r.error;
    } else {
      t["recovery_error"] = r.recovery_error;
      t["wall_time_ms"] = r.wall_time_ms;
      t["iterations"] = r.iterations;
      if (!r.terminated_by.empty()) t["terminated_by"] = r.terminated_by;
    }
    trials.push_back(std::move(t));
  }
  j["trials"] = std::move(trials);
  json aggs = json::array();
  for (const AggregateRecord& a : report.aggregates) {
    json ja;
    ja["eps"] = a.eps;
    ja["n"] = a.n;
    ja["estimator"] = a.estimator;
    ja["mean_error"] = a.mean_error;
    ja["std_error"] = a.std_error;
    ja["mean_time_ms"] = a.mean_time_ms;
    ja["trials"] = a.trials;
    ja["failures"] = a.failures;
    aggs.push_back(std::move(ja));
  }
  j["aggregates"] = std::move(aggs);
  if (!report.theory.empty()) {
    json notes = json::array();
    for (const TheoryAnnotation& t : report.theory) {
      json jt;
      jt["eps"] = t.eps;
      jt["n"] = t.n;
      jt["c2_0"] = t.c2_0;
      jt["horizon"] = t.horizon;
      jt["bound"] = t.vacuous ? json(nullptr) : json(t.bound);
      jt["vacuous"] = t.vacuous;
      notes.push_back(std::move(jt));
    }
    j["theory"] = std::move(notes);
  }

  std::ofstream out(base_path + ".json", std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + base_path + ".json");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + base_path + ".json");

  // Table shaped like a results table: rows are grid cells, columns estimators.
  std::vector<std::string> columns;
  for (const AggregateRecord& a : report.aggregates)
    if (std::find(columns.begin(), columns.end(), a.estimator) == columns.end())
      columns.push_back(a.estimator);
  std::vector<std::pair<double, Index>> cells;
  for (const AggregateRecord& a : report.aggregates) {
    const std::pair<double, Index> cell{a.eps, a.n};
    if (std::find(cells.begin(), cells.end(), cell) == cells.end())
      cells.push_back(cell);
  }
  std::ofstream table(base_path + ".csv", std::ios::binary);
  if (!table) throw IoError("cannot open for writing: " + base_path + ".csv");
  table << "eps,n";
  for (const auto& cname : columns) table << ',' << cname;
  table << '\n';
  for (const auto& cell : cells) {
    table << format_double(cell.first) << ',' << cell.second;
    for (const auto& cname : columns) {
      table << ',';
      for (const AggregateRecord& a : report.aggregates)
        if (a.eps == cell.first && a.n == cell.second && a.estimator == cname) {
          table << (a.trials > 0 ? format_double(a.mean_error) : "nan");
          break;
        }
    }
    table << '\n';
  }
  if (!table) throw IoError("write failed: " + base_path + ".csv");
}

BenchReport load_report(const std::string& json_path) {
  std::ifstream in(json_path, std::ios::binary);
  if (!in) throw IoError("cannot open report: " + json_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what(), 0, 0);
  }

  BenchReport report;
  report.artifact_version = j.at("artifact_version").get<std::string>();
  report.timestamp = j.at("timestamp").get<std::string>();
  report.config_echo = j.at("config").dump();
  for (const json& t : j.at("trials")) {
    TrialRecord r;
    r.eps = t.at("eps").get<double>();
    r.n = t.at("n").get<Index>();
    r.trial = t.at("trial").get<int>();
    r.estimator = t.at("estimator").get<std::string>();
    if (t.contains("failed") && t.at("failed").get<bool>()) {
      r.failed = true;
      r.error = t.value("error", "");
    } else {
      r.recovery_error = t.at("recovery_error").get<double>();
      r.wall_time_ms = t.at("wall_time_ms").get<double>();
      r.iterations = t.at("iterations").get<int>();
      r.terminated_by = t.value("terminated_by", "");
    }
    report.trials.push_back(std::move(r));
  }
  for (const json& a : j.at("aggregates")) {
    AggregateRecord rec;
    rec.eps = a.at("eps").get<double>();
    rec.n = a.at("n").get<Index>();
    rec.estimator = a.at("estimator").get<std::string>();
    rec.mean_error = a.at("mean_error").get<double>();
    rec.std_error = a.at("std_error").get<double>();
    rec.mean_time_ms = a.at("mean_time_ms").get<double>();
    rec.trials = a.at("trials").get<int>();
    rec.failures = a.at("failures").get<int>();
    report.aggregates.push_back(std::move(rec));
  }

  if (j.contains("theory")) {
    for (const json& t : j.at("theory")) {
      TheoryAnnotation note;
      note.eps = t.at("eps").get<double>();
      note.n = t.at("n").get<Index>();
      note.c2_0 = t.at("c2_0").get<double>();
      note.horizon = t.at("horizon").get<int>();
      note.vacuous = t.at("vacuous").get<bool>();
      note.bound = note.vacuous ? std::numeric_limits<double>::infinity()
                                : t.at("bound").get<double>();
      report.theory.push_back(note);
    }
  }

  const auto recomputed = aggregate_trials(report.trials);
  if (recomputed.size() != report.aggregates.size())
    throw ParameterError("report aggregates do not match the per-trial rows");
  for (std::size_t i = 0; i < recomputed.size(); ++i) {
    const AggregateRecord& a = report.aggregates[i];
    const AggregateRecord& b = recomputed[i];
    const bool same = a.eps == b.eps && a.n == b.n && a.estimator == b.estimator &&
                      a.trials == b.trials && a.failures == b.failures &&
                      std::abs(a.mean_error - b.mean_error) <=
                          1e-9 * std::max(1.0, std::abs(b.mean_error)) &&
                      std::abs(a.std_error - b.std_error) <=
                          1e-9 * std::max(1.0, std::abs(b.std_error));
    if (!same)
      throw ParameterError("report aggregates do not match the per-trial rows");
  }
  return report;
}

std::string meta_path_for(const std::string& csv_path) {
  return csv_path + ".meta.json";
}

void write_sample_meta(const std::string& path, const SampleMeta& meta) {
  json j;
  j["schema"] = "robustmean-sample/1";
  j["setting"] = to_string(meta.setting);
  j["d"] = meta.d;
  j["n"] = meta.n;
  j["eps"] = meta.eps;
  j["seed"] = {{"master", meta.seed.master}, {"trial", meta.seed.trial}};
  json mask = json::array();
  for (bool b : meta.inlier_mask) mask.push_back(b);
  j["inlier_mask"] = std::move(mask);
  j["oracle_mean"] = vector_to_json(meta.oracle_mean);
  j["true_mean"] = vector_to_json(meta.true_mean);
  j["sigma_empirical"] = meta.sigma_empirical;
  j["sigma_theoretical"] =
      meta.sigma_theoretical ? json(*meta.sigma_theoretical) : json(nullptr);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

SampleMeta read_sample_meta(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open sample metadata: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad sample metadata: ") + e.what(), 0, 0);
  }
  SampleMeta meta;
  meta.setting = setting_from_string(j.at("setting").get<std::string>());
  meta.d = j.at("d").get<Index>();
  meta.n = j.at("n").get<Index>();
  meta.eps = j.at("eps").get<double>();
  meta.seed.master = j.at("seed").at("master").get<std::uint64_t>();
  meta.seed.trial = j.at("seed").at("trial").get<std::uint64_t>();
  for (const json& b : j.at("inlier_mask")) meta.inlier_mask.push_back(b.get<bool>());
  meta.oracle_mean = vector_from_json(j.at("oracle_mean"));
  meta.true_mean = vector_from_json(j.at("true_mean"));
  meta.sigma_empirical = j.at("sigma_empirical").get<double>();
  if (!j.at("sigma_theoretical").is_null())
    meta.sigma_theoretical = j.at("sigma_theoretical").get<double>();
  return meta;
}

}  // namespace robustmean::bench
