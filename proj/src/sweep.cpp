#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "boolbias/experiment.hpp"
#include "boolbias/training.hpp"
#include "experiment_internal.hpp"
#include "output.hpp"

namespace fs = std::filesystem;

namespace boolbias::detail {

namespace {

using nlohmann::json;

constexpr std::uint64_t kTargetTag = 0x54;
constexpr std::uint64_t kDataTag = 0x44;
constexpr std::uint64_t kAlgoTag = 0x41;

/// Everything one training run needs. `config` is the run's own config
/// (list-valued keys resolved to scalars), echoed into its outputs.
struct RunSpec {
  TargetConfig target;
  std::string algo;
  int alpha_w = 1;
  std::uint64_t m = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t run_seed = 0;
  McmcConfig mcmc;
  GreedyConfig greedy;
  json config;

  std::string cell_name() const {
    std::string name = algo + "_" + target.family + "_" + target.param() + "_m" + std::to_string(m);
    if (algo == "mcmc") name += "_lambda" + format_double(mcmc.lambda);
    if (algo == "greedy") name += "_p" + format_double(greedy.p);
    return name;
  }

  json identity() const {
    json id;
    id["algo"] = algo;
    id["family"] = target.family;
    id["param"] = target.param();
    id["m"] = m;
    id["lambda"] = algo == "mcmc" ? json(mcmc.lambda) : json(nullptr);
    id["p"] = algo == "greedy" ? json(greedy.p) : json(nullptr);
    return id;
  }
};

json nan_to_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

/// Shared algorithm options; lambda is read by the caller for sweeps.
void read_algorithm(ConfigReader& r, RunSpec& spec, bool read_lambda) {
  if (spec.algo == "mcmc") {
    McmcConfig& c = spec.mcmc;
    c.kappa = r.real("kappa", c.kappa, 1e-12, 1e300);
    if (read_lambda) c.lambda = r.real("lambda", 0.0, 0.0, 1e6);
    c.steps = r.count("steps", c.steps, 1, UINT64_MAX);
    c.batch = r.count("batch", 0, 0, UINT64_MAX);
    c.include_beta = r.flag("include_beta", false);
    c.initial_beta = static_cast<int>(r.integer("initial_beta", 0, -1, 1));
    c.early_stop_window = r.count("early_stop", 0, 0, UINT64_MAX);
    c.trace_every = r.count("trace_every", 1, 1, UINT64_MAX);
    c.snapshot_test_acc = r.real_list("snapshot_test_acc", {}, 0.0, 1.0);
    if (r.has("snapshot_steps")) {
      for (auto s : r.integer_list("snapshot_steps", {}, 0, INT64_MAX)) {
        c.snapshot_steps.push_back(static_cast<std::uint64_t>(s));
      }
    }
  } else if (spec.algo == "greedy") {
    GreedyConfig& c = spec.greedy;
    c.p = r.real("p", c.p, 0.0, 1.0);
    c.steps = r.count("steps", c.steps, 1, UINT64_MAX);
    c.batch = r.count("batch", 0, 0, UINT64_MAX);
    c.include_beta = r.flag("include_beta", false);
    c.initial_beta = static_cast<int>(r.integer("initial_beta", 1, -1, 1));
    c.keep_current = r.flag("keep_current", false);
    c.early_stop_window = r.count("early_stop", 0, 0, UINT64_MAX);
    c.trace_every = r.count("trace_every", 1, 1, UINT64_MAX);
    c.snapshot_test_acc = r.real_list("snapshot_test_acc", {}, 0.0, 1.0);
    if (r.has("snapshot_steps")) {
      for (auto s : r.integer_list("snapshot_steps", {}, 0, INT64_MAX)) {
        c.snapshot_steps.push_back(static_cast<std::uint64_t>(s));
      }
    }
  }
}

std::string trace_csv(const TrainTrace& trace) {
  std::ostringstream csv;
  csv << "step,loss,train_acc,test_acc,norm_w1,norm_w2\n";
  for (const TraceRecord& t : trace.records) {
    csv << t.step << ',' << format_double(t.loss) << ',' << format_double(t.train_acc) << ','
        << format_double(t.test_acc) << ',' << t.norm_w1 << ',' << t.norm_w2 << '\n';
  }
  return csv.str();
}

json execute_run(const RunSpec& spec, const fs::path& dir) {
  const BooleanFunction target = spec.target.make(derive_seed(spec.base_seed, spec.run_seed, kTargetTag));
  const Dataset data = make_dataset(target, spec.m, derive_seed(spec.base_seed, spec.run_seed, kDataTag));
  const std::uint64_t algo_seed = derive_seed(spec.base_seed, spec.run_seed, kAlgoTag);
  const int width = default_width(target.n(), spec.alpha_w);

  json summary = spec.identity();
  summary["n"] = target.n();
  summary["alpha_w"] = spec.alpha_w;
  summary["run_seed"] = spec.run_seed;
  summary["target"] = target.to_string();
  summary["config"] = spec.config;
  summary["version"] = version();

  if (!dir.empty()) {
    json run = spec.identity();
    run["config"] = spec.config;
    run["run_seed"] = spec.run_seed;
    run["version"] = version();
    write_json(dir / "run.json", run);
  }

  if (spec.algo == "oracle") {
    const OracleResult r = oracle_train(data);
    summary["train_acc"] = r.train_acc;
    summary["test_acc"] = nan_to_null(r.test_acc);
    summary["dnf"] = to_text(r.dnf);
    summary["prediction"] = r.prediction.to_string();
    const int literals = dnf_length(r.dnf);
    const int clauses = objective_value(r.dnf, Objective::Clauses);
    summary["norm_w1"] = literals;
    summary["norm_w2"] = clauses;
    summary["norm"] = literals + clauses;
    summary["fits_width"] = clauses <= width;
  } else {
    TrainResult r;
    if (spec.algo == "mcmc") {
      McmcConfig c = spec.mcmc;
      c.seed = algo_seed;
      r = mcmc_train(data, spec.alpha_w, c);
      summary["kappa"] = c.kappa;
    } else {
      GreedyConfig c = spec.greedy;
      c.seed = algo_seed;
      r = greedy_train(data, spec.alpha_w, c);
    }
    summary["train_acc"] = r.train_acc;
    summary["test_acc"] = nan_to_null(r.test_acc);
    summary["norm_w1"] = r.norm.norm_w1;
    summary["norm_w2"] = r.norm.norm_w2;
    summary["norm"] = r.norm.total;
    summary["steps_run"] = r.steps_run;
    summary["accepted"] = r.accepted;
    summary["beta"] = r.params.beta;
    summary["prediction"] = r.prediction.to_string();
    if (!dir.empty()) {
      write_file_atomic(dir / "trace.csv", trace_csv(r.trace));
      write_meta(dir / "trace.csv", "train", spec.config, spec.run_seed);
      for (const Snapshot& s : r.trace.snapshots) {
        write_heatmap(s.params, dir / "snapshots" / ("step_" + std::to_string(s.step) + ".csv"),
                      static_cast<std::int64_t>(s.step), s.test_acc);
      }
    }
  }
  summary["train_idx"] = data.train_idx;
  if (!dir.empty()) write_json(dir / "summary.json", summary);
  return summary;
}

/// Parses a train or sweep config into run specs. Sweeps accept lists for
/// k, t, m and lambda.
std::vector<RunSpec> plan_runs(const json& config, const std::string& command, fs::path& out,
                               unsigned& threads) {
  const bool sweep = command == "sweep";
  ConfigReader r(config, command);
  RunSpec base;
  base.target = read_target(r, false);
  base.algo = r.choice("algo", "mcmc", {"mcmc", "greedy", "oracle"});
  base.alpha_w = static_cast<int>(r.integer("alpha_w", 1, 1, 64));
  base.base_seed = r.count("seed", 0, 0, UINT64_MAX);
  const std::uint64_t seeds = r.count("seeds", 1, 1, 1'000'000);
  threads = cap_threads(r.count("threads", 1, 1, 1024));
  out = r.text("out", "");
  if (sweep && out.empty()) throw InvalidArgument("sweep: 'out' is required");
  const int n = base.target.n;
  const std::int64_t inputs = std::int64_t{1} << std::min(n, 62);

  std::vector<std::int64_t> params{0};
  if (base.target.family == "parity") {
    params = sweep ? r.integer_list("k", {}, 1, n)
                   : std::vector<std::int64_t>{r.required_integer("k", 1, n)};
  } else if (base.target.family == "entropy") {
    if (!r.has("t")) throw InvalidArgument(command + ": entropy family needs 't'");
    params = sweep ? r.integer_list("t", {}, 0, inputs)
                   : std::vector<std::int64_t>{r.required_integer("t", 0, inputs)};
  }
  const auto ms = sweep ? r.integer_list("m", {}, 1, inputs - 1)
                        : std::vector<std::int64_t>{r.required_integer("m", 1, inputs - 1)};
  std::vector<double> lambdas{0.0};
  if (base.algo == "mcmc") {
    lambdas = sweep ? r.real_list("lambda", {0.0}, 0.0, 1e6)
                    : std::vector<double>{r.real("lambda", 0.0, 0.0, 1e6)};
  }
  if (params.empty() || ms.empty() || lambdas.empty()) {
    throw InvalidArgument(command + ": k/t, m and lambda lists must be non-empty");
  }
  read_algorithm(r, base, false);
  r.done();
  if (base.algo == "oracle" && n > kMaxExactInputs) {
    throw BudgetExceeded("oracle training supports n <= " + std::to_string(kMaxExactInputs));
  }

  std::vector<RunSpec> runs;
  for (auto param : params) {
    for (auto m : ms) {
      for (double lambda : lambdas) {
        for (std::uint64_t s = 0; s < seeds; ++s) {
          RunSpec spec = base;
          if (spec.target.family == "parity") spec.target.k = param;
          if (spec.target.family == "entropy") spec.target.t = static_cast<std::uint64_t>(param);
          spec.m = static_cast<std::uint64_t>(m);
          spec.mcmc.lambda = lambda;
          spec.run_seed = s;
          spec.config = config;
          spec.config.erase("seeds");
          spec.config.erase("threads");
          spec.config.erase("out");
          spec.config.erase("command");
          if (spec.target.family == "parity") spec.config["k"] = param;
          if (spec.target.family == "entropy") spec.config["t"] = param;
          spec.config["m"] = m;
          if (spec.algo == "mcmc") spec.config["lambda"] = lambda;
          spec.config["run_seed"] = s;
          runs.push_back(std::move(spec));
        }
      }
    }
  }
  return runs;
}

fs::path run_dir(const fs::path& out, const RunSpec& spec) {
  return out / spec.cell_name() / ("seed_" + std::to_string(spec.run_seed));
}

}  // namespace

json run_train(const json& config) {
  fs::path out;
  unsigned threads = 1;
  const std::vector<RunSpec> runs = plan_runs(config, "train", out, threads);
  std::vector<json> results(runs.size());
  std::vector<std::string> errors(runs.size());
  std::exception_ptr first_error;
  run_pool(runs.size(), threads, [&](std::size_t i) {
    try {
      results[i] = execute_run(runs[i], out.empty() ? fs::path() : run_dir(out, runs[i]));
    } catch (const std::exception& e) {
      errors[i] = e.what();
      if (runs.size() == 1) first_error = std::current_exception();
    }
  });
  // A single run reports its own error type; several runs report counts.
  if (first_error) std::rethrow_exception(first_error);
  json summary;
  summary["command"] = "train";
  summary["runs"] = json::array();
  std::size_t failed = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (!errors[i].empty()) {
      ++failed;
      summary["runs"].push_back({{"run_seed", runs[i].run_seed}, {"error", errors[i]}});
    } else {
      json brief = results[i];
      brief.erase("config");
      brief.erase("train_idx");
      summary["runs"].push_back(brief);
    }
  }
  summary["failed"] = failed;
  if (!out.empty()) summary["out"] = out.string();
  return summary;
}

json run_sweep(const json& config) {
  fs::path out;
  unsigned threads = 1;
  const std::vector<RunSpec> runs = plan_runs(config, "sweep", out, threads);

  // Completed runs are skipped, but only if they were produced by the same
  // configuration; anything else is refused before work starts.
  std::vector<char> done(runs.size(), 0);
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const fs::path summary_path = run_dir(out, runs[i]) / "summary.json";
    if (!fs::exists(summary_path)) continue;
    json existing;
    try {
      existing = json::parse(read_file(summary_path));
    } catch (const json::exception&) {
      continue;  // unreadable summary: rerun
    }
    if (existing.value("config", json()) != runs[i].config) {
      throw InvalidArgument("sweep: " + summary_path.string() +
                            " was produced by a different configuration");
    }
    done[i] = 1;
  }

  json manifest;
  manifest["config"] = config;
  manifest["version"] = version();
  manifest["runs"] = runs.size();
  json cells = json::array();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (runs[i].run_seed == 0) cells.push_back(runs[i].cell_name());
  }
  manifest["cells"] = cells;
  write_json(out / "manifest.json", manifest);

  std::atomic<std::size_t> failed{0};
  std::mutex error_mutex;
  run_pool(runs.size(), threads, [&](std::size_t i) {
    if (done[i]) return;
    const fs::path dir = run_dir(out, runs[i]);
    try {
      execute_run(runs[i], dir);
      std::error_code ec;
      fs::remove(dir / "error.json", ec);
    } catch (const std::exception& e) {
      ++failed;
      std::lock_guard<std::mutex> lock(error_mutex);
      try {
        write_json(dir / "error.json", json{{"error", e.what()}});
      } catch (const std::exception&) {
      }
    }
  });

  json agg = run_aggregate(json{{"run_dir", out.string()}});
  json summary;
  summary["command"] = "sweep";
  summary["runs"] = runs.size();
  summary["skipped"] = static_cast<std::size_t>(std::count(done.begin(), done.end(), 1));
  summary["failed"] = failed.load();
  summary["cells"] = cells.size();
  summary["summary"] = agg["out"];
  summary["out"] = out.string();
  return summary;
}

json run_aggregate(const json& config) {
  ConfigReader r(config, "aggregate");
  const fs::path dir = r.required_text("run_dir");
  fs::path out = r.text("out", "");
  r.done();
  if (!fs::is_directory(dir)) throw IoError("aggregate: no such directory " + dir.string());
  if (out.empty()) out = dir / "summary.csv";

  struct Group {
    json identity;
    std::vector<double> train, test, norm;
    std::size_t incomplete = 0;
  };
  using Key = std::tuple<std::string, std::string, double, std::string, std::uint64_t, double, double>;
  std::map<Key, Group> groups;

  std::vector<fs::path> run_files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().filename() == "run.json") {
      run_files.push_back(entry.path());
    }
  }
  std::sort(run_files.begin(), run_files.end());
  for (const fs::path& run_path : run_files) {
    json run;
    try {
      run = json::parse(read_file(run_path));
    } catch (const json::exception& e) {
      throw IoError("aggregate: malformed " + run_path.string());
    }
    const std::string param = run.value("param", "");
    double param_num = 0.0;
    if (param.size() > 1 && param[0] != 'p') param_num = std::strtod(param.c_str() + 1, nullptr);
    auto num = [](const json& v) { return v.is_number() ? v.get<double>() : -1.0; };
    const Key key{run.value("algo", ""), run.value("family", ""), param_num, param,
                  run.value("m", std::uint64_t{0}), num(run.value("lambda", json())),
                  num(run.value("p", json()))};
    Group& g = groups[key];
    if (g.identity.is_null()) {
      g.identity = run;
      g.identity.erase("config");
      g.identity.erase("run_seed");
      g.identity.erase("version");
    }
    const fs::path summary_path = run_path.parent_path() / "summary.json";
    json summary;
    bool complete = fs::exists(summary_path);
    if (complete) {
      try {
        summary = json::parse(read_file(summary_path));
      } catch (const json::exception&) {
        complete = false;
      }
    }
    if (!complete) {
      ++g.incomplete;
      continue;
    }
    g.train.push_back(summary.value("train_acc", 0.0));
    const json test = summary.value("test_acc", json());
    g.test.push_back(test.is_number() ? test.get<double>() : std::nan(""));
    g.norm.push_back(summary.value("norm", 0.0));
  }

  auto mean_sd = [](const std::vector<double>& xs) {
    if (xs.empty()) return std::pair<std::string, std::string>{"", ""};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
    return std::pair<std::string, std::string>{format_double(mean), format_double(sd)};
  };
  auto cell = [](const json& v) {
    return v.is_number() ? format_double(v.get<double>()) : std::string();
  };

  std::ostringstream csv;
  csv << "algo,family,param,m,lambda,p,runs,n_incomplete,mean_train_acc,sd_train_acc,"
         "mean_test_acc,sd_test_acc,mean_norm,sd_norm\n";
  std::size_t incomplete = 0;
  for (const auto& [key, g] : groups) {
    const auto train = mean_sd(g.train);
    const auto test = mean_sd(g.test);
    const auto norm = mean_sd(g.norm);
    csv << g.identity.value("algo", "") << ',' << g.identity.value("family", "") << ','
        << g.identity.value("param", "") << ',' << g.identity.value("m", std::uint64_t{0}) << ','
        << cell(g.identity.value("lambda", json())) << ',' << cell(g.identity.value("p", json()))
        << ',' << g.train.size() << ',' << g.incomplete << ',' << train.first << ','
        << train.second << ',' << test.first << ',' << test.second << ',' << norm.first << ','
        << norm.second << '\n';
    incomplete += g.incomplete;
  }
  write_file_atomic(out, csv.str());
  write_meta(out, "aggregate", config, 0);
  return json{{"command", "aggregate"}, {"rows", groups.size()}, {"incomplete", incomplete},
              {"out", out.string()}};
}

}  // namespace boolbias::detail
