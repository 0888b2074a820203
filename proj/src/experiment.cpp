#include "boolbias/experiment.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "boolbias/bounds.hpp"
#include "boolbias/complexity.hpp"
#include "boolbias/error.hpp"
#include "boolbias/prior.hpp"
#include "boolbias/training.hpp"
#include "experiment_internal.hpp"
#include "output.hpp"

namespace boolbias {

namespace detail {

std::string TargetConfig::param() const {
  if (family == "parity") return "k" + std::to_string(k);
  if (family == "entropy") return "t" + std::to_string(t);
  if (family == "constant") return value ? "v1" : "v0";
  return "p" + pattern;
}

BooleanFunction TargetConfig::make(std::uint64_t seed) const {
  FamilySpec spec;
  spec.seed = seed;
  if (family == "parity") {
    spec.family = ParityFamily{static_cast<int>(k), subset, random_subset};
  } else if (family == "entropy") {
    spec.family = EntropyFamily{t};
  } else if (family == "constant") {
    spec.family = ConstantFamily{value};
  } else {
    spec.family = RepeatFamily{pattern};
  }
  return generate(spec, n);
}

void read_family_param(ConfigReader& r, TargetConfig& target) {
  if (target.family == "parity") {
    target.k = r.required_integer("k", 1, target.n);
  } else if (target.family == "entropy") {
    target.t = r.count("t", 0, 0, std::uint64_t{1} << target.n);
    if (!r.has("t")) throw InvalidArgument("entropy family needs 't'");
  }
}

TargetConfig read_target(ConfigReader& r, bool with_param) {
  TargetConfig target;
  target.family = r.choice("family", "parity", {"parity", "entropy", "constant", "repeat"});
  target.n = static_cast<int>(r.required_integer("n", 1, kMaxInputs));
  if (target.family == "parity") {
    for (auto v : r.integer_list("subset", {1}, 1, target.n)) {
      target.subset.push_back(static_cast<int>(v));
    }
    if (!r.has("subset")) target.subset.clear();
    target.random_subset = r.flag("random_subset", false);
  } else if (target.family == "constant") {
    target.value = r.flag("value", false);
  } else if (target.family == "repeat") {
    target.pattern = r.required_text("pattern");
    if (target.pattern.empty() ||
        target.pattern.find_first_not_of("01") != std::string::npos) {
      throw InvalidArgument("repeat pattern must be a non-empty 0/1 string");
    }
  }
  if (with_param) read_family_param(r, target);
  return target;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  write_file_atomic(path, value.dump(2) + "\n");
}

void write_meta(const std::filesystem::path& path, std::string_view command,
                const nlohmann::json& config, std::uint64_t seed) {
  nlohmann::json meta;
  meta["command"] = command;
  meta["config"] = config;
  meta["seed"] = seed;
  meta["version"] = version();
  std::filesystem::path meta_path = path;
  meta_path += ".meta.json";
  write_json(meta_path, meta);
}

}  // namespace detail

namespace {

using detail::ConfigReader;
using nlohmann::json;

json run_prior(const json& config) {
  ConfigReader r(config, "prior");
  const int n = static_cast<int>(r.required_integer("n", 1, kMaxSampledInputs));
  const int alpha_w = static_cast<int>(r.integer("alpha_w", 1, 1, 64));
  const bool exact = r.flag("exact", false);
  SampleOptions opts;
  opts.seed = r.count("seed", 0, 0, UINT64_MAX);
  opts.first_draw = r.count("first_draw", 0, 0, UINT64_MAX);
  opts.threads = detail::cap_threads(r.count("threads", 1, 1, 1024));
  opts.max_distinct = r.count("max_distinct", opts.max_distinct, 1, UINT64_MAX);
  std::uint64_t draws = 0;
  if (!exact) {
    draws = r.count("draws", 1'000'000, 1, UINT64_MAX);
  }
  // Complexity columns cost one exact minimization per function, so by
  // default they are filled only where every function can be listed.
  bool with_complexity = n <= 4;
  if (r.has("complexity") && config.at("complexity").is_boolean()) {
    with_complexity = r.flag("complexity", with_complexity);
  } else {
    const std::string mode = r.choice("complexity", "auto", {"auto", "true", "false"});
    if (mode != "auto") with_complexity = mode == "true";
  }
  const std::string out = r.text("out", "");
  const std::uint64_t top = r.count("top", 10, 0, 1'000'000);
  r.done();

  const PriorEstimate est = exact ? exact_prior(n, alpha_w) : sample_prior(n, alpha_w, draws, opts);
  const auto rows = rank_table(est, with_complexity && !out.empty());

  json summary;
  summary["command"] = "prior";
  summary["n"] = n;
  summary["alpha_w"] = alpha_w;
  summary["exact"] = exact;
  summary["total"] = est.total;
  summary["distinct"] = est.entries.size();
  if (n <= 4) summary["unobserved"] = (std::uint64_t{1} << (1u << n)) - est.entries.size();
  json top_rows = json::array();
  for (std::size_t i = 0; i < rows.size() && i < top; ++i) {
    top_rows.push_back({{"rank", rows[i].rank},
                        {"function_hex", rows[i].f.to_hex()},
                        {"function", rows[i].f.to_string()},
                        {"count", rows[i].count},
                        {"p_hat", rows[i].p_hat}});
  }
  summary["top"] = top_rows;

  if (!out.empty()) {
    std::ostringstream csv;
    csv << "function_hex,count,p_hat,k_dnf,k_theta,k_clause,k_lz,rank,zipf_ref\n";
    for (const RankRow& row : rows) {
      csv << row.f.to_hex() << ',' << row.count << ',' << format_double(row.p_hat) << ',';
      if (row.complexity) {
        csv << row.complexity->k_dnf << ',' << row.complexity->k_theta << ','
            << row.complexity->k_clause << ',' << format_double(row.complexity->k_lz);
      } else {
        csv << ",,,";
      }
      csv << ',' << row.rank << ',' << format_double(row.zipf_ref) << '\n';
    }
    write_file_atomic(out, csv.str());
    detail::write_meta(out, "prior", config, opts.seed);
    summary["out"] = out;
  }
  return summary;
}

BooleanFunction parse_function(const std::string& text, const std::string& format, int n) {
  std::string body = text;
  bool hex = format == "hex";
  if (body.rfind("0x", 0) == 0 || body.rfind("0X", 0) == 0) {
    body = body.substr(2);
    hex = true;
  }
  if (format == "auto" && !hex) hex = body.find_first_not_of("01") != std::string::npos;
  if (!hex) return BooleanFunction::from_string(body);
  if (n == 0) {
    // Infer n from the digit count: 4 bits per digit, so 2^n = 4 * len.
    const std::size_t bits = body.size() * 4;
    if (bits == 0 || (bits & (bits - 1)) != 0) {
      throw InvalidArgument("cannot infer n from hex length; pass n");
    }
    n = std::countr_zero(bits);
  }
  return BooleanFunction::from_hex(body, n);
}

json run_complexity(const json& config) {
  ConfigReader r(config, "complexity");
  const std::string fn = r.required_text("fn");
  const std::string format = r.choice("format", "auto", {"auto", "bits", "hex"});
  const int n = static_cast<int>(r.integer("n", 0, 0, kMaxInputs));
  const std::string measure = r.choice("measure", "all", {"all", "dnf", "theta", "clause", "lz"});
  const std::string out = r.text("out", "");
  r.done();

  const BooleanFunction f = parse_function(fn, format, n);
  json report;
  report["function"] = f.to_string();
  report["function_hex"] = f.to_hex();
  report["n"] = f.n();
  if (measure == "all") {
    const ComplexityReport c = complexity_report(f);
    report["k_dnf"] = c.k_dnf;
    report["k_theta"] = c.k_theta;
    report["k_clause"] = c.k_clause;
    report["k_lz"] = c.k_lz;
    report["sandwich_holds"] = sandwich_holds(c);
  } else if (measure == "dnf") {
    report["k_dnf"] = k_dnf(f);
  } else if (measure == "theta") {
    report["k_theta"] = k_theta(f);
  } else if (measure == "clause") {
    report["k_clause"] = k_clause(f);
  } else {
    report["k_lz"] = k_lz(f);
  }
  if (measure == "all" || measure == "dnf") {
    report["min_dnf"] = to_text(min_dnf(f, Objective::Literals));
  }
  if (!out.empty()) {
    detail::write_json(out, report);
    detail::write_meta(out, "complexity", config, 0);
  }
  return report;
}

json interval_json(const Interval& b) {
  return {{"lower", b.lower.value},
          {"log_lower", detail::log_value(b.lower.log)},
          {"upper", b.upper.value},
          {"log_upper", detail::log_value(b.upper.log)}};
}

json run_bounds(const json& config) {
  ConfigReader r(config, "bounds");
  const std::string family = r.choice(
      "family", "",
      {"constant", "entropy", "1entropy", "parity", "ksparse", "qr", "pac_bayes",
       "optimal_width", "clause_cover", "zipf", "entropy_curve"});
  json result;
  result["family"] = family;
  auto read_n = [&] { return static_cast<int>(r.required_integer("n", 1, 30)); };
  auto read_alpha = [&] { return r.real("alpha_w", 1.0, 1e-9, 1e9); };

  if (family == "constant") {
    const int n = read_n();
    const double a = read_alpha();
    const std::string out = r.text("out", "");
    r.done();
    const ConstantBound b = bound_constant(n, a);
    result.update({{"n", n}, {"alpha_w", a},
                   {"lower", b.lower.value}, {"log_lower", detail::log_value(b.lower.log)},
                   {"truncated_lower", b.truncated_lower.value},
                   {"log_truncated_lower", detail::log_value(b.truncated_lower.log)}});
    if (!out.empty()) {
      detail::write_json(out, result);
      detail::write_meta(out, "bounds", config, 0);
    }
    return result;
  }
  if (family == "entropy") {
    const int n = read_n();
    const double a = read_alpha();
    const std::uint64_t t = r.count("t", 1, 1, (std::uint64_t{1} << std::min(n, 62)) - 1);
    const std::string out = r.text("out", "");
    r.done();
    const EntropyBound b = bound_entropy_upper(n, a, t);
    result.update({{"n", n}, {"alpha_w", a}, {"t", t},
                   {"upper_beta_pos", b.beta_pos.value},
                   {"log_upper_beta_pos", detail::log_value(b.beta_pos.log)},
                   {"upper_beta_neg", b.beta_neg.value},
                   {"log_upper_beta_neg", detail::log_value(b.beta_neg.log)},
                   {"upper", b.max.value}, {"log_upper", detail::log_value(b.max.log)}});
    if (!out.empty()) {
      detail::write_json(out, result);
      detail::write_meta(out, "bounds", config, 0);
    }
    return result;
  }
  if (family == "1entropy" || family == "parity" || family == "ksparse") {
    const int n = read_n();
    const double a = read_alpha();
    const int k = family == "1entropy" ? 0 : static_cast<int>(r.required_integer("k", 1, n));
    const std::string out = r.text("out", "");
    r.done();
    result.update({{"n", n}, {"alpha_w", a}});
    if (family == "1entropy") {
      result.update(interval_json(bound_1entropy(n, a)));
    } else if (family == "parity") {
      const ParityBound b = bound_parity(n, a, k);
      result.update(interval_json(Interval{b.lower, b.upper}));
      result["k"] = k;
      result["scaling_exponent"] = b.scaling_exponent;
    } else {
      result.update(interval_json(bound_ksparse(n, a, k)));
      result["k"] = k;
    }
    if (!out.empty()) {
      detail::write_json(out, result);
      detail::write_meta(out, "bounds", config, 0);
    }
    return result;
  }
  if (family == "qr") {
    const std::uint64_t q = r.count("q", 0, 0, UINT64_MAX);
    const std::uint64_t rr = r.count("r", 0, 0, UINT64_MAX);
    const std::uint64_t m = r.count("M", 1, 1, UINT64_MAX);
    const std::uint64_t big_n = r.count("N", 1, 1, UINT64_MAX);
    r.done();
    const QrBound b = bound_qr(q, rr, m, big_n);
    result.update({{"q", q}, {"r", rr}, {"M", m}, {"N", big_n},
                   {"exact_sum", b.exact_sum}, {"union_lower", b.union_lower}});
    return result;
  }
  if (family == "pac_bayes") {
    const double p = r.required_real("p_f", 0.0, 1.0);
    const std::uint64_t m = r.count("m", 2, 2, UINT64_MAX);
    const double delta = r.real("delta", 0.05, 0.0, 1.0);
    r.done();
    result.update({{"p_f", p}, {"m", m}, {"delta", delta}, {"bound", pac_bayes_bound(p, m, delta)}});
    return result;
  }
  if (family == "optimal_width") {
    const int n = read_n();
    r.done();
    result.update({{"n", n}, {"alpha_w", optimal_width(n)}});
    return result;
  }
  if (family == "clause_cover") {
    const int n = read_n();
    const double a = read_alpha();
    r.done();
    const ClauseCover c = p_clause_covers(n);
    result.update({{"n", n}, {"numerator", c.numerator}, {"denominator", c.denominator},
                   {"p", c.p}, {"alpha_w", a}, {"p_input_true", p_input_true(n, a)}});
    return result;
  }
  if (family == "zipf") {
    const int n = read_n();
    const std::uint64_t rank = r.count("rank", 1, 1, UINT64_MAX);
    r.done();
    result.update({{"n", n}, {"rank", rank}, {"p_zipf", zipf_reference(n, rank)}});
    return result;
  }
  // entropy_curve
  const int n = static_cast<int>(r.required_integer("n", 1, 5));
  const std::uint64_t trials = r.count("trials", 1000, 1, UINT64_MAX);
  const std::uint64_t seed = r.count("seed", 0, 0, UINT64_MAX);
  const std::string out = r.text("out", "");
  r.done();
  const std::uint64_t inputs = std::uint64_t{1} << n;
  json points = json::array();
  std::ostringstream csv;
  csv << "t,t_tilde,mean_accepted,sd_accepted,model_accepted\n";
  for (std::uint64_t t = 0; t <= inputs; ++t) {
    const EntropyCurvePoint p = entropy_independence_curve(n, t, trials, seed);
    points.push_back({{"t", t}, {"mean_accepted", p.mean_accepted},
                      {"sd_accepted", p.sd_accepted}, {"model_accepted", p.model_accepted}});
    csv << t << ',' << inputs - t << ',' << format_double(p.mean_accepted) << ','
        << format_double(p.sd_accepted) << ',' << format_double(p.model_accepted) << '\n';
  }
  result.update({{"n", n}, {"trials", trials}, {"points", points}});
  if (!out.empty()) {
    write_file_atomic(out, csv.str());
    detail::write_meta(out, "bounds", config, seed);
  }
  return result;
}

json run_tilt(const json& config) {
  ConfigReader r(config, "tilt");
  const detail::TargetConfig target = detail::read_target(r, true);
  const int alpha_w = static_cast<int>(r.integer("alpha_w", 1, 1, 8));
  const std::uint64_t m = r.required_integer("m", 1, (std::int64_t{1} << std::min(target.n, 30)) - 1);
  const double lambda = r.real("lambda", 0.1, 0.0, 1e6);
  const std::uint64_t seed = r.count("seed", 0, 0, UINT64_MAX);
  const std::string out = r.text("out", "");
  r.done();
  if (target.n > 4) throw BudgetExceeded("tilt enumeration supports n <= 4");

  const BooleanFunction f = target.make(derive_seed(seed, 0x54));
  const Dataset d = make_dataset(f, m, derive_seed(seed, 0x44));
  const TiltReport report = posterior_tilt_check(d, alpha_w, lambda);

  json result;
  result["target"] = f.to_string();
  result["train_idx"] = d.train_idx;
  result["lambda"] = lambda;
  result["interpolating"] = report.rows.size();
  result["spearman"] = std::isnan(report.spearman) ? json(nullptr) : json(report.spearman);
  if (!out.empty()) {
    std::ostringstream csv;
    csv << "function_hex,p_prior,p_tilted,log_ratio,k_dnf\n";
    for (const TiltRow& row : report.rows) {
      csv << row.f.to_hex() << ',' << format_double(row.p_prior) << ','
          << format_double(row.p_tilted) << ',' << format_double(row.log_ratio) << ','
          << row.k_dnf << '\n';
    }
    write_file_atomic(out, csv.str());
    detail::write_meta(out, "tilt", config, seed);
    result["out"] = out;
  }
  return result;
}

}  // namespace

const char* version() { return BOOLBIAS_VERSION; }

nlohmann::json run_command(std::string_view command, const nlohmann::json& config) {
  if (command == "prior") return run_prior(config);
  if (command == "complexity") return run_complexity(config);
  if (command == "bounds") return run_bounds(config);
  if (command == "tilt") return run_tilt(config);
  if (command == "train") return detail::run_train(config);
  if (command == "sweep") return detail::run_sweep(config);
  if (command == "aggregate") return detail::run_aggregate(config);
  throw InvalidArgument("unknown command '" + std::string(command) + "'");
}

}  // namespace boolbias
