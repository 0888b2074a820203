// Command-line front end. Every flag maps onto a key of the command's JSON
// config; the config itself is executed by the shared library.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "boolbias/boolbias.h"

namespace {

using nlohmann::json;

enum class Kind { Text, Number, Bool, Flag };

struct OptionSpec {
  const char* flag;
  const char* key;
  Kind kind;
  const char* commands;  // space-separated
  const char* help;
};

const OptionSpec kOptions[] = {
    {"--n", "n", Kind::Number, "prior complexity bounds train sweep tilt", "number of inputs"},
    {"--alpha-w", "alpha_w", Kind::Number, "prior bounds train sweep tilt", "width multiplier"},
    {"--seed", "seed", Kind::Number, "prior bounds train sweep tilt", "base seed"},
    {"--threads", "threads", Kind::Number, "prior train sweep", "worker threads"},
    {"--out", "out", Kind::Text, "prior complexity bounds train sweep tilt aggregate",
     "output file or directory"},
    {"--draws", "draws", Kind::Number, "prior", "Monte Carlo draws"},
    {"--first-draw", "first_draw", Kind::Number, "prior", "first RNG stream"},
    {"--max-distinct", "max_distinct", Kind::Number, "prior", "distinct-function budget"},
    {"--exact", "exact", Kind::Flag, "prior", "enumerate every parameter state"},
    {"--complexity", "complexity", Kind::Text, "prior", "auto, true or false"},
    {"--top", "top", Kind::Number, "prior", "rows in the printed summary"},
    {"--fn", "fn", Kind::Text, "complexity", "bit string or 0x-prefixed hex"},
    {"--format", "format", Kind::Text, "complexity", "auto, bits or hex"},
    {"--measure", "measure", Kind::Text, "complexity", "all, dnf, theta, clause or lz"},
    {"--family", "family", Kind::Text, "bounds train sweep tilt", "target or bound family"},
    {"--k", "k", Kind::Number, "bounds train sweep tilt", "parity / sparsity order (list for sweep)"},
    {"--t", "t", Kind::Number, "bounds train sweep tilt", "number of ones (list for sweep)"},
    {"--value", "value", Kind::Bool, "train sweep tilt", "constant target value"},
    {"--pattern", "pattern", Kind::Text, "train sweep tilt", "tiled pattern"},
    {"--subset", "subset", Kind::Number, "train sweep tilt", "parity variables, e.g. 1,3"},
    {"--random-subset", "random_subset", Kind::Flag, "train sweep tilt", "random parity variables"},
    {"--q", "q", Kind::Number, "bounds", "qr: q"},
    {"--r", "r", Kind::Number, "bounds", "qr: r"},
    {"--M", "M", Kind::Number, "bounds", "qr: draws"},
    {"--N", "N", Kind::Number, "bounds", "qr: items"},
    {"--p-f", "p_f", Kind::Number, "bounds", "pac_bayes: prior probability"},
    {"--delta", "delta", Kind::Number, "bounds", "pac_bayes: confidence"},
    {"--rank", "rank", Kind::Number, "bounds", "zipf: rank"},
    {"--trials", "trials", Kind::Number, "bounds", "entropy_curve: trials"},
    {"--m", "m", Kind::Number, "bounds train sweep tilt", "training set size (list for sweep)"},
    {"--algo", "algo", Kind::Text, "train sweep", "mcmc, greedy or oracle"},
    {"--seeds", "seeds", Kind::Number, "train sweep", "independent runs per cell"},
    {"--kappa", "kappa", Kind::Number, "train sweep", "inverse temperature"},
    {"--lambda", "lambda", Kind::Number, "train sweep tilt", "weight decay (list for sweep)"},
    {"--steps", "steps", Kind::Number, "train sweep", "step budget"},
    {"--batch", "batch", Kind::Number, "train sweep", "mini-batch size, 0 for full batch"},
    {"--include-beta", "include_beta", Kind::Flag, "train sweep", "let moves flip beta"},
    {"--initial-beta", "initial_beta", Kind::Number, "train sweep", "-1, 1, or 0 for random"},
    {"--early-stop", "early_stop", Kind::Number, "train sweep", "stop after this many steps at zero loss"},
    {"--trace-every", "trace_every", Kind::Number, "train sweep", "trace stride"},
    {"--snapshot-test-acc", "snapshot_test_acc", Kind::Number, "train sweep",
     "test accuracies that trigger snapshots"},
    {"--snapshot-steps", "snapshot_steps", Kind::Number, "train sweep", "steps that trigger snapshots"},
    {"--p", "p", Kind::Number, "train sweep", "greedy: min-norm probability"},
    {"--keep-current", "keep_current", Kind::Flag, "train sweep", "greedy: allow staying put"},
    {"--run-dir", "run_dir", Kind::Text, "aggregate", "run directory to summarise"},
};

const char* const kCommands[] = {"prior", "complexity", "bounds", "train",
                                 "sweep", "tilt",       "aggregate"};

bool applies(const OptionSpec& o, const std::string& command) {
  std::istringstream in(o.commands);
  std::string c;
  while (in >> c) {
    if (c == command) return true;
  }
  return false;
}

// Numbers stay numbers; anything else ("1..7", "16,32", "1e8") is passed
// through as text for the library to interpret.
json to_value(const std::string& raw, Kind kind) {
  if (kind == Kind::Text) return raw;
  if (kind == Kind::Bool) {
    if (raw == "1" || raw == "true") return true;
    if (raw == "0" || raw == "false") return false;
    return raw;
  }
  const json parsed = json::parse(raw, nullptr, false);
  if (!parsed.is_discarded() && parsed.is_number()) return parsed;
  return raw;
}

int exit_code(bb_status s) {
  switch (s) {
    case BB_OK: return 0;
    case BB_INVALID_ARGUMENT: return 2;
    case BB_BUDGET_EXCEEDED: return 3;
    case BB_IO_ERROR: return 4;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boolean-function priors, complexity and training experiments"};
  app.set_version_flag("--version", std::string(bb_version()));
  app.require_subcommand(0, 1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; its keys override flags");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const char* command : kCommands) {
    CLI::App* sub = app.add_subcommand(command);
    subs[command] = sub;
    sub->add_option("--config", config_path, "JSON config; its keys override flags");
    for (const OptionSpec& o : kOptions) {
      if (!applies(o, command)) continue;
      if (o.kind == Kind::Flag) {
        sub->add_flag(o.flag, flags[command][o.key], o.help);
      } else {
        sub->add_option(o.flag, values[command][o.key], o.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  json file_config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return 4;
    }
    file_config = json::parse(in, nullptr, false);
    if (file_config.is_discarded() || !file_config.is_object()) {
      std::cerr << "error: " << config_path << " is not a JSON object\n";
      return 2;
    }
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }
  if (file_config.contains("command")) {
    if (!file_config["command"].is_string()) {
      std::cerr << "error: config key 'command' must be a string\n";
      return 2;
    }
    const std::string from_file = file_config["command"].get<std::string>();
    if (!command.empty() && command != from_file) {
      std::cerr << "error: config is for '" << from_file << "', not '" << command << "'\n";
      return 2;
    }
    command = from_file;
  }
  if (command.empty()) {
    std::cerr << app.help();
    return 2;
  }

  json config = json::object();
  if (subs.count(command) && subs[command]->parsed()) {
    for (const OptionSpec& o : kOptions) {
      if (!applies(o, command)) continue;
      if (o.kind == Kind::Flag) {
        if (subs[command]->count(o.flag) > 0) config[o.key] = flags[command][o.key];
      } else if (subs[command]->count(o.flag) > 0) {
        config[o.key] = to_value(values[command][o.key], o.kind);
      }
    }
  }
  for (const auto& [key, value] : file_config.items()) config[key] = value;
  config.erase("command");

  char* result = nullptr;
  const bb_status status = bb_run_command(command.c_str(), config.dump().c_str(), &result);
  if (result != nullptr) {
    std::cout << result << "\n";
    bb_string_free(result);
  }
  if (status != BB_OK) std::cerr << "error: " << bb_last_error() << "\n";
  return exit_code(status);
}
