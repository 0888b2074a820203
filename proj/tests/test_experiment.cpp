#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "boolbias/error.hpp"
#include "boolbias/experiment.hpp"

using namespace boolbias;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("boolbias_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Experiment, ValidatesBeforeRunning) {
  EXPECT_THROW(run_command("prior", json{{"n", 3}, {"bogus", 1}}), InvalidArgument);
  EXPECT_THROW(run_command("prior", json::object()), InvalidArgument);
  EXPECT_THROW(run_command("prior", json{{"n", "three"}}), InvalidArgument);
  EXPECT_THROW(run_command("nope", json::object()), InvalidArgument);
  EXPECT_THROW(run_command("train", json{{"family", "parity"}, {"n", 4}, {"m", 4}}), InvalidArgument);
  EXPECT_THROW(run_command("train", json{{"family", "parity"}, {"n", 4}, {"k", 5}, {"m", 4}}),
               InvalidArgument);
  EXPECT_THROW(run_command("train", json{{"algo", "oracle"}, {"family", "parity"}, {"n", 4},
                                         {"k", 1}, {"m", 4}, {"kappa", 3}}),
               InvalidArgument);
  EXPECT_THROW(run_command("complexity", json{{"fn", "0110"}, {"measure", "size"}}),
               InvalidArgument);
  EXPECT_THROW(run_command("complexity", json{{"fn", std::string(8192, '0')}}), BudgetExceeded);
}

TEST(Experiment, Complexity) {
  const json r = run_command("complexity", json{{"fn", "0110100110010110"}});
  EXPECT_EQ(r["k_dnf"], 32);
  EXPECT_EQ(r["k_theta"], 40);
  EXPECT_EQ(r["k_clause"], 16);
  const json hex = run_command("complexity", json{{"fn", "0x6996"}, {"measure", "dnf"}});
  EXPECT_EQ(hex["k_dnf"], 32);
  EXPECT_FALSE(hex.contains("k_lz"));
}

TEST(Experiment, Bounds) {
  const json p = run_command("bounds", json{{"family", "parity"}, {"n", 4}, {"k", 4}});
  EXPECT_NEAR(p["lower"].get<double>(), 2.1759e-11, 1e-14);
  EXPECT_TRUE(p.contains("log_lower"));
  EXPECT_TRUE(p.contains("log_upper"));
  const json pb = run_command("bounds", json{{"family", "pac_bayes"}, {"p_f", 1}, {"m", 100},
                                             {"delta", 0.1}});
  EXPECT_NEAR(pb["bound"].get<double>(), 0.0740, 5e-4);
  for (const char* fam : {"constant", "1entropy", "optimal_width", "clause_cover"}) {
    EXPECT_NO_THROW(run_command("bounds", json{{"family", fam}, {"n", 3}})) << fam;
  }
  EXPECT_NO_THROW(run_command("bounds", json{{"family", "entropy"}, {"n", 3}, {"t", 2}}));
  EXPECT_NO_THROW(run_command("bounds", json{{"family", "ksparse"}, {"n", 3}, {"k", 2}}));
  const json qr = run_command("bounds", json{{"family", "qr"}, {"q", 1}, {"r", 0}, {"M", 2}, {"N", 2}});
  EXPECT_DOUBLE_EQ(qr["exact_sum"].get<double>(), 0.75);
}

TEST_F(Scratch, PriorExactCsv) {
  const fs::path out = dir_ / "prior.csv";
  const json r = run_command("prior", json{{"n", 3}, {"exact", true}, {"out", out.string()}});
  EXPECT_EQ(r["total"], 1062882);
  const auto rows = lines(out);
  ASSERT_EQ(rows.size(), 257u);
  EXPECT_EQ(rows[0], "function_hex,count,p_hat,k_dnf,k_theta,k_clause,k_lz,rank,zipf_ref");
  std::uint64_t total = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    std::stringstream ss(rows[i]);
    std::string hex, count;
    std::getline(ss, hex, ',');
    std::getline(ss, count, ',');
    total += std::stoull(count);
  }
  EXPECT_EQ(total, 1062882u);
  const json meta = json::parse(slurp(out.string() + ".meta.json"));
  EXPECT_EQ(meta["command"], "prior");
  EXPECT_EQ(meta["config"]["n"], 3);
  EXPECT_TRUE(meta.contains("version"));
  EXPECT_TRUE(meta.contains("seed"));
}

TEST_F(Scratch, PriorSampledIsByteReproducible) {
  const json cfg{{"n", 4}, {"draws", 20000}, {"seed", 7}};
  json a = cfg, b = cfg;
  a["out"] = (dir_ / "a.csv").string();
  b["out"] = (dir_ / "b.csv").string();
  run_command("prior", a);
  run_command("prior", b);
  EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(Scratch, TrainWritesRunArtifacts) {
  const json cfg{{"algo", "mcmc"},     {"family", "parity"}, {"n", 4},       {"k", 2},
                 {"m", 10},            {"steps", 300},       {"seeds", 2},   {"seed", 5},
                 {"lambda", 0.01},     {"snapshot_steps", json::array({0, 299})},
                 {"out", dir_.string()}};
  const json r = run_command("train", cfg);
  EXPECT_EQ(r["failed"], 0);
  ASSERT_EQ(r["runs"].size(), 2u);
  const fs::path run = dir_ / "mcmc_parity_k2_m10_lambda0.01" / "seed_1";
  ASSERT_TRUE(fs::exists(run / "summary.json"));
  ASSERT_TRUE(fs::exists(run / "run.json"));
  const auto trace = lines(run / "trace.csv");
  ASSERT_EQ(trace.size(), 301u);
  EXPECT_EQ(trace[0], "step,loss,train_acc,test_acc,norm_w1,norm_w2");
  EXPECT_TRUE(fs::exists(run / "trace.csv.meta.json"));
  EXPECT_TRUE(fs::exists(run / "snapshots" / "step_299.csv"));
  EXPECT_TRUE(fs::exists(run / "snapshots" / "step_299.csv.json"));
  const json summary = json::parse(slurp(run / "summary.json"));
  EXPECT_EQ(summary["config"]["lambda"], 0.01);
  EXPECT_EQ(summary["config"]["run_seed"], 1);
  EXPECT_EQ(summary["steps_run"], 300);

  // Same config, fresh directory: identical bytes.
  json again = cfg;
  again["out"] = (dir_ / "again").string();
  run_command("train", again);
  EXPECT_EQ(slurp(run / "trace.csv"),
            slurp(dir_ / "again" / "mcmc_parity_k2_m10_lambda0.01" / "seed_1" / "trace.csv"));
  EXPECT_EQ(slurp(run / "summary.json"),
            slurp(dir_ / "again" / "mcmc_parity_k2_m10_lambda0.01" / "seed_1" / "summary.json"));
}

TEST(Experiment, OracleTrainWithoutOutput) {
  const json r = run_command("train", json{{"algo", "oracle"}, {"family", "parity"}, {"n", 4},
                                           {"k", 4}, {"m", 8}});
  ASSERT_EQ(r["runs"].size(), 1u);
  EXPECT_EQ(r["runs"][0]["train_acc"], 1.0);
  EXPECT_TRUE(r["runs"][0].contains("dnf"));
}

TEST_F(Scratch, SweepGridRestartAndAggregate) {
  json cfg{{"algo", "mcmc"}, {"family", "parity"}, {"n", 4}, {"k", "1..3"}, {"m", "6,10"},
           {"lambda", json::array({0, 0.01})}, {"seeds", 2}, {"steps", 200},
           {"out", dir_.string()}, {"threads", 2}};
  const json r = run_command("sweep", cfg);
  EXPECT_EQ(r["runs"], 3 * 2 * 2 * 2);
  EXPECT_EQ(r["cells"], 12);
  EXPECT_EQ(r["failed"], 0);
  EXPECT_EQ(r["skipped"], 0);
  std::size_t run_dirs = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir_)) {
    if (e.path().filename() == "summary.json") ++run_dirs;
  }
  EXPECT_EQ(run_dirs, 24u);
  EXPECT_TRUE(fs::exists(dir_ / "manifest.json"));
  const auto rows = lines(dir_ / "summary.csv");
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[0],
            "algo,family,param,m,lambda,p,runs,n_incomplete,mean_train_acc,sd_train_acc,"
            "mean_test_acc,sd_test_acc,mean_norm,sd_norm");
  const std::string first_summary = slurp(dir_ / "summary.csv");

  const json again = run_command("sweep", cfg);
  EXPECT_EQ(again["skipped"], 24);
  EXPECT_EQ(slurp(dir_ / "summary.csv"), first_summary);

  // An interrupted run is redone; others are kept.
  const fs::path victim = dir_ / "mcmc_parity_k2_m6_lambda0" / "seed_1";
  fs::remove(victim / "summary.json");
  const json agg = run_command("aggregate", json{{"run_dir", dir_.string()}});
  EXPECT_EQ(agg["incomplete"], 1);
  bool flagged = false;
  for (const auto& line : lines(dir_ / "summary.csv")) {
    if (line.rfind("mcmc,parity,k2,6,0,", 0) == 0) {
      flagged = line.find(",1,1,") != std::string::npos;
    }
  }
  EXPECT_TRUE(flagged);
  const json resumed = run_command("sweep", cfg);
  EXPECT_EQ(resumed["skipped"], 23);
  EXPECT_EQ(slurp(dir_ / "summary.csv"), first_summary);

  json changed = cfg;
  changed["steps"] = 300;
  EXPECT_THROW(run_command("sweep", changed), InvalidArgument);
}

TEST_F(Scratch, AggregateOfIdenticalRunsHasZeroSpread) {
  for (int s = 0; s < 10; ++s) {
    const fs::path run = dir_ / "cell" / ("seed_" + std::to_string(s));
    fs::create_directories(run);
    const json id{{"algo", "mcmc"}, {"family", "parity"}, {"param", "k1"},
                  {"m", 64},        {"lambda", 0.01},     {"p", nullptr}};
    json run_json = id;
    run_json["run_seed"] = s;
    std::ofstream(run / "run.json") << run_json.dump();
    json summary = id;
    summary["train_acc"] = 1.0;
    summary["test_acc"] = 0.75;
    summary["norm"] = 42;
    std::ofstream(run / "summary.json") << summary.dump();
  }
  const json r = run_command("aggregate", json{{"run_dir", dir_.string()}});
  EXPECT_EQ(r["rows"], 1);
  const auto rows = lines(dir_ / "summary.csv");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1], "mcmc,parity,k1,64,0.01,,10,0,1,0,0.75,0,42,0");
  EXPECT_THROW(run_command("aggregate", json{{"run_dir", (dir_ / "missing").string()}}), IoError);
}

TEST_F(Scratch, TiltCsv) {
  const json r = run_command("tilt", json{{"family", "parity"}, {"n", 3}, {"k", 2}, {"m", 4},
                                          {"out", (dir_ / "tilt.csv").string()}});
  EXPECT_GT(r["spearman"].get<double>(), 0.0);
  EXPECT_GT(lines(dir_ / "tilt.csv").size(), 1u);
}

TEST_F(Scratch, UnwritableOutputIsIoError) {
  const fs::path blocker = dir_ / "file";
  std::ofstream(blocker) << "x";
  EXPECT_THROW(run_command("prior", json{{"n", 2}, {"exact", true},
                                         {"out", (blocker / "prior.csv").string()}}),
               IoError);
}
