#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "plcomp/config.hpp"
#include "plcomp/csv.hpp"
#include "plcomp/runner.hpp"

using namespace plcomp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("plcomp_unit_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig cfg_from(const std::string& json, const fs::path& out) {
  auto c = parse_config(json);
  c.output = out.string();
  return c;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = read_text_file(e.path());
  return out;
}

void check_manifest(const fs::path& root) {
  const auto m = nlohmann::json::parse(read_text_file(root / "manifest.json"));
  std::size_t listed = 0;
  for (const auto& f : m["files"]) {
    const auto content = read_text_file(root / f["path"].get<std::string>());
    CHECK(sha256_hex(content) == f["sha256"].get<std::string>());
    ++listed;
  }
  // Every file except the manifest itself is listed.
  CHECK(listed + 1 == read_tree(root).size());
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults and kind hint") {
    const auto c = parse_config("{}", ExperimentKind::Probes);
    CHECK(c.kind == ExperimentKind::Probes);
    CHECK(c.task.d == 50);
    CHECK(c.distribution.d == 50);
    CHECK_THROWS_AS(parse_config(R"({"experiment":"landscape"})", ExperimentKind::Probes), ConfigError);
  }

  TEST_CASE("every violation is reported") {
    try {
      parse_config(R"({"task":{"d":0,"k":2,"lr":0.1},"distribution":{"kind":"zipf","alpha":-1},"bogus":1})");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      const auto& p = e.problems();
      auto has = [&](const std::string& needle) {
        for (const auto& s : p)
          if (s.find(needle) != std::string::npos) return true;
        return false;
      };
      CHECK(has("task.lr: unknown key"));
      CHECK(has("config.bogus: unknown key"));
      CHECK(has("task.d"));
      CHECK(has("distribution.alpha"));
    }
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"task":{"k":"four"}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"distribution":{"kind":"binned_zipf","m":100}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"distribution":{"kind":"zipf","d":7}})"), ConfigError);
  }

  TEST_CASE("orderings and optional fields round-trip through the canonical form") {
    const auto c = parse_config(
        R"({"task":{"d":8,"eta":0.01},"distribution":{"kind":"binned_zipf","m":2,"alpha":1.5,"ordering":{"random":9}},
            "seeds":{"root":3,"init":11}})");
    CHECK(c.distribution.ordering.kind == Ordering::Kind::Random);
    CHECK(c.distribution.ordering.seed == 9);
    const auto again = parse_config(canonical_json(c));
    CHECK(canonical_json(again) == canonical_json(c));
    CHECK(config_hash(again) == config_hash(c));
  }

  TEST_CASE("role seeds") {
    auto c = parse_config(R"({"seeds":{"root":5,"init":99}})");
    CHECK(role_seed(c, "init", 0) == derive_seed(99, "init", 0));
    CHECK(role_seed(c, "data", 2) == derive_seed(5, "data", 2));
    CHECK(role_seed(c, "wstar", 0) != role_seed(c, "wstar", 1));
  }

  TEST_CASE("warnings") {
    const auto odd = parse_config(R"({"task":{"k":3}})");
    CHECK(config_warnings(odd).size() == 1);
    const auto fast = parse_config(R"({"task":{"eta":10.0}})");
    CHECK(config_warnings(fast).size() == 1);
    CHECK(config_warnings(parse_config("{}")).empty());
  }
}

TEST_SUITE("runner") {
  TEST_CASE("minimal run: ten rows, byte-identical rerun, manifest hashes") {
    const auto a = scratch("min_a"), b = scratch("min_b");
    const std::string json = R"({"experiment":"minimal-run","task":{"d":2,"k":2,"steps":10}})";
    const auto ra = run_experiment(cfg_from(json, a));
    run_experiment(cfg_from(json, b));
    CHECK(ra.exit_status == 0);
    const auto rows = lines_of(read_text_file(a / "trajectory.csv"));
    REQUIRE(rows.size() == 12);
    CHECK(rows[0].rfind("# schema=plcomp.trajectory.v1 config_hash=", 0) == 0);
    CHECK(rows[1].rfind("step,loss,A,B,grad_norm,recovery_error,pl_ratio", 0) == 0);
    CHECK(read_tree(a) == read_tree(b));
    check_manifest(a);
  }

  TEST_CASE("parallelism does not change artifacts") {
    const auto a = scratch("par_a"), b = scratch("par_b");
    const std::string json = R"({"experiment":"sweep-alpha","task":{"d":10,"steps":200,"log_every":50},
                                 "sweep":{"alphas":[1.0,1.5],"num_seeds":2}})";
    auto ca = cfg_from(json, a);
    auto cb = cfg_from(json, b);
    cb.parallelism = 3;
    run_experiment(ca);
    run_experiment(cb);
    CHECK(read_tree(a) == read_tree(b));
  }

  TEST_CASE("sweep: 15 trajectories and one summary") {
    const auto out = scratch("sweep");
    const auto res = run_experiment(
        cfg_from(R"({"experiment":"sweep-alpha","task":{"d":20,"steps":500,"log_every":100}})", out));
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(out / "trajectories")) n += e.path().extension() == ".csv";
    CHECK(n == 15);
    const auto rows = lines_of(read_text_file(out / "summary.csv"));
    CHECK(rows.size() == 17);
    CHECK(rows[1] == "alpha,seed,steps_to_threshold,final_loss,final_recovery_error");
    CHECK(res.trials.size() == 15);
    check_manifest(out);
  }

  TEST_CASE("an alpha grid of size one reduces to the minimal run") {
    const auto s = scratch("one_sweep"), m = scratch("one_min");
    run_experiment(cfg_from(R"({"experiment":"sweep-alpha","task":{"d":6,"steps":50},
        "distribution":{"kind":"zipf","alpha":1.25},"sweep":{"alphas":[1.25],"num_seeds":1,"dynamics":"sgd"}})", s));
    run_experiment(cfg_from(R"({"experiment":"minimal-run","task":{"d":6,"steps":50},
        "distribution":{"kind":"zipf","alpha":1.25}})", m));
    auto a = lines_of(read_text_file(s / "trajectories" / "alpha_1p25_seed_0.csv"));
    auto b = lines_of(read_text_file(m / "trajectory.csv"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }

  TEST_CASE("population run writes a stage report") {
    const auto out = scratch("pop");
    run_experiment(cfg_from(R"({"experiment":"population-run","task":{"d":10,"steps":2000,"log_every":10}})", out));
    const auto st = read_text_file(out / "stages.txt");
    CHECK(st.find("stage1_exit_step=") != std::string::npos);
    CHECK(st.find("bin5_halving_step=") != std::string::npos);
  }

  TEST_CASE("auto steps follow the PL-rate horizon at the init") {
    const auto out = scratch("auto_steps");
    const auto cfg = cfg_from(R"({"experiment":"population-run",
        "task":{"d":8,"k":2,"r":0.5,"steps":"auto","stop_loss":1e-3,"log_every":0}})", out);
    CHECK(cfg.task.auto_steps);
    run_experiment(cfg);
    const auto rows = lines_of(read_text_file(out / "trajectory.csv"));
    std::size_t first = 0;
    while (rows.at(first).rfind("step,", 0) != 0) ++first;
    auto field = [](const std::string& row, std::size_t i) {
      std::istringstream in(row);
      std::string f;
      for (std::size_t j = 0; j <= i; ++j) std::getline(in, f, ',');
      return f;
    };
    const double loss0 = std::stod(field(rows[first + 1], 1)), a0 = std::stod(field(rows[first + 1], 2));
    // Zipf 1.0 over 8 skills: p_min = 8^-1 / H_8, ||p|| from the same weights.
    double h = 0.0, sq = 0.0;
    for (int j = 1; j <= 8; ++j) h += 1.0 / j;
    for (int j = 1; j <= 8; ++j) sq += 1.0 / (j * j * h * h);
    const double eta = 1.0 / (20.0 * 4.0 * std::sqrt(sq));
    const double expected = std::ceil(6.0 / (eta * 2.0 * (1.0 / (8.0 * h)) * a0 * a0) * std::log(loss0 / 1e-3));
    const double last = std::stod(field(rows.back(), 0));
    // The run stops early once the loss target is met.
    CHECK(last <= expected);
    CHECK(last >= 1.0);
    CHECK_THROWS_AS(parse_config(R"({"task":{"steps":"lots"}})"), ConfigError);
  }

  TEST_CASE("diverged trials are counted and the run continues") {
    const auto out = scratch("diverge");
    const auto res = run_experiment(cfg_from(
        R"({"experiment":"sweep-alpha","task":{"d":4,"k":6,"r":2.0,"eta":50.0,"steps":200},
            "sweep":{"alphas":[1.0,1.5],"num_seeds":1}})", out));
    CHECK(res.exit_status == 2);
    CHECK(res.diverged == 2);
    CHECK(fs::exists(out / "summary.csv"));
    check_manifest(out);
  }

  TEST_CASE("landscape outputs") {
    const auto out = scratch("land");
    run_experiment(cfg_from(R"({"experiment":"landscape","task":{"d":10,"steps":500},
                                "landscape":{"resolution":11}})", out));
    for (const char* f : {"zipf_grid.csv", "zipf_slice.txt", "zipf_projection.csv", "uniform_grid.csv",
                          "slope_comparison.txt"})
      CHECK(fs::exists(out / f));
    check_manifest(out);
  }

  TEST_CASE("probes outputs") {
    const auto out = scratch("probes");
    run_experiment(cfg_from(R"({"experiment":"probes","task":{"d":10,"steps":300},
                                "probes":{"stationary_probes":50,"csq_d":64,"csq_vectors":10,"csq_epsilon":0.9}})",
                            out));
    for (const char* f : {"probe_pl.txt", "probe_stationary.txt", "probe_init.txt", "probe_noise.txt", "probe_csq.txt"})
      CHECK(fs::exists(out / f));
  }

  TEST_CASE("gen-data for every task") {
    for (const char* task : {"arithmetic", "state_tracking", "multihop_qa", "gsm"}) {
      const auto out = scratch(std::string("gen_") + task);
      run_experiment(cfg_from(std::string(R"({"experiment":"gen-data","generate":{"task":")") + task +
                                  R"(","n":50},"distribution":{"kind":"uniform"}})",
                              out));
      const auto rows = lines_of(read_text_file(out / "data.jsonl"));
      CHECK(rows.size() == 50);
      for (const auto& r : rows) CHECK(nlohmann::json::parse(r).contains("skills"));
      const auto m = nlohmann::json::parse(read_text_file(out / "data_manifest.json"));
      CHECK(m["records"] == 50);
      check_manifest(out);
    }
  }
}
