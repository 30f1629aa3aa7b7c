#include <doctest.h>

#include <bif/dataset_io.hpp>
#include <bif/runner.hpp>
#include <bif/version.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

using namespace bif;

namespace {

RunConfig tiny_config() {
    RunConfig cfg;
    cfg.repeats = 1;
    cfg.budget = 2;
    cfg.init_size = 4;
    cfg.train_steps = 2;
    return cfg;
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::string first_line(const std::string& text) {
    return text.substr(0, text.find('\n'));
}

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/bif_runner_" + name) {}
    ~TempFile() {
        std::remove(path.c_str());
        std::remove(snapshot_path_for(path).c_str());
    }

    std::string read() const {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

}  // namespace

TEST_CASE("single repeat and budget yield one row per query") {
    RunConfig cfg = tiny_config();
    cfg.budget = 1;
    auto trajs = run_experiment(cfg);
    REQUIRE(trajs.size() == 1);
    CHECK(trajs[0].queries.size() == 1);
    CHECK(trajs[0].seed == 0);
    CHECK(trajs[0].init_states.size() == 4);

    const std::string csv = results_csv_string(trajs);
    CHECK(count_lines(csv) == 2);  // header + one row
}

TEST_CASE("csv header is stable") {
    auto trajs = run_experiment(tiny_config());
    CHECK(first_line(results_csv_string(trajs)) ==
          "setting,strategy,repeat,seed,query,ro,parent_r2,child_r2,cumulative_auc,warn_flags");
}

TEST_CASE("rerunning an identical config reproduces the csv byte for byte") {
    RunConfig cfg = tiny_config();
    cfg.repeats = 2;
    cfg.budget = 3;
    const std::string a = results_csv_string(run_experiment(cfg));
    const std::string b = results_csv_string(run_experiment(cfg));
    CHECK(a == b);
    CHECK(count_lines(a) == 1 + 2 * 3);
}

TEST_CASE("seeds advance with the repeat index") {
    RunConfig cfg = tiny_config();
    cfg.repeats = 3;
    cfg.base_seed = 100;
    auto trajs = run_experiment(cfg);
    REQUIRE(trajs.size() == 3);
    CHECK(trajs[0].seed == 100);
    CHECK(trajs[1].seed == 101);
    CHECK(trajs[2].seed == 102);
    CHECK(trajs[0].init_states != trajs[1].init_states);
}

TEST_CASE("parallel execution returns the same rows as serial") {
    RunConfig cfg = tiny_config();
    cfg.repeats = 4;
    cfg.budget = 2;
    cfg.jobs = 4;
    const std::string parallel = results_csv_string(run_experiment(cfg));
    cfg.jobs = 1;
    const std::string serial = results_csv_string(run_experiment(cfg));
    CHECK(parallel == serial);
}

TEST_CASE("vanilla rows leave the child column empty") {
    RunConfig cfg = tiny_config();
    cfg.strategy = StrategyKind::kVanilla;
    cfg.budget = 1;
    const std::string csv = results_csv_string(run_experiment(cfg));
    std::istringstream iss(csv);
    std::string header, row;
    std::getline(iss, header);
    std::getline(iss, row);
    // setting,strategy,repeat,seed,query,ro,parent_r2,child_r2,...
    int commas = 0;
    std::string child_field;
    for (char c : row) {
        if (c == ',') {
            ++commas;
            continue;
        }
        if (commas == 7) child_field += c;
    }
    CHECK(child_field.empty());
    CHECK(row.find("vanilla") != std::string::npos);
}

TEST_CASE("cumulative auc grows monotonically within a run") {
    RunConfig cfg = tiny_config();
    cfg.budget = 5;
    auto trajs = run_experiment(cfg);
    const auto& qs = trajs[0].queries;
    for (std::size_t i = 1; i < qs.size(); ++i) CHECK(qs[i].cumulative_auc >= qs[i - 1].cumulative_auc);
    // The last cumulative value equals the global sum.
    CHECK(qs.back().cumulative_auc == doctest::Approx(global_auc(trajs[0])).epsilon(1e-12));
}

TEST_CASE("sweep emits one setting per value in the given order") {
    RunConfig cfg = tiny_config();
    cfg.budget = 1;
    auto trajs = run_sweep(cfg, "kappa", {2.0, 9.5});
    REQUIRE(trajs.size() == 2);
    CHECK(trajs[0].setting == "kappa=2");
    CHECK(trajs[1].setting == "kappa=9.5");
    CHECK_THROWS_AS(run_sweep(cfg, "bogus", {1.0}), std::invalid_argument);
    // Integer parameters reject fractional values.
    CHECK_THROWS_AS(run_sweep(cfg, "init_size", {2.5}), std::invalid_argument);
}

TEST_CASE("noise ablation pairs initialization draws across settings") {
    RunConfig cfg = tiny_config();
    cfg.budget = 1;
    cfg.repeats = 2;
    auto trajs = run_ablation(cfg, {"noise", {0.1, 0.5}});
    REQUIRE(trajs.size() == 4);
    CHECK(trajs[0].setting == "beta=0.1");
    CHECK(trajs[2].setting == "beta=0.5");
    // Same repeat under both settings draws identical initialization states.
    CHECK(trajs[0].init_states == trajs[2].init_states);
    CHECK(trajs[1].init_states == trajs[3].init_states);
}

TEST_CASE("nonlinearity ablation names settings by alpha") {
    RunConfig cfg = tiny_config();
    cfg.budget = 1;
    cfg.env.variant = "multiplicative";
    auto trajs = run_ablation(cfg, {"nonlinearity", {0.0, 4.0}});
    REQUIRE(trajs.size() == 2);
    CHECK(trajs[0].setting == "alpha=0");
    CHECK(trajs[1].setting == "alpha=4");
    CHECK_THROWS_AS(run_ablation(cfg, {"bogus", {1.0}}), std::invalid_argument);
}

TEST_CASE("modularity with an all-fresh plan matches the plain run") {
    RunConfig cfg = tiny_config();
    cfg.env.name = "modularity";
    cfg.env.task = 3;
    cfg.budget = 2;
    auto plan = parse_transfer_plan("fresh,fresh", 10);
    CHECK(plan.all_fresh());
    auto mod = run_modularity(cfg, plan);

    RunConfig plain = cfg;
    auto base = run_experiment(plain);
    REQUIRE(mod.size() == base.size());
    for (std::size_t i = 0; i < mod.size(); ++i) {
        REQUIRE(mod[i].queries.size() == base[i].queries.size());
        CHECK(mod[i].init_states == base[i].init_states);
        for (std::size_t q = 0; q < mod[i].queries.size(); ++q) {
            CHECK(mod[i].queries[q].ro == base[i].queries[q].ro);
            CHECK(mod[i].queries[q].parent_r2 == base[i].queries[q].parent_r2);
        }
    }
}

TEST_CASE("transfer plans parse and label") {
    auto plan = parse_transfer_plan("good,bad", 25);
    REQUIRE(plan.slots.size() == 2);
    CHECK(plan.slots[0] == TransferPlan::Slot::kGood);
    CHECK(plan.slots[1] == TransferPlan::Slot::kBad);
    CHECK(plan.pretrain_budget == 25);
    CHECK(plan.label() == "good-bad");
    CHECK_FALSE(plan.all_fresh());
    CHECK_THROWS_AS(parse_transfer_plan("good,excellent", 25), std::invalid_argument);
    CHECK_THROWS_AS(parse_transfer_plan("", 25), std::invalid_argument);
}

TEST_CASE("modularity validates the plan length against the task grid") {
    RunConfig cfg = tiny_config();
    cfg.env.name = "modularity";
    auto plan = parse_transfer_plan("good,good,good", 10);
    CHECK_THROWS_AS(run_modularity(cfg, plan), std::invalid_argument);

    cfg.strategy = StrategyKind::kVanilla;
    auto ok_plan = parse_transfer_plan("good,good", 10);
    CHECK_THROWS_AS(run_modularity(cfg, ok_plan), std::invalid_argument);
}

TEST_CASE("config validation rejects out-of-range settings") {
    RunConfig cfg = tiny_config();
    cfg.kappa = -1.0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.budget = 0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.init_size = 101;  // exceeds the 10x10 grid
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.noise_beta = -0.5;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = tiny_config();
    cfg.env.name = "unknown-env";
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    CHECK_NOTHROW(validate_config(tiny_config()));
}

TEST_CASE("writing results also writes a json snapshot") {
    TempFile f("out.csv");
    RunConfig cfg = tiny_config();
    cfg.budget = 1;
    cfg.out_path = f.path;
    run_experiment(cfg);
    const std::string csv = f.read();
    CHECK(first_line(csv) ==
          "setting,strategy,repeat,seed,query,ro,parent_r2,child_r2,cumulative_auc,warn_flags");

    std::ifstream snap(snapshot_path_for(f.path));
    REQUIRE(snap.good());
    std::stringstream ss;
    ss << snap.rdbuf();
    const std::string json = ss.str();
    CHECK(json.find("\"budget\": 1") != std::string::npos);
    CHECK(json.find(kVersion) != std::string::npos);
}

TEST_CASE("snapshot path swaps the extension") {
    CHECK(snapshot_path_for("results.csv") == "results.json");
    CHECK(snapshot_path_for("/a/b/c.csv") == "/a/b/c.json");
    CHECK(snapshot_path_for("noext") == "noext.json");
}

TEST_CASE("dataset-backed environments run end to end") {
    TempFile data("env.csv");
    {
        auto env = synth2d(0.0);
        generate_dataset_file(*env, data.path);
    }
    RunConfig cfg = tiny_config();
    cfg.env.name = "dataset";
    cfg.env.data_path = data.path;
    cfg.budget = 2;
    auto trajs = run_experiment(cfg);
    REQUIRE(trajs.size() == 1);
    CHECK(trajs[0].error.empty());
    CHECK(trajs[0].queries.size() == 2);
}

TEST_CASE("metric float formatting is fixed width") {
    RunConfig cfg = tiny_config();
    cfg.budget = 1;
    auto trajs = run_experiment(cfg);
    const std::string csv = results_csv_string(trajs);
    std::istringstream iss(csv);
    std::string header, row;
    std::getline(iss, header);
    std::getline(iss, row);
    // ro field: 6 digits after the decimal point.
    std::vector<std::string> fields;
    std::string cur;
    for (char c : row) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    REQUIRE(fields.size() == 10);
    const auto dot = fields[5].find('.');
    REQUIRE(dot != std::string::npos);
    CHECK(fields[5].size() - dot - 1 == 6);
}
