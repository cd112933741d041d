#include <doctest.h>

#include "xlate/core/config.hpp"
#include "xlate/core/discover.hpp"
#include "xlate/core/ledger.hpp"
#include "xlate/core/types.hpp"
#include "xlate/util/fs.hpp"

#include "testenv.hpp"

#include <algorithm>
#include <filesystem>
#include <random>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using namespace xlate;
using nlohmann::json;

TEST_CASE("fragment identity renders file:qualified_name") {
    core::Fragment f{"checkdigit.go", core::FragmentKind::Function, "isNumber", 10, 14};
    CHECK(core::fragment_identity(f) == "checkdigit.go:isNumber");
}

TEST_CASE("fragment identity round-trips through the parser") {
    core::Fragment f{"dir/b.go", core::FragmentKind::Method, "T.M", 1, 2};
    auto id = core::fragment_identity(f);
    CHECK(id == "dir/b.go:T.M");
    auto parsed = core::parse_fragment_identity(id);
    REQUIRE(parsed);
    CHECK(parsed->first == "dir/b.go");
    CHECK(parsed->second == "T.M");
}

TEST_CASE("equal fragments render equal identities") {
    core::Fragment a{"a.py", core::FragmentKind::Class, "A", 1, 5};
    core::Fragment b{"a.py", core::FragmentKind::Class, "A", 1, 5};
    CHECK(core::fragment_identity(a) == core::fragment_identity(b));
}

TEST_CASE("fragment identity is injective over distinct project fragments") {
    // Distinct (file, qualified_name) pairs must never collide.
    std::vector<core::Fragment> frags = {
        {"a.go", core::FragmentKind::Function, "f", 1, 1},
        {"a.go", core::FragmentKind::Function, "g", 2, 2},
        {"b.go", core::FragmentKind::Function, "f", 1, 1},
        {"dir/a.go", core::FragmentKind::Method, "T.f", 1, 1},
    };
    std::vector<std::string> ids;
    for (const auto& f : frags) ids.push_back(core::fragment_identity(f));
    std::sort(ids.begin(), ids.end());
    CHECK(std::adjacent_find(ids.begin(), ids.end()) == ids.end());
}

TEST_CASE("ledger accumulates totals and per-agent entries") {
    core::CostLedger ledger;
    ledger = core::ledger_add(ledger, "analyzer", 1000, 500, 10.0);
    CHECK(ledger.total.input_tokens == 1000);
    CHECK(ledger.total.output_tokens == 500);
    CHECK(ledger.per_agent.at("analyzer").input_tokens == 1000);

    ledger = core::ledger_add(ledger, "analyzer", 10, 20, 1.0);
    CHECK(ledger.per_agent.size() == 1);
    CHECK(ledger.per_agent.at("analyzer").input_tokens == 1010);
    CHECK(ledger.per_agent.at("analyzer").output_tokens == 520);
    CHECK(ledger.total.input_tokens == 1010);
}

TEST_CASE("ledger dollars follow the rate table") {
    core::CostLedger ledger;
    ledger.rates = {3e-6, 15e-6};
    ledger = core::ledger_add(ledger, "translator", 1000, 500, 0.0);
    CHECK(ledger.dollars() == doctest::Approx(0.0105).epsilon(1e-12));
}

TEST_CASE("zero rates disable cost reporting") {
    core::CostLedger ledger;
    ledger = core::ledger_add(ledger, "validator", 123456, 7890, 3.0);
    CHECK(ledger.dollars() == 0.0);
}

TEST_CASE("ledger rejects unknown agents and negative deltas") {
    core::CostLedger ledger;
    CHECK_THROWS_AS(core::ledger_add(ledger, "attacker", 1, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(core::ledger_add(ledger, "analyzer", -1, 0, 0.0), std::invalid_argument);
}

TEST_CASE("ledger totals equal the fold of adds in any order") {
    // Commutative-monoid property: apply the same deltas in shuffled
    // orders and compare the resulting ledgers.
    struct Delta {
        const char* agent;
        long long in, out;
        double secs;
    };
    std::vector<Delta> deltas = {
        {"analyzer", 100, 10, 1.0}, {"planner", 200, 20, 2.0},
        {"translator", 300, 30, 3.0}, {"validator", 400, 40, 4.0},
        {"translator", 50, 5, 0.5},  {"analyzer", 7, 3, 0.25},
    };
    auto fold = [&](const std::vector<Delta>& order) {
        core::CostLedger l;
        for (const auto& d : order) l = core::ledger_add(l, d.agent, d.in, d.out, d.secs);
        return l;
    };
    auto base = fold(deltas);
    std::mt19937 rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        auto shuffled = deltas;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        auto l = fold(shuffled);
        CHECK(l.total == base.total);
        CHECK(l.per_agent == base.per_agent);
    }
    // Totals are the sum over per-agent entries.
    long long in_sum = 0, out_sum = 0;
    for (const auto& [_, e] : base.per_agent) {
        in_sum += e.input_tokens;
        out_sum += e.output_tokens;
    }
    CHECK(base.total.input_tokens == in_sum);
    CHECK(base.total.output_tokens == out_sum);
}

TEST_CASE("ledger JSON round-trip preserves every counter") {
    core::CostLedger ledger;
    ledger.rates = {3e-6, 15e-6};
    ledger = core::ledger_add(ledger, "analyzer", 1000, 500, 10.0);
    ledger = core::ledger_add(ledger, "planner", 10, 5, 0.5);
    auto j = core::ledger_to_json(ledger);
    auto back = core::ledger_from_json(j);
    CHECK(back.total == ledger.total);
    CHECK(back.per_agent == ledger.per_agent);
    CHECK(back.dollars() == ledger.dollars());
}

TEST_CASE("config accepts the documented top-level keys only") {
    json good = {
        {"languages", json::array()},
        {"rates", {{"input_per_token", 1e-6}}},
        {"budget", {{"agent_timeout", 100}, {"max_iterations", 2}}},
        {"test_conventions", {{"test_suffixes", {"_test"}}}},
    };
    auto c = core::parse_config(good);
    CHECK(c.budget.agent_timeout_seconds == 100);
    CHECK(c.budget.max_iterations == 2);

    json bad = good;
    bad["surprise"] = 1;
    CHECK_THROWS_AS(core::parse_config(bad), core::ConfigError);
}

TEST_CASE("config rejects unknown keys inside sections") {
    json bad = {{"budget", {{"agent_timeout", 100}, {"max_iters", 2}}}};
    CHECK_THROWS_AS(core::parse_config(bad), core::ConfigError);

    json bad_profile = {{"languages",
                         {{{"language", "go"},
                           {"file_extensions", {".go"}},
                           {"linker", "lld"}}}}};
    CHECK_THROWS_AS(core::parse_config(bad_profile), core::ConfigError);
}

TEST_CASE("config rejects command templates with unknown placeholders") {
    json bad = {{"languages",
                 {{{"language", "go"},
                   {"file_extensions", {".go"}},
                   {"build_command", {"make", "{target}"}}}}}};
    CHECK_THROWS_AS(core::parse_config(bad), core::ConfigError);
}

TEST_CASE("config enforces budget invariants") {
    json zero_timeout = {{"budget", {{"agent_timeout", 0}}}};
    CHECK_THROWS_AS(core::parse_config(zero_timeout), core::ConfigError);
    json zero_iters = {{"budget", {{"max_iterations", 0}}}};
    CHECK_THROWS_AS(core::parse_config(zero_iters), core::ConfigError);
}

TEST_CASE("config requires nonempty file extensions per profile") {
    json bad = {{"languages", {{{"language", "go"}, {"file_extensions", json::array()}}}}};
    CHECK_THROWS_AS(core::parse_config(bad), core::ConfigError);
}

TEST_CASE("default config defines go and python profiles") {
    auto c = core::default_config();
    CHECK(c.has_language("go"));
    CHECK(c.has_language("python"));
    CHECK(c.budget.agent_timeout_seconds == 5000);
    CHECK(c.budget.max_iterations == 5);
    CHECK(c.rates.input_per_token == 0.0);
}

TEST_CASE("config hash is stable and sensitive to content") {
    auto a = core::default_config();
    auto b = core::default_config();
    CHECK(core::config_hash(a) == core::config_hash(b));
    b.budget.max_iterations = 7;
    CHECK(core::config_hash(a) != core::config_hash(b));
}

TEST_CASE("expand_command substitutes root as an absolute path") {
    auto argv = core::expand_command({"go", "test", "{root}/...", "-run", "{filter}"},
                                     ".", "", "TestFoo");
    REQUIRE(argv.size() == 5);
    CHECK(argv[2].front() == '/');
    CHECK(argv[4] == "TestFoo");
}

TEST_CASE("discover partitions a Go repo into source and test files") {
    auto dir = testenv::scratch_dir("discover-go");
    util::write_file(dir / "checkdigit.go", "package checkdigit\n");
    util::write_file(dir / "damm.go", "package checkdigit\n");
    util::write_file(dir / "cd_test.go", "package checkdigit\n");
    util::write_file(dir / "go.mod", "module checkdigit\n");

    auto cfg = core::default_config();
    auto proj = core::discover_project(dir.string(), cfg.profile("go"), cfg);
    CHECK(proj.source_files == std::vector<std::string>{"checkdigit.go", "damm.go"});
    CHECK(proj.test_files == std::vector<std::string>{"cd_test.go"});
    CHECK(proj.dependency_manifests == std::vector<std::string>{"go.mod"});
    fs::remove_all(dir);
}

TEST_CASE("discover puts files under test directories into test_files") {
    auto dir = testenv::scratch_dir("discover-nested");
    util::write_file(dir / "src" / "main" / "BasicParser.py", "pass\n");
    util::write_file(dir / "src" / "test" / "BasicParserTest.py", "pass\n");

    auto cfg = core::default_config();
    auto proj = core::discover_project(dir.string(), cfg.profile("python"), cfg);
    CHECK(proj.source_files == std::vector<std::string>{"src/main/BasicParser.py"});
    CHECK(proj.test_files == std::vector<std::string>{"src/test/BasicParserTest.py"});
    fs::remove_all(dir);
}

TEST_CASE("discover fails on a missing root and on an empty project") {
    auto cfg = core::default_config();
    CHECK_THROWS_AS(
        core::discover_project("/nonexistent/nowhere", cfg.profile("go"), cfg),
        core::DiscoverError);

    auto dir = testenv::scratch_dir("discover-empty");
    CHECK_THROWS_AS(core::discover_project(dir.string(), cfg.profile("go"), cfg),
                    core::DiscoverError);
    fs::remove_all(dir);
}

TEST_CASE("discover is deterministic across repeated runs") {
    auto dir = testenv::scratch_dir("discover-repeat");
    util::write_file(dir / "z.go", "package p\n");
    util::write_file(dir / "a.go", "package p\n");
    util::write_file(dir / "m_test.go", "package p\n");

    auto cfg = core::default_config();
    auto p1 = core::discover_project(dir.string(), cfg.profile("go"), cfg);
    auto p2 = core::discover_project(dir.string(), cfg.profile("go"), cfg);
    CHECK(p1.source_files == p2.source_files);
    CHECK(p1.test_files == p2.test_files);
    CHECK(p1.source_files == std::vector<std::string>{"a.go", "z.go"});
    fs::remove_all(dir);
}

TEST_CASE("discover honors explicit overrides") {
    auto dir = testenv::scratch_dir("discover-overrides");
    util::write_file(dir / "a.go", "package p\n");
    util::write_file(dir / "b.go", "package p\n");

    auto cfg = core::default_config();
    core::DiscoverOverrides ov;
    ov.source_files = std::vector<std::string>{"b.go"};
    ov.test_files = std::vector<std::string>{"a.go"};
    auto proj = core::discover_project(dir.string(), cfg.profile("go"), cfg, ov);
    CHECK(proj.source_files == std::vector<std::string>{"b.go"});
    CHECK(proj.test_files == std::vector<std::string>{"a.go"});

    ov.test_files = std::vector<std::string>{"missing.go"};
    CHECK_THROWS_AS(core::discover_project(dir.string(), cfg.profile("go"), cfg, ov),
                    core::DiscoverError);
    fs::remove_all(dir);
}

TEST_CASE("source and test lists never overlap") {
    auto dir = testenv::scratch_dir("discover-disjoint");
    util::write_file(dir / "x_test.go", "package p\n");
    util::write_file(dir / "y.go", "package p\n");
    auto cfg = core::default_config();
    auto proj = core::discover_project(dir.string(), cfg.profile("go"), cfg);
    for (const auto& s : proj.source_files) {
        CHECK(std::find(proj.test_files.begin(), proj.test_files.end(), s) ==
              proj.test_files.end());
    }
    fs::remove_all(dir);
}
