// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exits non-zero if any criterion fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "iotforge/explore.hpp"
#include "iotforge/formatter.hpp"
#include "iotforge/json_io.hpp"
#include "iotforge/parser.hpp"
#include "iotforge/rta.hpp"
#include "iotforge/schedule_sim.hpp"
#include "iotforge/thingml.hpp"
#include "iotforge/validator.hpp"
#include "test_support.hpp"

using namespace iotforge;
using namespace testsupport;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure(message);
}

const std::vector<std::string> kMainFixtures = {
    "smarthome.iot", "threetasks.iot", "overload.iot",
    "mutualwait.iot", "pingpong.iot",  "doublesend.iot",
};

std::vector<std::string> all_fixtures() {
    std::vector<std::string> fixtures = kMainFixtures;
    for (const auto& code : rule_catalog()) {
        fixtures.push_back("rules/" + code + "_fail.iot");
        fixtures.push_back("rules/" + code + "_pass.iot");
    }
    return fixtures;
}

SymbolTable load_table(const std::string& fixture, IoTModel& storage) {
    storage = parse_fixture(fixture);
    auto built = build_symbol_table(storage);
    require(built.ok(), fixture + ": symbol table failed");
    return std::move(built.table);
}

// ---- criterion 1: RTA agrees with the discrete-time oracle --------------

void criterion_rta_oracle_agreement() {
    auto start = std::chrono::steady_clock::now();
    TaskSetGenerator gen(0xACCE97ull);
    int sets = 0;
    for (; sets < 500; ++sets) {
        auto tasks = gen.generate();
        Duration horizon = hyperperiod(tasks);
        Timeline timeline = simulate_schedule(tasks, horizon);
        std::set<int> missed;
        for (const auto& miss : timeline.misses) missed.insert(miss.task);
        for (size_t i = 0; i < tasks.size(); ++i) {
            std::span<const TaskSpec> higher(tasks.data(), i);
            ResponseResult rta = response_time(tasks[i], higher);
            bool sim_ok = !missed.count(static_cast<int>(i));
            require(rta.schedulable == sim_ok,
                    "verdict disagreement on set " + std::to_string(sets) + " task " +
                        std::to_string(i));
            if (rta.schedulable)
                require(rta.response->us == timeline.max_response[i].us,
                        "response disagreement on set " + std::to_string(sets) + " task " +
                            std::to_string(i));
        }
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    require(elapsed.count() < 30000,
            "agreement run took " + std::to_string(elapsed.count()) + " ms (budget 30 s)");
    std::cout << "       (" << sets << " task sets, " << elapsed.count() << " ms)\n";
}

// ---- criterion 2: the worked analysis fixtures ---------------------------

void criterion_worked_fixtures() {
    IoTModel three, over;
    SymbolTable three_table = load_table("threetasks.iot", three);
    auto report = analyze_processor(three_table, "MCU1");
    require(report.verdict == Verdict::Schedulable, "three-task set must be schedulable");
    require(report.cores.size() == 1, "single core expected");
    const auto& results = report.cores[0].results;
    require(results.size() == 3, "three results expected");
    std::int64_t expected[3] = {1, 3, 10};
    for (int i = 0; i < 3; ++i) {
        require(results[static_cast<size_t>(i)].response.has_value(), "response missing");
        require(results[static_cast<size_t>(i)].response->us == expected[i],
                "response " + std::to_string(i) + " is " +
                    std::to_string(results[static_cast<size_t>(i)].response->us) +
                    ", expected " + std::to_string(expected[i]));
    }
    // oracle cross-check over one hyperperiod
    auto tasks = assign_priorities(deployed_task_set(three_table, "MCU1"));
    Timeline timeline = simulate_schedule(tasks, hyperperiod(tasks));
    require(timeline.misses.empty(), "oracle reports a miss on the schedulable set");
    for (int i = 0; i < 3; ++i)
        require(timeline.max_response[static_cast<size_t>(i)].us == expected[i],
                "oracle max response mismatch");

    SymbolTable over_table = load_table("overload.iot", over);
    auto over_report = analyze_processor(over_table, "MCU1");
    require(over_report.verdict == Verdict::Unschedulable,
            "overload fixture must be unschedulable, got " +
                verdict_to_text(over_report.verdict));
    auto over_tasks = assign_priorities(deployed_task_set(over_table, "MCU1"));
    Timeline over_timeline = simulate_schedule(over_tasks, hyperperiod(over_tasks));
    require(!over_timeline.misses.empty() && over_timeline.misses[0].at.us == 4,
            "oracle must observe the miss at t=4");
}

// ---- criterion 3: Table-1 coverage and golden emission -------------------

void criterion_mapping_coverage() {
    IoTModel model;
    SymbolTable table = load_table("smarthome.iot", model);
    auto coverage = thingml::mapping_coverage(table);
    for (size_t row = 0; row < coverage.counts.size(); ++row)
        require(coverage.counts[row] >= 1,
                std::string("mapping row not exercised: ") +
                    thingml::CoverageReport::row_names[row]);
    auto files = thingml::emit(thingml::map_model(table));
    require(files.size() == 5, "expected 4 thing files + configuration");
    for (const auto& [path, content] : files) {
        std::string expected = read_file(golden_path("smarthome/" + path));
        require(content == expected, "golden mismatch: " + path);
    }
}

// ---- criterion 4: exploration equals the brute-force enumerator ----------

void criterion_deadlock_equivalence() {
    for (const char* fixture : {"mutualwait.iot", "pingpong.iot", "doublesend.iot"}) {
        for (int bound : {1, 2}) {
            IoTModel model;
            SymbolTable table = load_table(fixture, model);
            BehaviorSim sim(table, {bound});
            auto report = explore(sim);
            ProductEnumerator oracle(model, bound);
            auto expected = oracle.enumerate();
            std::string tag = std::string(fixture) + " bound " + std::to_string(bound);
            require(report.reachable_configs == expected.reachable,
                    tag + ": reachable " + std::to_string(report.reachable_configs) + " vs " +
                        std::to_string(expected.reachable));
            std::set<std::string> deadlocks, overflows;
            for (const auto& d : report.deadlocks)
                deadlocks.insert(encode_global_config(replay(sim, d.witness)));
            for (const auto& o : report.overflows)
                overflows.insert(encode_global_config(replay(sim, o.witness)));
            require(deadlocks == expected.deadlocks, tag + ": deadlock sets differ");
            require(overflows == expected.overflows, tag + ": overflow sets differ");
        }
    }
    // the mutual-wait fixture in detail
    IoTModel model;
    SymbolTable table = load_table("mutualwait.iot", model);
    BehaviorSim sim(table, {2});
    auto report = explore(sim);
    require(report.deadlocks.size() == 1, "mutual wait must report exactly one deadlock");
    const auto& d = report.deadlocks[0];
    require(d.witness.size() <= 4, "witness longer than 4 steps");
    GlobalConfig end = replay(sim, d.witness);
    require(sim.enabled_moves(end).empty(), "witness does not replay to a stuck configuration");
    bool queued = false;
    for (const auto& [name, state] : end.components) queued = queued || !state.queue.empty();
    require(queued, "deadlock configuration has empty queues");
    require(config_digest(end) == d.digest, "witness replays to a different configuration");
}

// ---- criterion 5: parser round trip ---------------------------------------

void criterion_round_trip() {
    for (const auto& fixture : all_fixtures()) {
        IoTModel model = parse_fixture(fixture);
        auto reparsed = parse_model(format_model(model), "roundtrip.iot");
        require(reparsed.ok(), fixture + ": formatted text failed to parse");
        require(structurally_equal(model, *reparsed.model), fixture + ": round trip differs");
    }
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        ModelGenerator gen(seed);
        IoTModel model = gen.generate();
        std::string text = format_model(model);
        auto parsed = parse_model(text, "generated.iot");
        require(parsed.ok(), "generated model failed to parse (seed " + std::to_string(seed) + ")");
        require(structurally_equal(model, *parsed.model),
                "generated model round trip differs (seed " + std::to_string(seed) + ")");
    }
}

// ---- criterion 6: the validator catalog ------------------------------------

void criterion_validator_catalog() {
    for (const auto& code : rule_catalog()) {
        IoTModel failing = parse_fixture("rules/" + code + "_fail.iot");
        auto fail_diags = validate(failing);
        bool fired = false;
        for (const auto& d : fail_diags) fired = fired || d.code == code;
        require(fired, code + " did not fire on its failing fixture");

        IoTModel passing = parse_fixture("rules/" + code + "_pass.iot");
        auto pass_diags = validate(passing);
        for (const auto& d : pass_diags)
            require(d.code != code, code + " fired on its passing fixture");
        require(!has_errors(pass_diags), code + " passing fixture has unrelated errors");
    }
    // V004 fires exactly on the states missing an event
    IoTModel mixed = parse_fixture("rules/V004_fail.iot");
    auto diags = validate(mixed);
    int v004 = 0;
    for (const auto& d : diags) {
        if (d.code != "V004") continue;
        v004++;
        require(d.message.find("Good") == std::string::npos,
                "V004 flagged a complete state");
        require(d.message.find("NoExit") != std::string::npos ||
                    d.message.find("NoEntry") != std::string::npos,
                "V004 message names no offending state");
    }
    require(v004 == 2, "V004 must fire exactly twice, fired " + std::to_string(v004));
}

// ---- criterion 7: byte-identical outputs ------------------------------------

void criterion_determinism() {
    auto expect_identical = [](const std::vector<std::string>& args) {
        auto first = run_cli(args);
        auto second = run_cli(args);
        std::string joined;
        for (const auto& a : args) joined += a + " ";
        require(first.out == second.out && first.err == second.err &&
                    first.code == second.code,
                "output differs across runs: " + joined);
    };
    for (const auto& fixture : all_fixtures()) {
        std::string path = fixture_path(fixture);
        expect_identical({"validate", path});
        expect_identical({"validate", path, "--format", "json"});
        expect_identical({"analyze", path, "--format", "json"});
        expect_identical({"explore", path, "--queue-bound", "2", "--max-configs", "5000"});
    }
    for (const auto& fixture : kMainFixtures) {
        std::string path = fixture_path(fixture);
        expect_identical({"simulate", path, "--steps", "30", "--seed", "11"});
    }
    // generate writes byte-identical trees (invalid fixtures write nothing,
    // deterministically)
    for (const auto& fixture : all_fixtures()) {
        namespace fs = std::filesystem;
        fs::path dir_a = fs::temp_directory_path() / "iotforge_acc_a";
        fs::path dir_b = fs::temp_directory_path() / "iotforge_acc_b";
        fs::remove_all(dir_a);
        fs::remove_all(dir_b);
        auto first = run_cli({"generate", fixture_path(fixture), "--target", "thingml",
                              "--out-dir", dir_a.string()});
        auto second = run_cli({"generate", fixture_path(fixture), "--target", "thingml",
                               "--out-dir", dir_b.string()});
        require(first.code == second.code, fixture + ": generate exit codes differ");
        if (fs::exists(dir_a)) {
            for (auto& entry : fs::recursive_directory_iterator(dir_a)) {
                if (!entry.is_regular_file()) continue;
                fs::path rel = fs::relative(entry.path(), dir_a);
                require(fs::exists(dir_b / rel), "missing generated file " + rel.string());
                require(read_file(entry.path().string()) ==
                            read_file((dir_b / rel).string()),
                        fixture + ": generated file differs: " + rel.string());
            }
        }
        fs::remove_all(dir_a);
        fs::remove_all(dir_b);
    }
}

struct Criterion {
    int number;
    const char* title;
    std::function<void()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "RTA-oracle agreement on 500 random constrained-deadline task sets",
         criterion_rta_oracle_agreement},
        {2, "worked analysis fixtures: responses 1/3/10 and the unschedulable pair",
         criterion_worked_fixtures},
        {3, "element-mapping coverage and golden ThingML emission",
         criterion_mapping_coverage},
        {4, "exploration equals the brute-force product enumerator",
         criterion_deadlock_equivalence},
        {5, "parse-format round trip on fixtures and 200 generated models",
         criterion_round_trip},
        {6, "validator catalog: failing and passing fixtures per rule",
         criterion_validator_catalog},
        {7, "byte-identical outputs across repeated runs", criterion_determinism},
    };
    int failures = 0;
    for (const auto& criterion : criteria) {
        try {
            criterion.run();
            std::cout << "PASS  criterion " << criterion.number << ": " << criterion.title
                      << "\n";
        } catch (const std::exception& e) {
            failures++;
            std::cout << "FAIL  criterion " << criterion.number << ": " << criterion.title
                      << " -- " << e.what() << "\n";
        }
    }
    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all 7 acceptance criteria passed\n";
    return 0;
}
