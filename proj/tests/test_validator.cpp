#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iotforge/formatter.hpp"
#include "iotforge/parser.hpp"
#include "iotforge/validator.hpp"
#include "test_support.hpp"

using namespace iotforge;
using testsupport::parse_fixture;

namespace {

std::vector<Diagnostic> validate_fixture(const std::string& name, ValidationOptions opts = {}) {
    IoTModel model = parse_fixture(name);
    return validate(model, opts);
}

int count_code(const std::vector<Diagnostic>& diags, const std::string& code) {
    int n = 0;
    for (const auto& d : diags)
        if (d.code == code) n++;
    return n;
}

} // namespace

TEST_CASE("every rule has a firing and a passing fixture") {
    for (const std::string& code : rule_catalog()) {
        auto failing = validate_fixture("rules/" + code + "_fail.iot");
        CHECK_MESSAGE(count_code(failing, code) >= 1, code << " fail fixture");
        auto passing = validate_fixture("rules/" + code + "_pass.iot");
        CHECK_MESSAGE(count_code(passing, code) == 0, code << " pass fixture");
        CHECK_MESSAGE(!has_errors(passing), code << " pass fixture must be error-free");
    }
}

TEST_CASE("V004 fires exactly on states missing either event") {
    auto diags = validate_fixture("rules/V004_fail.iot");
    REQUIRE(count_code(diags, "V004") == 2);
    bool no_exit = false, no_entry = false;
    for (const auto& d : diags) {
        if (d.code != "V004") continue;
        if (d.message.find("NoExit") != std::string::npos) no_exit = true;
        if (d.message.find("NoEntry") != std::string::npos) no_entry = true;
        CHECK(d.message.find("Good") == std::string::npos);
    }
    CHECK(no_exit);
    CHECK(no_entry);
}

TEST_CASE("the smarthome fixture is clean at error level") {
    auto diags = validate_fixture("smarthome.iot", {true});
    CHECK_FALSE(has_errors(diags));
    CHECK(diags.empty()); // fully deployed, no warnings either
}

TEST_CASE("wcet larger than deadline is V007") {
    auto diags = validate_fixture("rules/V007_fail.iot");
    REQUIRE(count_code(diags, "V007") >= 1);
    for (const auto& d : diags)
        if (d.code == "V007") CHECK(d.severity == Severity::Error);
}

TEST_CASE("V008 escalates from warning to error when analysis is requested") {
    auto relaxed = validate_fixture("rules/V008_fail.iot");
    REQUIRE(count_code(relaxed, "V008") == 1);
    for (const auto& d : relaxed)
        if (d.code == "V008") CHECK(d.severity == Severity::Warning);
    auto strict = validate_fixture("rules/V008_fail.iot", {true});
    REQUIRE(count_code(strict, "V008") == 1);
    for (const auto& d : strict)
        if (d.code == "V008") CHECK(d.severity == Severity::Error);
}

TEST_CASE("validation output is deterministic and sorted") {
    // a model tripping several rules at once
    std::string source =
        "model Messy {\n"
        "  software {\n"
        "    component A {\n"
        "      provided port empty;\n"
        "      operation bad() timing { kind: periodic wcet: 9ms period: 4ms deadline: 2ms };\n"
        "      statemachine F init S {\n"
        "        state S { onentry evNoop; }\n"
        "        event evNoop kind general;\n"
        "      }\n"
        "    }\n"
        "  }\n"
        "}\n";
    auto parsed = parse_model(source, "messy.iot");
    REQUIRE(parsed.ok());
    auto first = validate(*parsed.model);
    auto second = validate(*parsed.model);
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].code == second[i].code);
        CHECK(first[i].message == second[i].message);
    }
    for (size_t i = 1; i < first.size(); ++i) {
        auto key = [](const Diagnostic& d) {
            return std::make_tuple(d.span.file, d.span.start_line, d.span.start_col, d.code);
        };
        CHECK(key(first[i - 1]) <= key(first[i]));
    }
    CHECK(count_code(first, "V009") >= 1); // empty port
    CHECK(count_code(first, "V007") >= 1);
    CHECK(count_code(first, "V004") >= 1); // missing onexit
}

TEST_CASE("removing an unreferenced element never introduces new violations") {
    IoTModel model = parse_fixture("smarthome.iot");
    REQUIRE(validate(model).empty());
    IoTModel without_display = model;
    without_display.software.erase(without_display.software.begin() + 2);
    without_display.deployment.pop_back(); // Display's binding goes with it
    CHECK(validate(without_display).empty());
    IoTModel without_storage = model;
    without_storage.operational->storage.clear();
    without_storage.operational->modes.clear();
    CHECK(validate(without_storage).empty());
}

TEST_CASE("removing a referenced payload only reports the dangling references") {
    IoTModel model = parse_fixture("smarthome.iot");
    IoTModel mutated = model;
    mutated.software[0].payloads.clear(); // TempSensor.TempReading
    auto diags = validate(mutated);
    REQUIRE_FALSE(diags.empty());
    for (const auto& d : diags) {
        CHECK_MESSAGE(d.message.find("TempReading") != std::string::npos, d.message);
    }
}

TEST_CASE("explain_rule covers the catalog and rejects unknown codes") {
    std::string v4 = explain_rule("V004");
    CHECK(v4.find("OnEntry") != std::string::npos);
    CHECK(v4.find("OnExit") != std::string::npos);
    std::string v7 = explain_rule("V007");
    CHECK(v7.find("wcet") != std::string::npos);
    CHECK(v7.find("deadline") != std::string::npos);
    CHECK_THROWS_AS((void)explain_rule("V999"), QueryError);
    CHECK(rule_catalog().size() == 12);
    for (const auto& code : rule_catalog()) CHECK_FALSE(explain_rule(code).empty());
}

TEST_CASE("event port/payload presence is enforced for directed events") {
    std::string source =
        "model M { software { component A {\n"
        "statemachine F init S {\n"
        "state S { onentry ev; onexit ev; }\n"
        "event ev kind general;\n"
        "event evIn kind incoming;\n"
        "on evIn from S to S;\n"
        "} } } }";
    auto parsed = parse_model(source, "inline.iot");
    REQUIRE(parsed.ok());
    auto diags = validate(*parsed.model);
    CHECK(count_code(diags, "V006") == 1);
}

TEST_CASE("guard type errors carry V010") {
    auto diags = validate_fixture("rules/V010_fail.iot");
    REQUIRE(count_code(diags, "V010") == 1);
}

TEST_CASE("property initial values must match their type") {
    std::string source =
        "model M { software { component A { property speed : int = \"fast\"; } } }";
    auto parsed = parse_model(source, "inline.iot");
    REQUIRE(parsed.ok());
    CHECK(count_code(validate(*parsed.model), "V010") == 1);
}

TEST_CASE("assign actions must match the property type") {
    std::string source =
        "model M { software { component A {\n"
        "property speed : int = 0;\n"
        "statemachine F init S {\n"
        "state S { onentry ev; onexit ev; }\n"
        "event ev kind general effect boost;\n"
        "action boost assign speed = true;\n"
        "} } } }";
    auto parsed = parse_model(source, "inline.iot");
    REQUIRE(parsed.ok());
    CHECK(count_code(validate(*parsed.model), "V010") == 1);
}

TEST_CASE("fix synthesizes no-op entry and exit events") {
    IoTModel model = parse_fixture("rules/V004_fail.iot");
    REQUIRE(count_code(validate(model), "V004") == 2);
    IoTModel fixed = synthesize_missing_state_events(model);
    CHECK(count_code(validate(fixed), "V004") == 0);
    // the fixed model still round-trips through the formatter
    auto reparsed = parse_model(format_model(fixed), "fixed.iot");
    REQUIRE(reparsed.ok());
    CHECK(structurally_equal(fixed, *reparsed.model));
    // original untouched
    CHECK(count_code(validate(model), "V004") == 2);
}

TEST_CASE("point-to-point violations and mixed endpoints carry V003") {
    std::string fan_out =
        "model M { system { connect A.po -> B.pi; connect A.po -> C.pi; } software {\n"
        "component A { provided port po sends X; payload X {} }\n"
        "component B { required port pi receives X; payload X {} }\n"
        "component C { required port pi receives X; payload X {} }\n"
        "} }";
    auto parsed = parse_model(fan_out, "inline.iot");
    REQUIRE(parsed.ok());
    CHECK(count_code(validate(*parsed.model), "V003") >= 1);

    std::string mixed =
        "model M { system { block Blk { port out f : X; } connect Blk.f -> B.pi; } software {\n"
        "component B { required port pi receives X; payload X {} }\n"
        "} }";
    auto parsed_mixed = parse_model(mixed, "inline.iot");
    REQUIRE(parsed_mixed.ok());
    CHECK(count_code(validate(*parsed_mixed.model), "V003") == 1);
}
