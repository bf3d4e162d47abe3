#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "iotforge/parser.hpp"
#include "iotforge/thingml.hpp"
#include "iotforge/validator.hpp"
#include "test_support.hpp"

using namespace iotforge;
using testsupport::golden_path;
using testsupport::parse_fixture;
using testsupport::read_file;

namespace {

SymbolTable table_for_fixture(const std::string& name, IoTModel& storage) {
    storage = parse_fixture(name);
    REQUIRE_FALSE(has_errors(validate(storage)));
    auto built = build_symbol_table(storage);
    REQUIRE(built.ok());
    return std::move(built.table);
}

const thingml::Thing* find_thing(const thingml::Document& doc, const std::string& name) {
    for (const auto& thing : doc.things)
        if (thing.name == name) return &thing;
    return nullptr;
}

} // namespace

TEST_CASE("components map to things, payloads to lowercase-initial messages") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto doc = thingml::map_model(table);
    REQUIRE(doc.things.size() == 4);
    CHECK(find_thing(doc, "TempSensor") != nullptr);
    CHECK(find_thing(doc, "Controller") != nullptr);
    CHECK(find_thing(doc, "Controller_Logger") != nullptr); // flattened child
    CHECK(find_thing(doc, "Display") != nullptr);
    REQUIRE(doc.messages.size() == 1); // TempReading redeclared identically merges
    CHECK(doc.messages[0].name == "tempReading");
    REQUIRE(doc.messages[0].params.size() == 1);
    CHECK(doc.messages[0].params[0].second == "Double");
}

TEST_CASE("operations become functions, properties carry mapped types") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto doc = thingml::map_model(table);
    const thingml::Thing* controller = find_thing(doc, "Controller");
    REQUIRE(controller);
    REQUIRE(controller->functions.size() == 1);
    CHECK(controller->functions[0].name == "check");
    REQUIRE(controller->properties.size() == 1);
    CHECK(controller->properties[0].type == "Boolean");
    CHECK(controller->properties[0].init == "false");
    REQUIRE(controller->statechart.has_value());
    CHECK(controller->statechart->init == "Waiting");
}

TEST_CASE("incoming triggers map to port-qualified receive events with guards") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto doc = thingml::map_model(table);
    const thingml::Thing* controller = find_thing(doc, "Controller");
    REQUIRE(controller);
    const auto& waiting = controller->statechart->states[0];
    REQUIRE(waiting.transitions.size() == 2);
    REQUIRE(waiting.transitions[0].event.has_value());
    CHECK(*waiting.transitions[0].event == "sense?tempReading");
    REQUIRE(waiting.transitions[0].guard.has_value());
    CHECK(waiting.transitions[0].guard->find("value > 30") != std::string::npos);
}

TEST_CASE("empty model maps to an empty document") {
    auto parsed = parse_model("model Empty { }", "inline.iot");
    REQUIRE(parsed.ok());
    auto built = build_symbol_table(*parsed.model);
    auto doc = thingml::map_model(built.table);
    CHECK(doc.things.empty());
    CHECK(doc.messages.empty());
    auto files = thingml::emit(doc);
    REQUIRE(files.size() == 1); // just the configuration
    CHECK(files[0].first == "config/main.thingml");
}

TEST_CASE("conflicting payload shapes get thing-prefixed message names") {
    auto parsed = parse_model(
        "model M { software {\n"
        "component A { payload Data { v : int; } provided port p sends Data; }\n"
        "component B { payload Data { v : real; w : bool; } provided port q sends Data; }\n"
        "} }",
        "inline.iot");
    REQUIRE(parsed.ok());
    auto built = build_symbol_table(*parsed.model);
    auto doc = thingml::map_model(built.table);
    REQUIRE(doc.messages.size() == 2);
    CHECK(doc.messages[0].name == "data");
    CHECK(doc.messages[1].name == "bData");
    const thingml::Thing* b = find_thing(doc, "B");
    REQUIRE(b);
    REQUIRE(b->ports.size() == 1);
    CHECK(b->ports[0].sends[0] == "bData");
}

TEST_CASE("enum types become enumeration declarations") {
    auto parsed = parse_model(
        "model M { software { component A {\n"
        "property power : enum(eco, boost) = eco;\n"
        "} } }",
        "inline.iot");
    REQUIRE(parsed.ok());
    auto built = build_symbol_table(*parsed.model);
    auto doc = thingml::map_model(built.table);
    REQUIRE(doc.enums.size() == 1);
    CHECK(doc.enums[0].name == "A_power");
    CHECK(doc.enums[0].members == std::vector<std::string>{"eco", "boost"});
    auto files = thingml::emit(doc);
    bool found = false;
    for (const auto& [path, content] : files)
        if (path == "things/A.thingml")
            found = content.find("enumeration A_power { eco, boost }") != std::string::npos;
    CHECK(found);
}

TEST_CASE("mapping coverage counts the smarthome fixture exactly") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto coverage = thingml::mapping_coverage(table);
    CHECK(coverage.counts[0] == 4); // components incl. Logger
    CHECK(coverage.counts[1] == 2); // ports
    CHECK(coverage.counts[2] == 4); // operations
    CHECK(coverage.counts[3] == 4); // properties
    CHECK(coverage.counts[4] == 2); // payload declarations
    CHECK(coverage.counts[5] == 8); // 4 states + 4 transitions
    CHECK(coverage.counts[6] == 2); // guards
    CHECK(coverage.counts[7] == 7); // 6 events + 1 action
    for (int count : coverage.counts) CHECK(count >= 1);
}

TEST_CASE("models without state machines have zero behavioral coverage") {
    IoTModel model;
    SymbolTable table = table_for_fixture("threetasks.iot", model);
    auto coverage = thingml::mapping_coverage(table);
    CHECK(coverage.counts[0] == 1);
    CHECK(coverage.counts[2] == 3);
    CHECK(coverage.counts[5] == 0);
    CHECK(coverage.counts[6] == 0);
    CHECK(coverage.counts[7] == 0);
}

TEST_CASE("emission is deterministic") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto doc = thingml::map_model(table);
    auto first = thingml::emit(doc);
    auto second = thingml::emit(thingml::map_model(table));
    REQUIRE(first.size() == second.size());
    for (size_t i = 0; i < first.size(); ++i) {
        CHECK(first[i].first == second[i].first);
        CHECK(first[i].second == second[i].second);
    }
}

TEST_CASE("smarthome emission matches the checked-in golden files") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto files = thingml::emit(thingml::map_model(table));
    REQUIRE(files.size() == 5);
    for (const auto& [path, content] : files) {
        std::string expected = read_file(golden_path("smarthome/" + path));
        CHECK_MESSAGE(content == expected, path);
    }
}

TEST_CASE("ping-pong emits two thing files plus a one-connector configuration") {
    IoTModel model;
    SymbolTable table = table_for_fixture("pingpong.iot", model);
    auto doc = thingml::map_model(table);
    REQUIRE(doc.things.size() == 2);
    REQUIRE(doc.configuration.connectors.size() == 1);
    CHECK(doc.configuration.connectors[0].from_instance == "pinger");
    CHECK(doc.configuration.connectors[0].to_instance == "ponger");
    auto files = thingml::emit(doc);
    REQUIRE(files.size() == 3);
    for (const auto& [path, content] : files) {
        std::string expected = read_file(golden_path("pingpong/" + path));
        CHECK_MESSAGE(content == expected, path);
    }
}

TEST_CASE("generated message names start lowercase and thing names are collision-free") {
    for (const char* fixture : {"smarthome.iot", "pingpong.iot", "mutualwait.iot"}) {
        IoTModel model;
        SymbolTable table = table_for_fixture(fixture, model);
        auto doc = thingml::map_model(table);
        std::set<std::string> thing_names;
        for (const auto& thing : doc.things) CHECK(thing_names.insert(thing.name).second);
        for (const auto& msg : doc.messages) {
            REQUIRE_FALSE(msg.name.empty());
            CHECK(std::islower(static_cast<unsigned char>(msg.name[0])));
        }
        std::set<std::string> instances;
        for (const auto& [inst, thing] : doc.configuration.instances)
            CHECK(instances.insert(inst).second);
    }
}

TEST_CASE("row totality: every mappable element lands in the document") {
    IoTModel model;
    SymbolTable table = table_for_fixture("smarthome.iot", model);
    auto doc = thingml::map_model(table);
    auto coverage = thingml::mapping_coverage(table);
    // things == components, functions == operations, properties == properties
    CHECK(static_cast<int>(doc.things.size()) == coverage.counts[0]);
    int functions = 0, properties = 0, ports = 0, states_plus_transitions = 0, guards = 0;
    for (const auto& thing : doc.things) {
        functions += static_cast<int>(thing.functions.size());
        properties += static_cast<int>(thing.properties.size());
        ports += static_cast<int>(thing.ports.size());
        if (thing.statechart) {
            states_plus_transitions += static_cast<int>(thing.statechart->states.size());
            for (const auto& state : thing.statechart->states) {
                states_plus_transitions += static_cast<int>(state.transitions.size());
                for (const auto& tr : state.transitions)
                    if (tr.guard) guards++;
            }
        }
    }
    CHECK(functions == coverage.counts[2]);
    CHECK(properties == coverage.counts[3]);
    CHECK(ports == coverage.counts[1]);
    CHECK(states_plus_transitions == coverage.counts[5]);
    CHECK(guards == coverage.counts[6]);
}
