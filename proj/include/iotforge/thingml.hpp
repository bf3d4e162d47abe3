#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "iotforge/symbol_table.hpp"

namespace iotforge::thingml {

struct MessageDecl {
    std::string name; // lowercase-initial
    std::vector<std::pair<std::string, std::string>> params; // name, mapped type
};

struct EnumDecl {
    std::string name;
    std::vector<std::string> members;
};

struct ThingProperty {
    std::string name;
    std::string type;
    std::string init;
};

struct ThingPort {
    std::string name;
    bool provided = true;
    std::vector<std::string> sends;    // message names
    std::vector<std::string> receives;
};

struct ThingFunction {
    std::string name;
    std::vector<std::pair<std::string, std::string>> params;
};

struct ChartTransition {
    std::string target;
    std::optional<std::string> event; // "port?message", absent = spontaneous
    std::optional<std::string> guard;
    std::vector<std::string> actions; // statements
};

struct ChartState {
    std::string name;
    std::vector<std::string> on_entry; // statements
    std::vector<std::string> on_exit;
    std::vector<ChartTransition> transitions;
};

struct Statechart {
    std::string name;
    std::string init;
    std::vector<ChartState> states;
};

struct Thing {
    std::string name;
    std::vector<std::string> messages; // names into the document pool
    std::vector<std::string> enums;    // names into the document pool
    std::vector<ThingProperty> properties;
    std::vector<ThingPort> ports;
    std::vector<ThingFunction> functions;
    std::optional<Statechart> statechart;
};

struct ConfigConnector {
    std::string from_instance;
    std::string from_port;
    std::string to_instance;
    std::string to_port;
};

struct Configuration {
    std::string name;
    std::vector<std::pair<std::string, std::string>> instances; // instance, thing
    std::vector<ConfigConnector> connectors;
};

struct Document {
    std::vector<Thing> things;
    std::vector<MessageDecl> messages; // shared pool
    std::vector<EnumDecl> enums;
    Configuration configuration;
};

// Element-mapping coverage, one counter per mapping row.
struct CoverageReport {
    static constexpr std::array<const char*, 8> row_names = {
        "Component -> Thing",
        "Provided/required port -> Provided/required port",
        "Operation -> Function",
        "Property -> Property",
        "Payload -> Message",
        "IoTState/Transition -> State/Transition",
        "StateGuards -> Guards",
        "IoTEvent/Action -> Event/Action",
    };
    std::array<int, 8> counts{};
};

// Applies the element mapping to a validated model: components (with
// subcomponents flattened into Parent_Child things), ports, operations,
// properties, payloads, states/transitions, guards, events/actions.
Document map_model(const SymbolTable& table);

// Count of source elements mapped per row.
CoverageReport mapping_coverage(const SymbolTable& table);

// Deterministic text emission: one file per thing plus the configuration,
// as (relative path, content) pairs. Byte-identical across runs.
std::vector<std::pair<std::string, std::string>> emit(const Document& doc);

} // namespace iotforge::thingml
