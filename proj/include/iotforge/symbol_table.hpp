#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iotforge/model.hpp"
#include "iotforge/source_span.hpp"

namespace iotforge {

// Thrown for API misuse on query operations (unknown names, ambiguous
// connections, empty task sets). Model-level problems travel as
// diagnostics instead.
class QueryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-component declaration index. Pointers refer into the owning
// IoTModel, which must outlive the table (models are immutable once
// the table is built).
struct ComponentInfo {
    const SoftwareComponent* component = nullptr;
    std::string qualified_name; // dotted path from the top level
    std::string top_level;      // name of the root ancestor
    std::map<std::string, const ComponentPort*> ports;
    std::map<std::string, const Payload*> payloads;
    std::map<std::string, const Property*> properties;
    std::map<std::string, const Operation*> operations;
    std::map<std::string, const IoTState*> states;
    std::map<std::string, const IoTEvent*> events;
    std::map<std::string, const IoTAction*> actions;
};

struct Endpoint {
    std::string component;
    std::string port;
    bool operator==(const Endpoint&) const = default;
};

class SymbolTable {
public:
    const IoTModel& model() const { return *model_; }

    const ComponentInfo* find_component(std::string_view qualified_name) const;
    const SystemBlock* find_block(std::string_view name) const;
    const Processor* find_processor(std::string_view name) const;
    const ServerDecl* find_server(std::string_view name) const;

    // Deterministically ordered by qualified name; includes subcomponents.
    const std::map<std::string, ComponentInfo>& components() const { return components_; }
    const std::map<std::string, const Processor*>& processors() const { return processors_; }

    // Processor a top-level component is bound to, if any.
    std::optional<std::string> deployment_of(std::string_view top_level_component) const;

    // Connectors attached to a component port, as (peer owner, peer port,
    // peer is a component) triples.
    struct Attachment {
        std::string peer_owner;
        std::string peer_port;
        bool peer_is_component = false;
    };
    std::vector<Attachment> attachments(std::string_view component, std::string_view port) const;

private:
    friend struct TableBuilder;
    const IoTModel* model_ = nullptr;
    std::map<std::string, ComponentInfo> components_;
    std::map<std::string, const SystemBlock*> blocks_;
    std::map<std::string, const Processor*> processors_;
    std::map<std::string, const ServerDecl*> servers_;
    std::map<std::string, std::string> deployment_; // top-level component → processor
    std::map<std::pair<std::string, std::string>, std::vector<Attachment>> attachments_;
};

struct SymbolTableResult {
    SymbolTable table;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

// Builds the name-resolution index. Emits one diagnostic per duplicate
// name (V001, R001 for duplicate deployment bindings) and per unresolved
// reference (V004/V005/V009/V012 where a catalog rule owns the reference
// kind, R002 otherwise). When it returns no diagnostics, every reference
// in the model dereferences.
SymbolTableResult build_symbol_table(const IoTModel& model);

// Opposite endpoint of the connector attached to a component port, or
// nullopt when unconnected (or connected to a system block). Throws
// QueryError for unknown names or when several connectors attach.
std::optional<Endpoint> connected_peer(const SymbolTable& table, std::string_view component,
                                       std::string_view port);

} // namespace iotforge
