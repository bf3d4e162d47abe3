#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iotforge/expr.hpp"
#include "iotforge/source_span.hpp"

namespace iotforge {

// All durations are integer microseconds; the surface syntax accepts
// us/ms/s suffixes.
struct Duration {
    std::int64_t us = 0;
    auto operator<=>(const Duration&) const = default;
};

std::string duration_to_text(Duration d); // compact unit: s, ms or us

// A by-name reference recorded where it appeared in the source.
struct Ref {
    std::string name;
    SourceSpan span;
};

struct TypeRef {
    PrimKind kind = PrimKind::Int;
    std::vector<std::string> enum_members; // non-empty iff kind == Enum
};

std::string type_to_text(const TypeRef& t);

// ---------------------------------------------------------------- system view

enum class FlowDirection { In, Out, InOut };

struct FlowPort {
    std::string name;
    SourceSpan span;
    FlowDirection direction = FlowDirection::In;
    Ref payload_type;
};

struct Contract {
    std::string name;
    SourceSpan span;
    std::string assume;    // expression text, checked syntactically
    std::string guarantee;
};

struct SystemBlock {
    std::string name;
    SourceSpan span;
    std::vector<FlowPort> flow_ports;
    std::vector<Contract> contracts;
    std::optional<Ref> realizes; // bridge to a top-level software component
};

// Endpoints name either a system block + flow-port or a top-level
// component + component port.
struct Connector {
    Ref from_owner;
    Ref from_port;
    Ref to_owner;
    Ref to_port;
    SourceSpan span;
};

struct SystemView {
    std::vector<SystemBlock> blocks;
    std::vector<Connector> connections;
};

// -------------------------------------------------------------- software view

enum class PortKind { Provided, Required };

struct ComponentPort {
    std::string name;
    SourceSpan span;
    PortKind kind = PortKind::Provided;
    std::vector<Ref> sends;
    std::vector<Ref> receives;
};

struct PayloadField {
    std::string name;
    SourceSpan span;
    TypeRef type;
};

struct Payload {
    std::string name;
    SourceSpan span;
    std::vector<PayloadField> fields;
};

struct Property {
    std::string name;
    SourceSpan span;
    TypeRef type;
    Literal initial;
};

enum class TimingKind { Periodic, Sporadic };

struct TimingAnnotation {
    TimingKind kind = TimingKind::Periodic;
    Duration wcet;
    Duration period_or_miat;
    std::optional<int> priority; // lower number = higher priority
    Duration deadline;
    SourceSpan span;
};

struct Parameter {
    std::string name;
    SourceSpan span;
    TypeRef type;
};

struct Operation {
    std::string name;
    SourceSpan span;
    std::vector<Parameter> parameters;
    std::optional<TimingAnnotation> timing;
};

enum class EventKind { General, Incoming, Outgoing };

struct IoTEvent {
    std::string name;
    SourceSpan span;
    EventKind kind = EventKind::General;
    std::optional<Ref> port;    // required when kind != General
    std::optional<Ref> payload;
    std::optional<Ref> effect;  // an IoTAction
};

enum class ActionKind { Send, Receive, Assign };

struct IoTAction {
    std::string name;
    SourceSpan span;
    ActionKind kind = ActionKind::Send;
    std::optional<Ref> payload;
    std::optional<Ref> port;
    std::optional<Ref> target_property; // Assign only
    std::optional<Literal> value;       // Assign only
};

struct IoTState {
    std::string name;
    SourceSpan span;
    std::optional<Ref> on_entry; // absence is a V004 violation
    std::optional<Ref> on_exit;
};

struct Transition {
    Ref source;
    Ref target;
    Ref trigger;
    std::optional<ExprPtr> guard;
    SourceSpan span;
};

struct StateMachine {
    std::string name;
    SourceSpan span;
    Ref initial;
    std::vector<IoTState> states;
    std::vector<Transition> transitions;
    std::vector<IoTEvent> events;
    std::vector<IoTAction> actions;
};

struct SoftwareComponent {
    std::string name;
    SourceSpan span;
    std::vector<SoftwareComponent> subcomponents;
    std::vector<ComponentPort> ports;
    std::vector<Payload> payloads;
    std::vector<Property> properties;
    std::vector<Operation> operations;
    std::optional<StateMachine> state_machine;
};

// ------------------------------------------------- hardware + deployment view

struct Processor {
    std::string name;
    SourceSpan span;
    int cores = 1;
};

struct DeploymentBinding {
    Ref component; // top level; subcomponents inherit the binding
    Ref processor;
    SourceSpan span;
};

// ------------------------------------------------------------ operational view

enum class ProtocolKind { Mqtt, Coap, Http, Amqp, Custom };

struct ProtocolDecl {
    std::string name;
    SourceSpan span;
    ProtocolKind kind = ProtocolKind::Mqtt;
    std::string custom_kind;  // kind == Custom
    std::optional<Ref> server;
};

struct ServerDecl {
    std::string name;
    SourceSpan span;
    std::string uri;
};

struct StorageDecl {
    std::string name;
    SourceSpan span;
    std::string capacity;
};

struct ModeDecl {
    std::string name;
    SourceSpan span;
};

struct OperationalConfig {
    std::vector<ProtocolDecl> protocols;
    std::vector<ServerDecl> servers;
    std::vector<StorageDecl> storage;
    std::vector<ModeDecl> modes;
};

// ---------------------------------------------------------------------- root

struct IoTModel {
    std::string name;
    SourceSpan span;
    SystemView system;
    std::vector<SoftwareComponent> software;
    std::vector<Processor> hardware;
    std::vector<DeploymentBinding> deployment;
    std::optional<OperationalConfig> operational;
};

// Structural equality ignores source spans throughout.
bool structurally_equal(const IoTModel& a, const IoTModel& b);
bool structurally_equal(const SoftwareComponent& a, const SoftwareComponent& b);

} // namespace iotforge
