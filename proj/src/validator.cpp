#include "iotforge/validator.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "iotforge/guards.hpp"

namespace iotforge {

namespace {

struct RuleInfo {
    const char* code;
    const char* title;
    Severity severity;
    const char* description;
};

// Closed catalog; diagnostics reference these codes plus the parser's
// P001..P003 and the resolver's R001/R002.
const RuleInfo kRules[] = {
    {"V001", "unique names", Severity::Error,
     "Names must be unique within their namespace: components among siblings, and ports, "
     "payloads, properties, operations, states, events and actions within their component."},
    {"V002", "connector payload compatibility", Severity::Error,
     "Connected flow-ports must carry the same payload type; for component ports, every "
     "payload one side sends must appear in the peer port's receives list."},
    {"V003", "connector pairing", Severity::Error,
     "A connector joins one provided and one required component port, or two "
     "direction-compatible flow-ports (out/inout feeding in/inout). Connections are "
     "point-to-point: at most one connector per endpoint."},
    {"V004", "state entry/exit events", Severity::Error,
     "Every state must be associated with OnEntry and OnExit events, and both must resolve "
     "to declared events."},
    {"V005", "state machine integrity", Severity::Error,
     "A state machine has exactly one initial state, and every transition's source, target "
     "and trigger resolve to declared states and events."},
    {"V006", "event port direction", Severity::Error,
     "Incoming and outgoing events must name a port and a payload, and the port must carry "
     "the payload in the matching direction (receives for incoming, sends for outgoing)."},
    {"V007", "timing sanity", Severity::Error,
     "Timing annotations require 0 < wcet <= deadline <= period (or minimum inter-arrival "
     "time for sporadic requests)."},
    {"V008", "deployment coverage", Severity::Warning,
     "Components with behavior or timing annotations should be deployed to a processor; "
     "undeployed timing-annotated components are an error when analysis is requested."},
    {"V009", "payload declarations", Severity::Error,
     "Every payload referenced by ports, actions, events or flow-ports must be declared, "
     "and a component port must name at least one payload in sends or receives."},
    {"V010", "guard typing", Severity::Error,
     "Transition guards must type-check to boolean over the component's properties and the "
     "trigger payload's fields."},
    {"V011", "duplicate priorities", Severity::Warning,
     "Two tasks on the same processor share an explicit priority; the analysis breaks the "
     "tie deterministically by (deadline, component, operation)."},
    {"V012", "operational references", Severity::Error,
     "Protocol entries in the operational view that name a server must reference a declared "
     "server."},
};

const RuleInfo* find_rule(std::string_view code) {
    for (const auto& rule : kRules)
        if (code == rule.code) return &rule;
    return nullptr;
}

class Rules {
public:
    Rules(const SymbolTable& table, ValidationOptions options)
        : table_(table), model_(table.model()), options_(options) {}

    std::vector<Diagnostic> run() {
        check_connectors();
        check_components();
        check_deployment_coverage();
        check_duplicate_priorities();
        sort_diagnostics(diags_);
        return std::move(diags_);
    }

private:
    void report(const char* code, Severity severity, const std::string& message,
                const SourceSpan& span) {
        diags_.push_back({severity, code, message, span});
    }

    void error(const char* code, const std::string& message, const SourceSpan& span) {
        report(code, Severity::Error, message, span);
    }

    // V002 + V003 over every connector, plus the point-to-point rule.
    void check_connectors() {
        std::map<std::pair<std::string, std::string>, int> attach_count;
        for (const auto& conn : model_.system.connections) {
            const SystemBlock* from_block = table_.find_block(conn.from_owner.name);
            const SystemBlock* to_block = table_.find_block(conn.to_owner.name);
            const ComponentInfo* from_comp =
                from_block ? nullptr : table_.find_component(conn.from_owner.name);
            const ComponentInfo* to_comp =
                to_block ? nullptr : table_.find_component(conn.to_owner.name);
            attach_count[{conn.from_owner.name, conn.from_port.name}]++;
            attach_count[{conn.to_owner.name, conn.to_port.name}]++;

            if (from_block && to_block) {
                const FlowPort* fp = find_flow_port(*from_block, conn.from_port.name);
                const FlowPort* tp = find_flow_port(*to_block, conn.to_port.name);
                if (!fp || !tp) continue; // resolver reported
                if (fp->direction == FlowDirection::In)
                    error("V003",
                          "connector source flow-port '" + conn.from_port.name +
                              "' has direction in",
                          conn.span);
                if (tp->direction == FlowDirection::Out)
                    error("V003",
                          "connector target flow-port '" + conn.to_port.name +
                              "' has direction out",
                          conn.span);
                if (fp->payload_type.name != tp->payload_type.name)
                    error("V002",
                          "connected flow-ports carry different payloads ('" +
                              fp->payload_type.name + "' vs '" + tp->payload_type.name + "')",
                          conn.span);
            } else if (from_comp && to_comp) {
                const ComponentPort* fp = find_port(*from_comp, conn.from_port.name);
                const ComponentPort* tp = find_port(*to_comp, conn.to_port.name);
                if (!fp || !tp) continue;
                if (fp->kind == tp->kind)
                    error("V003",
                          "connector must join one provided and one required port, got two " +
                              std::string(fp->kind == PortKind::Provided ? "provided"
                                                                         : "required") +
                              " ports",
                          conn.span);
                check_send_receive(*fp, conn.from_owner.name, *tp, conn.to_owner.name, conn.span);
                check_send_receive(*tp, conn.to_owner.name, *fp, conn.from_owner.name, conn.span);
            } else if ((from_block && to_comp) || (from_comp && to_block)) {
                error("V003",
                      "connector mixes a system block and a software component endpoint",
                      conn.span);
            }
        }
        for (const auto& [endpoint, count] : attach_count) {
            if (count > 1) {
                SourceSpan span = model_.span;
                error("V003",
                      "port '" + endpoint.first + "." + endpoint.second + "' is attached to " +
                          std::to_string(count) + " connectors (connections are point-to-point)",
                      span);
            }
        }
    }

    void check_send_receive(const ComponentPort& sender, const std::string& sender_owner,
                            const ComponentPort& receiver, const std::string& receiver_owner,
                            const SourceSpan& span) {
        for (const auto& payload : sender.sends) {
            bool found = false;
            for (const auto& recv : receiver.receives)
                if (recv.name == payload.name) found = true;
            if (!found)
                error("V002",
                      "payload '" + payload.name + "' sent by " + sender_owner + "." +
                          sender.name + " is not received by " + receiver_owner + "." +
                          receiver.name,
                      span);
        }
    }

    static const FlowPort* find_flow_port(const SystemBlock& block, const std::string& name) {
        for (const auto& fp : block.flow_ports)
            if (fp.name == name) return &fp;
        return nullptr;
    }

    static const ComponentPort* find_port(const ComponentInfo& info, const std::string& name) {
        auto it = info.ports.find(name);
        return it == info.ports.end() ? nullptr : it->second;
    }

    static bool literal_matches(const Literal& lit, const TypeRef& type) {
        if (type.kind == PrimKind::Enum) {
            if (lit.kind != PrimKind::Enum) return false;
            for (const auto& member : type.enum_members)
                if (member == lit.text) return true;
            return false;
        }
        return lit.kind == type.kind;
    }

    void check_components() {
        for (const auto& [qname, info] : table_.components()) {
            const SoftwareComponent& comp = *info.component;
            for (const auto& prop : comp.properties) {
                if (!literal_matches(prop.initial, prop.type))
                    error("V010",
                          "initial value " + literal_to_text(prop.initial) +
                              " does not match the declared type " + type_to_text(prop.type) +
                              " of property '" + prop.name + "'",
                          prop.span);
            }
            for (const auto& port : comp.ports) {
                if (port.sends.empty() && port.receives.empty())
                    error("V009",
                          "port '" + qname + "." + port.name +
                              "' declares no payloads in sends or receives",
                          port.span);
            }
            for (const auto& op : comp.operations) {
                if (!op.timing) continue;
                const auto& t = *op.timing;
                if (t.wcet.us <= 0)
                    error("V007", "wcet must be positive", t.span);
                else if (t.wcet > t.deadline)
                    error("V007",
                          "wcet " + duration_to_text(t.wcet) + " exceeds deadline " +
                              duration_to_text(t.deadline),
                          t.span);
                if (t.deadline > t.period_or_miat)
                    error("V007",
                          "deadline " + duration_to_text(t.deadline) + " exceeds " +
                              (t.kind == TimingKind::Periodic ? "period "
                                                              : "minimum inter-arrival time ") +
                              duration_to_text(t.period_or_miat),
                          t.span);
                if (t.period_or_miat.us <= 0)
                    error("V007", "period must be positive", t.span);
            }
            if (comp.state_machine) check_state_machine(info, *comp.state_machine);
        }
    }

    void check_state_machine(const ComponentInfo& info, const StateMachine& sm) {
        for (const auto& state : sm.states) {
            if (!state.on_entry)
                error("V004", "state '" + state.name + "' is missing an OnEntry event",
                      state.span);
            if (!state.on_exit)
                error("V004", "state '" + state.name + "' is missing an OnExit event",
                      state.span);
        }
        for (const auto& event : sm.events) {
            if (event.kind == EventKind::General) continue;
            const char* kind_name = event.kind == EventKind::Incoming ? "incoming" : "outgoing";
            if (!event.port || !event.payload) {
                error("V006",
                      std::string(kind_name) + " event '" + event.name +
                          "' must name both a port and a payload",
                      event.span);
                continue;
            }
            auto port_it = info.ports.find(event.port->name);
            if (port_it == info.ports.end()) continue; // resolver reported
            const ComponentPort& port = *port_it->second;
            const auto& list = event.kind == EventKind::Incoming ? port.receives : port.sends;
            bool carried = false;
            for (const auto& ref : list)
                if (ref.name == event.payload->name) carried = true;
            if (!carried)
                error("V006",
                      "port '" + event.port->name + "' does not " +
                          (event.kind == EventKind::Incoming ? "receive" : "send") +
                          " payload '" + event.payload->name + "' required by event '" +
                          event.name + "'",
                      event.span);
        }
        for (const auto& action : sm.actions) {
            if (action.kind != ActionKind::Assign || !action.target_property || !action.value)
                continue;
            auto prop_it = info.properties.find(action.target_property->name);
            if (prop_it == info.properties.end()) continue; // resolver reported
            if (!literal_matches(*action.value, prop_it->second->type))
                error("V010",
                      "assigned value " + literal_to_text(*action.value) +
                          " does not match the declared type " +
                          type_to_text(prop_it->second->type) + " of property '" +
                          action.target_property->name + "'",
                      action.span);
        }
        for (const auto& tr : sm.transitions) {
            if (!tr.guard || !*tr.guard) continue;
            // only incoming triggers bind message fields in guards
            const Payload* trigger_payload = nullptr;
            auto event_it = info.events.find(tr.trigger.name);
            if (event_it != info.events.end() &&
                event_it->second->kind == EventKind::Incoming && event_it->second->payload) {
                auto payload_it = info.payloads.find(event_it->second->payload->name);
                if (payload_it != info.payloads.end()) trigger_payload = payload_it->second;
            }
            GuardCheck check = type_check_guard(*tr.guard, info, trigger_payload);
            if (!check.ok)
                error("V010", check.error,
                      check.span.file.empty() && check.span.start_line == 1 ? tr.span
                                                                            : check.span);
        }
    }

    void check_deployment_coverage() {
        for (const auto& [qname, info] : table_.components()) {
            if (table_.deployment_of(info.top_level)) continue;
            bool has_timing = false;
            for (const auto& op : info.component->operations)
                if (op.timing) has_timing = true;
            bool has_behavior = info.component->state_machine.has_value();
            if (!has_timing && !has_behavior) continue;
            bool escalate = has_timing && options_.analysis_requested;
            std::ostringstream msg;
            msg << "component '" << qname << "' has "
                << (has_timing ? "timing-annotated operations" : "a state machine")
                << " but is not deployed to any processor";
            report("V008", escalate ? Severity::Error : Severity::Warning, msg.str(),
                   info.component->span);
        }
    }

    void check_duplicate_priorities() {
        // processor → priority → tasks carrying it explicitly
        std::map<std::string, std::map<int, std::vector<std::string>>> by_processor;
        std::map<std::string, SourceSpan> spans;
        for (const auto& [qname, info] : table_.components()) {
            auto processor = table_.deployment_of(info.top_level);
            if (!processor) continue;
            for (const auto& op : info.component->operations) {
                if (!op.timing || !op.timing->priority) continue;
                std::string id = qname + "." + op.name;
                by_processor[*processor][*op.timing->priority].push_back(id);
                spans[id] = op.timing->span;
            }
        }
        for (const auto& [processor, priorities] : by_processor) {
            for (const auto& [priority, tasks] : priorities) {
                if (tasks.size() < 2) continue;
                std::ostringstream msg;
                msg << "priority " << priority << " on processor '" << processor
                    << "' is shared by";
                for (const auto& id : tasks) msg << " '" << id << "'";
                report("V011", Severity::Warning, msg.str(), spans[tasks.front()]);
            }
        }
    }

    const SymbolTable& table_;
    const IoTModel& model_;
    ValidationOptions options_;
    std::vector<Diagnostic> diags_;
};

} // namespace

std::vector<Diagnostic> run_rules(const SymbolTable& table, ValidationOptions options) {
    return Rules(table, options).run();
}

std::vector<Diagnostic> validate(const IoTModel& model, ValidationOptions options) {
    // The table is fully built even when resolution reports problems
    // (first declaration wins on duplicates, unresolved references are
    // skipped by the rules), so the rule pass always runs.
    SymbolTableResult built = build_symbol_table(model);
    std::vector<Diagnostic> diags = built.diagnostics;
    auto rule_diags = run_rules(built.table, options);
    diags.insert(diags.end(), rule_diags.begin(), rule_diags.end());
    sort_diagnostics(diags);
    return diags;
}

std::string explain_rule(std::string_view code) {
    const RuleInfo* rule = find_rule(code);
    if (!rule) throw QueryError("unknown rule '" + std::string(code) + "'");
    std::ostringstream os;
    os << rule->code << " (" << rule->title << ", "
       << (rule->severity == Severity::Error ? "error" : "warning") << "): " << rule->description;
    return os.str();
}

std::vector<std::string> rule_catalog() {
    std::vector<std::string> codes;
    for (const auto& rule : kRules) codes.push_back(rule.code);
    return codes;
}

namespace {

void fix_component(SoftwareComponent& comp) {
    if (comp.state_machine) {
        StateMachine& sm = *comp.state_machine;
        bool needs_event = false;
        for (const auto& state : sm.states)
            if (!state.on_entry || !state.on_exit) needs_event = true;
        if (needs_event) {
            std::string event_name = "evAuto";
            auto taken = [&](const std::string& name) {
                for (const auto& e : sm.events)
                    if (e.name == name) return true;
                return false;
            };
            int suffix = 0;
            while (taken(event_name))
                event_name = "evAuto" + std::to_string(++suffix);
            IoTEvent noop;
            noop.name = event_name;
            noop.kind = EventKind::General;
            sm.events.push_back(noop);
            for (auto& state : sm.states) {
                if (!state.on_entry) state.on_entry = Ref{event_name, state.span};
                if (!state.on_exit) state.on_exit = Ref{event_name, state.span};
            }
        }
    }
    for (auto& sub : comp.subcomponents) fix_component(sub);
}

} // namespace

IoTModel synthesize_missing_state_events(const IoTModel& model) {
    IoTModel fixed = model;
    for (auto& comp : fixed.software) fix_component(comp);
    return fixed;
}

} // namespace iotforge
