#include "iotforge/thingml.hpp"

#include <map>
#include <sstream>

namespace iotforge::thingml {

namespace {

std::string lower_first(std::string name) {
    if (!name.empty() && name[0] >= 'A' && name[0] <= 'Z')
        name[0] = static_cast<char>(name[0] - 'A' + 'a');
    return name;
}

std::string upper_first(std::string name) {
    if (!name.empty() && name[0] >= 'a' && name[0] <= 'z')
        name[0] = static_cast<char>(name[0] - 'a' + 'A');
    return name;
}

std::string map_literal(const Literal& lit) {
    switch (lit.kind) {
    case PrimKind::Bool: return lit.bool_value ? "true" : "false";
    case PrimKind::Int: return std::to_string(lit.int_value);
    case PrimKind::Real: return real_to_text(lit.real_value);
    case PrimKind::String: {
        std::string out = "\"";
        for (char c : lit.text) {
            if (c == '"' || c == '\\') out += '\\';
            out += c;
        }
        return out + "\"";
    }
    case PrimKind::Enum: return lit.text;
    }
    return "0";
}

const char* compare_op_text(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "==";
}

void render_guard(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
    case Expr::Kind::Literal: out += map_literal(e->literal); break;
    case Expr::Kind::Identifier: out += e->ident; break;
    case Expr::Kind::Compare:
        render_guard(e->lhs, out);
        out += ' ';
        out += compare_op_text(e->op);
        out += ' ';
        render_guard(e->rhs, out);
        break;
    case Expr::Kind::And:
        out += '(';
        render_guard(e->lhs, out);
        out += " and ";
        render_guard(e->rhs, out);
        out += ')';
        break;
    case Expr::Kind::Or:
        out += '(';
        render_guard(e->lhs, out);
        out += " or ";
        render_guard(e->rhs, out);
        out += ')';
        break;
    case Expr::Kind::Not:
        out += "not (";
        render_guard(e->lhs, out);
        out += ')';
        break;
    }
}

struct Mapper {
    const SymbolTable& table;
    Document doc;
    // payload message names per component qname
    std::map<std::string, std::map<std::string, std::string>> message_names;
    std::map<std::string, std::string> thing_of_component; // qname → thing name

    bool message_name_taken(const std::string& name) const {
        for (const auto& m : doc.messages)
            if (m.name == name) return true;
        return false;
    }

    const MessageDecl* find_message(const std::string& name) const {
        for (const auto& m : doc.messages)
            if (m.name == name) return &m;
        return nullptr;
    }

    bool enum_name_taken(const std::string& name) const {
        for (const auto& e : doc.enums)
            if (e.name == name) return true;
        return false;
    }

    std::string map_enum(const std::string& preferred, const std::vector<std::string>& members) {
        for (const auto& e : doc.enums)
            if (e.name == preferred && e.members == members) return e.name;
        std::string name = preferred;
        int suffix = 1;
        while (enum_name_taken(name)) name = preferred + std::to_string(suffix++);
        doc.enums.push_back({name, members});
        return name;
    }

    std::string map_type(const TypeRef& type, const std::string& enum_name_hint) {
        switch (type.kind) {
        case PrimKind::Bool: return "Boolean";
        case PrimKind::Int: return "Integer";
        case PrimKind::Real: return "Double";
        case PrimKind::String: return "String";
        case PrimKind::Enum: return map_enum(enum_name_hint, type.enum_members);
        }
        return "Integer";
    }

    // Payload → Message. Identical redeclarations across components share
    // one message; conflicting shapes get a thing-prefixed name.
    std::string map_payload(const Payload& payload, const std::string& thing_name,
                            const std::string& qname) {
        std::vector<std::pair<std::string, std::string>> params;
        for (const auto& field : payload.fields)
            params.emplace_back(field.name,
                                map_type(field.type, payload.name + "_" + field.name));
        std::string name = lower_first(payload.name);
        if (const MessageDecl* existing = find_message(name)) {
            if (existing->params != params) {
                std::string prefixed = lower_first(thing_name) + upper_first(payload.name);
                name = prefixed;
                int suffix = 1;
                while (find_message(name) && find_message(name)->params != params)
                    name = prefixed + std::to_string(suffix++);
            }
        }
        if (!find_message(name)) doc.messages.push_back({name, params});
        message_names[qname][payload.name] = name;
        return name;
    }

    std::string message_for(const std::string& qname, const std::string& payload) const {
        auto comp_it = message_names.find(qname);
        if (comp_it == message_names.end()) return lower_first(payload);
        auto it = comp_it->second.find(payload);
        return it == comp_it->second.end() ? lower_first(payload) : it->second;
    }

    // -------- statement rendering --------

    std::string send_statement(const ComponentInfo& info, const std::string& qname,
                               const std::string& port, const std::string& payload) const {
        std::string msg = message_for(qname, payload);
        std::string stmt = port + "!" + msg + "(";
        auto payload_it = info.payloads.find(payload);
        if (payload_it != info.payloads.end()) {
            const Payload& decl = *payload_it->second;
            for (size_t i = 0; i < decl.fields.size(); ++i) {
                if (i) stmt += ", ";
                auto prop = info.properties.find(decl.fields[i].name);
                if (prop != info.properties.end() &&
                    prop->second->type.kind == decl.fields[i].type.kind)
                    stmt += decl.fields[i].name;
                else if (decl.fields[i].type.kind == PrimKind::Enum)
                    stmt += decl.fields[i].type.enum_members.front();
                else if (decl.fields[i].type.kind == PrimKind::Bool)
                    stmt += "false";
                else if (decl.fields[i].type.kind == PrimKind::String)
                    stmt += "\"\"";
                else if (decl.fields[i].type.kind == PrimKind::Real)
                    stmt += "0.0";
                else
                    stmt += "0";
            }
        }
        return stmt + ")";
    }

    void action_statements(const ComponentInfo& info, const std::string& qname,
                           const std::string& action_name, std::vector<std::string>& out) const {
        auto it = info.actions.find(action_name);
        if (it == info.actions.end()) return;
        const IoTAction& action = *it->second;
        switch (action.kind) {
        case ActionKind::Send:
            if (action.port && action.payload)
                out.push_back(send_statement(info, qname, action.port->name,
                                             action.payload->name));
            break;
        case ActionKind::Receive:
            if (action.port && action.payload)
                out.push_back("// receive " + message_for(qname, action.payload->name) + " via " +
                              action.port->name);
            break;
        case ActionKind::Assign:
            if (action.target_property && action.value)
                out.push_back(action.target_property->name + " = " + map_literal(*action.value));
            break;
        }
    }

    // Event/Action → Event/Action: firing an event emits its payload (for
    // outgoing events) and runs its effect.
    void event_statements(const ComponentInfo& info, const std::string& qname,
                          const std::string& event_name, std::vector<std::string>& out) const {
        auto it = info.events.find(event_name);
        if (it == info.events.end()) return;
        const IoTEvent& event = *it->second;
        if (event.kind == EventKind::Outgoing && event.port && event.payload)
            out.push_back(send_statement(info, qname, event.port->name, event.payload->name));
        if (event.effect) action_statements(info, qname, event.effect->name, out);
    }

    // -------- per-component mapping --------

    void map_component(const SoftwareComponent& comp, const std::string& prefix,
                       const std::string& qname_prefix) {
        std::string thing_name = prefix.empty() ? comp.name : prefix + "_" + comp.name;
        std::string qname = qname_prefix.empty() ? comp.name : qname_prefix + "." + comp.name;
        const ComponentInfo& info = *table.find_component(qname);
        thing_of_component[qname] = thing_name;

        Thing thing;
        thing.name = thing_name;

        for (const auto& payload : comp.payloads) {
            std::string msg = map_payload(payload, thing_name, qname);
            thing.messages.push_back(msg);
            for (const auto& param : find_message(msg)->params) {
                if (enum_name_taken(param.second)) {
                    bool present = false;
                    for (const auto& e : thing.enums)
                        if (e == param.second) present = true;
                    if (!present) thing.enums.push_back(param.second);
                }
            }
        }
        for (const auto& prop : comp.properties) {
            ThingProperty tp;
            tp.name = prop.name;
            tp.type = map_type(prop.type, thing_name + "_" + prop.name);
            if (prop.type.kind == PrimKind::Enum && !enum_listed(thing, tp.type))
                thing.enums.push_back(tp.type);
            tp.init = map_literal(prop.initial);
            thing.properties.push_back(std::move(tp));
        }
        for (const auto& port : comp.ports) {
            ThingPort tp;
            tp.name = port.name;
            tp.provided = port.kind == PortKind::Provided;
            for (const auto& ref : port.sends) tp.sends.push_back(message_for(qname, ref.name));
            for (const auto& ref : port.receives)
                tp.receives.push_back(message_for(qname, ref.name));
            thing.ports.push_back(std::move(tp));
        }
        for (const auto& op : comp.operations) {
            ThingFunction fn;
            fn.name = op.name;
            for (const auto& param : op.parameters)
                fn.params.emplace_back(param.name,
                                       map_type(param.type, thing_name + "_" + param.name));
            thing.functions.push_back(std::move(fn));
        }
        if (comp.state_machine) thing.statechart = map_statechart(info, qname, *comp.state_machine);
        doc.things.push_back(std::move(thing));

        for (const auto& sub : comp.subcomponents) map_component(sub, thing_name, qname);
    }

    static bool enum_listed(const Thing& thing, const std::string& name) {
        for (const auto& e : thing.enums)
            if (e == name) return true;
        return false;
    }

    Statechart map_statechart(const ComponentInfo& info, const std::string& qname,
                              const StateMachine& sm) const {
        Statechart chart;
        chart.name = sm.name;
        chart.init = sm.initial.name;
        for (const auto& state : sm.states) {
            ChartState cs;
            cs.name = state.name;
            if (state.on_entry) event_statements(info, qname, state.on_entry->name, cs.on_entry);
            if (state.on_exit) event_statements(info, qname, state.on_exit->name, cs.on_exit);
            for (const auto& tr : sm.transitions) {
                if (tr.source.name != state.name) continue;
                ChartTransition ct;
                ct.target = tr.target.name;
                auto event_it = info.events.find(tr.trigger.name);
                if (event_it != info.events.end()) {
                    const IoTEvent& trigger = *event_it->second;
                    if (trigger.kind == EventKind::Incoming && trigger.port && trigger.payload) {
                        ct.event = trigger.port->name + "?" +
                                   message_for(qname, trigger.payload->name);
                    } else {
                        // general and outgoing triggers are spontaneous;
                        // the firing's emissions become actions
                        event_statements(info, qname, tr.trigger.name, ct.actions);
                    }
                    if (trigger.kind == EventKind::Incoming && trigger.effect)
                        action_statements(info, qname, trigger.effect->name, ct.actions);
                }
                if (tr.guard && *tr.guard) {
                    std::string guard;
                    render_guard(*tr.guard, guard);
                    ct.guard = guard;
                }
                cs.transitions.push_back(std::move(ct));
            }
            chart.states.push_back(std::move(cs));
        }
        return chart;
    }

    void map_configuration() {
        const IoTModel& model = table.model();
        doc.configuration.name = model.name;
        std::map<std::string, std::string> instance_of; // thing name → instance
        for (const auto& thing : doc.things) {
            std::string instance = lower_first(thing.name);
            int suffix = 1;
            auto taken = [&](const std::string& name) {
                for (const auto& [inst, th] : doc.configuration.instances)
                    if (inst == name) return true;
                return false;
            };
            while (taken(instance)) instance = lower_first(thing.name) + std::to_string(suffix++);
            doc.configuration.instances.emplace_back(instance, thing.name);
            instance_of[thing.name] = instance;
        }
        for (const auto& conn : model.system.connections) {
            // only component-to-component connectors appear; block pairs
            // have no thing counterpart
            auto from = thing_of_component.find(conn.from_owner.name);
            auto to = thing_of_component.find(conn.to_owner.name);
            if (from == thing_of_component.end() || to == thing_of_component.end()) continue;
            doc.configuration.connectors.push_back({instance_of[from->second],
                                                    conn.from_port.name,
                                                    instance_of[to->second],
                                                    conn.to_port.name});
        }
    }
};

void count_component(const SoftwareComponent& comp, CoverageReport& report) {
    report.counts[0] += 1;
    report.counts[1] += static_cast<int>(comp.ports.size());
    report.counts[2] += static_cast<int>(comp.operations.size());
    report.counts[3] += static_cast<int>(comp.properties.size());
    report.counts[4] += static_cast<int>(comp.payloads.size());
    if (comp.state_machine) {
        const StateMachine& sm = *comp.state_machine;
        report.counts[5] += static_cast<int>(sm.states.size() + sm.transitions.size());
        for (const auto& tr : sm.transitions)
            if (tr.guard && *tr.guard) report.counts[6] += 1;
        report.counts[7] += static_cast<int>(sm.events.size() + sm.actions.size());
    }
    for (const auto& sub : comp.subcomponents) count_component(sub, report);
}

} // namespace

Document map_model(const SymbolTable& table) {
    Mapper mapper{table, {}, {}, {}};
    for (const auto& comp : table.model().software) mapper.map_component(comp, "", "");
    mapper.map_configuration();
    return std::move(mapper.doc);
}

CoverageReport mapping_coverage(const SymbolTable& table) {
    CoverageReport report;
    for (const auto& comp : table.model().software) count_component(comp, report);
    return report;
}

namespace {

class Emitter {
public:
    void line(const std::string& text) {
        for (int i = 0; i < indent_; ++i) out_ << "    ";
        out_ << text << '\n';
    }
    void open(const std::string& header) {
        line(header + " {");
        indent_++;
    }
    void close() {
        indent_--;
        line("}");
    }
    // do ... end blocks
    void open_do(const std::string& header) {
        line(header);
        indent_++;
    }
    void close_end() {
        indent_--;
        line("end");
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    int indent_ = 0;
};

std::string param_list(const std::vector<std::pair<std::string, std::string>>& params) {
    std::string out;
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].first + " : " + params[i].second;
    }
    return out;
}

std::string emit_thing(const Document& doc, const Thing& thing) {
    Emitter e;
    e.line("// generated by iotforge -- do not edit");
    for (const auto& enum_name : thing.enums) {
        for (const auto& decl : doc.enums) {
            if (decl.name != enum_name) continue;
            std::string members;
            for (size_t i = 0; i < decl.members.size(); ++i) {
                if (i) members += ", ";
                members += decl.members[i];
            }
            e.line("enumeration " + decl.name + " { " + members + " }");
        }
    }
    e.open("thing " + thing.name);
    for (const auto& prop : thing.properties)
        e.line("property " + prop.name + " : " + prop.type + " = " + prop.init);
    for (const auto& msg_name : thing.messages) {
        for (const auto& msg : doc.messages)
            if (msg.name == msg_name)
                e.line("message " + msg.name + "(" + param_list(msg.params) + ");");
    }
    for (const auto& port : thing.ports) {
        e.open(std::string(port.provided ? "provided" : "required") + " port " + port.name);
        if (!port.sends.empty()) {
            std::string sends = "sends ";
            for (size_t i = 0; i < port.sends.size(); ++i) {
                if (i) sends += ", ";
                sends += port.sends[i];
            }
            e.line(sends);
        }
        if (!port.receives.empty()) {
            std::string receives = "receives ";
            for (size_t i = 0; i < port.receives.size(); ++i) {
                if (i) receives += ", ";
                receives += port.receives[i];
            }
            e.line(receives);
        }
        e.close();
    }
    for (const auto& fn : thing.functions) {
        e.open_do("function " + fn.name + "(" + param_list(fn.params) + ") do");
        e.line("// TODO: operation bodies are not modeled");
        e.close_end();
    }
    if (thing.statechart) {
        const Statechart& chart = *thing.statechart;
        e.open("statechart " + chart.name + " init " + chart.init);
        for (const auto& state : chart.states) {
            e.open("state " + state.name);
            if (!state.on_entry.empty()) {
                e.open_do("on entry do");
                for (const auto& stmt : state.on_entry) e.line(stmt);
                e.close_end();
            }
            if (!state.on_exit.empty()) {
                e.open_do("on exit do");
                for (const auto& stmt : state.on_exit) e.line(stmt);
                e.close_end();
            }
            for (const auto& tr : state.transitions) {
                std::string line = "transition -> " + tr.target;
                if (tr.event) line += " event " + *tr.event;
                if (tr.guard) line += " guard (" + *tr.guard + ")";
                if (tr.actions.empty()) {
                    e.line(line);
                } else {
                    e.open_do(line + " action do");
                    for (const auto& stmt : tr.actions) e.line(stmt);
                    e.close_end();
                }
            }
            e.close();
        }
        e.close();
    }
    e.close();
    return e.str();
}

std::string emit_configuration(const Document& doc) {
    Emitter e;
    e.line("// generated by iotforge -- do not edit");
    e.open("configuration " + doc.configuration.name);
    for (const auto& [instance, thing] : doc.configuration.instances)
        e.line("instance " + instance + " : " + thing);
    for (const auto& conn : doc.configuration.connectors)
        e.line("connector " + conn.from_instance + "." + conn.from_port + " => " +
               conn.to_instance + "." + conn.to_port);
    e.close();
    return e.str();
}

} // namespace

std::vector<std::pair<std::string, std::string>> emit(const Document& doc) {
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& thing : doc.things)
        files.emplace_back("things/" + thing.name + ".thingml", emit_thing(doc, thing));
    files.emplace_back("config/main.thingml", emit_configuration(doc));
    return files;
}

} // namespace iotforge::thingml
