#include "iotforge/formatter.hpp"

#include <sstream>

namespace iotforge {

namespace {

class Writer {
public:
    void open(const std::string& header) {
        line(header + " {");
        indent_++;
    }

    void close() {
        indent_--;
        line("}");
    }

    void line(const std::string& text) {
        for (int i = 0; i < indent_; ++i) out_ << "  ";
        out_ << text << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
    int indent_ = 0;
};

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

std::string flow_direction_text(FlowDirection d) {
    switch (d) {
    case FlowDirection::In: return "in";
    case FlowDirection::Out: return "out";
    case FlowDirection::InOut: return "inout";
    }
    return "in";
}

std::string ident_list(const std::vector<Ref>& refs) {
    std::string out;
    for (size_t i = 0; i < refs.size(); ++i) {
        if (i) out += ", ";
        out += refs[i].name;
    }
    return out;
}

std::string timing_text(const TimingAnnotation& t) {
    std::ostringstream os;
    os << "timing { kind: " << (t.kind == TimingKind::Periodic ? "periodic" : "sporadic")
       << " wcet: " << duration_to_text(t.wcet)
       << (t.kind == TimingKind::Periodic ? " period: " : " miat: ")
       << duration_to_text(t.period_or_miat);
    if (t.priority) os << " priority: " << *t.priority;
    os << " deadline: " << duration_to_text(t.deadline) << " }";
    return os.str();
}

void write_block(Writer& w, const SystemBlock& block) {
    std::string header = "block " + block.name;
    if (block.realizes) header += " realizes " + block.realizes->name;
    if (block.flow_ports.empty() && block.contracts.empty()) {
        w.line(header + " {}");
        return;
    }
    w.open(header);
    for (const auto& fp : block.flow_ports) {
        w.line("port " + flow_direction_text(fp.direction) + " " + fp.name + " : " +
               fp.payload_type.name + ";");
    }
    for (const auto& c : block.contracts) {
        w.open("contract " + c.name);
        w.line("assume " + quote(c.assume) + ";");
        w.line("guarantee " + quote(c.guarantee) + ";");
        w.close();
    }
    w.close();
}

void write_statemachine(Writer& w, const StateMachine& sm) {
    w.open("statemachine " + sm.name + " init " + sm.initial.name);
    for (const auto& s : sm.states) {
        if (!s.on_entry && !s.on_exit) {
            w.line("state " + s.name + " {}");
            continue;
        }
        w.open("state " + s.name);
        if (s.on_entry) w.line("onentry " + s.on_entry->name + ";");
        if (s.on_exit) w.line("onexit " + s.on_exit->name + ";");
        w.close();
    }
    for (const auto& e : sm.events) {
        std::string line = "event " + e.name + " kind ";
        switch (e.kind) {
        case EventKind::General: line += "general"; break;
        case EventKind::Incoming: line += "incoming"; break;
        case EventKind::Outgoing: line += "outgoing"; break;
        }
        if (e.port) line += " port " + e.port->name;
        if (e.payload) line += " payload " + e.payload->name;
        if (e.effect) line += " effect " + e.effect->name;
        w.line(line + ";");
    }
    for (const auto& a : sm.actions) {
        std::string line = "action " + a.name + " ";
        switch (a.kind) {
        case ActionKind::Send:
        case ActionKind::Receive:
            line += a.kind == ActionKind::Send ? "send " : "receive ";
            line += (a.payload ? a.payload->name : std::string("?"));
            line += " via ";
            line += (a.port ? a.port->name : std::string("?"));
            break;
        case ActionKind::Assign:
            line += "assign ";
            line += (a.target_property ? a.target_property->name : std::string("?"));
            line += " = ";
            line += a.value ? literal_to_text(*a.value) : std::string("0");
            break;
        }
        w.line(line + ";");
    }
    for (const auto& t : sm.transitions) {
        std::string line =
            "on " + t.trigger.name + " from " + t.source.name + " to " + t.target.name;
        if (t.guard && *t.guard) line += " guard [" + expr_to_text(*t.guard) + "]";
        w.line(line + ";");
    }
    w.close();
}

void write_component(Writer& w, const SoftwareComponent& comp) {
    bool empty = comp.ports.empty() && comp.payloads.empty() && comp.properties.empty() &&
                 comp.operations.empty() && !comp.state_machine && comp.subcomponents.empty();
    if (empty) {
        w.line("component " + comp.name + " {}");
        return;
    }
    w.open("component " + comp.name);
    for (const auto& p : comp.ports) {
        std::string line =
            std::string(p.kind == PortKind::Provided ? "provided" : "required") + " port " + p.name;
        if (!p.sends.empty()) line += " sends " + ident_list(p.sends);
        if (!p.receives.empty()) line += " receives " + ident_list(p.receives);
        w.line(line + ";");
    }
    for (const auto& p : comp.payloads) {
        if (p.fields.empty()) {
            w.line("payload " + p.name + " {}");
            continue;
        }
        w.open("payload " + p.name);
        for (const auto& f : p.fields) w.line(f.name + " : " + type_to_text(f.type) + ";");
        w.close();
    }
    for (const auto& p : comp.properties) {
        w.line("property " + p.name + " : " + type_to_text(p.type) + " = " +
               literal_to_text(p.initial) + ";");
    }
    for (const auto& op : comp.operations) {
        std::string line = "operation " + op.name + "(";
        for (size_t i = 0; i < op.parameters.size(); ++i) {
            if (i) line += ", ";
            line += op.parameters[i].name + " : " + type_to_text(op.parameters[i].type);
        }
        line += ")";
        if (op.timing) line += " " + timing_text(*op.timing);
        w.line(line + ";");
    }
    if (comp.state_machine) write_statemachine(w, *comp.state_machine);
    for (const auto& sub : comp.subcomponents) write_component(w, sub);
    w.close();
}

} // namespace

std::string format_model(const IoTModel& model) {
    Writer w;
    w.open("model " + model.name);
    if (!model.system.blocks.empty() || !model.system.connections.empty()) {
        w.open("system");
        for (const auto& b : model.system.blocks) write_block(w, b);
        for (const auto& c : model.system.connections) {
            w.line("connect " + c.from_owner.name + "." + c.from_port.name + " -> " +
                   c.to_owner.name + "." + c.to_port.name + ";");
        }
        w.close();
    }
    if (!model.software.empty()) {
        w.open("software");
        for (const auto& comp : model.software) write_component(w, comp);
        w.close();
    }
    if (!model.hardware.empty()) {
        w.open("hardware");
        for (const auto& p : model.hardware) {
            std::string line = "processor " + p.name;
            if (p.cores != 1) line += " cores " + std::to_string(p.cores);
            w.line(line + ";");
        }
        w.close();
    }
    if (!model.deployment.empty()) {
        w.open("deployment");
        for (const auto& b : model.deployment)
            w.line("bind " + b.component.name + " -> " + b.processor.name + ";");
        w.close();
    }
    if (model.operational) {
        // the section stays even when empty: presence is structural
        const auto& oc = *model.operational;
        w.open("operational");
        for (const auto& p : oc.protocols) {
            std::string line = "protocol " + p.name + " ";
            switch (p.kind) {
            case ProtocolKind::Mqtt: line += "mqtt"; break;
            case ProtocolKind::Coap: line += "coap"; break;
            case ProtocolKind::Http: line += "http"; break;
            case ProtocolKind::Amqp: line += "amqp"; break;
            case ProtocolKind::Custom: line += "custom " + quote(p.custom_kind); break;
            }
            if (p.server) line += " server " + p.server->name;
            w.line(line + ";");
        }
        for (const auto& s : oc.servers) w.line("server " + s.name + " " + quote(s.uri) + ";");
        for (const auto& s : oc.storage)
            w.line("storage " + s.name + " " + quote(s.capacity) + ";");
        for (const auto& m : oc.modes) w.line("mode " + m.name + ";");
        w.close();
    }
    w.close();
    return w.str();
}

} // namespace iotforge
