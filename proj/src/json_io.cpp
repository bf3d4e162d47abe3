#include "iotforge/json_io.hpp"

#include <sstream>

#include <json.hpp>

namespace iotforge {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json type_json(const TypeRef& type) {
    ordered_json j;
    switch (type.kind) {
    case PrimKind::Bool: j["kind"] = "bool"; break;
    case PrimKind::Int: j["kind"] = "int"; break;
    case PrimKind::Real: j["kind"] = "real"; break;
    case PrimKind::String: j["kind"] = "string"; break;
    case PrimKind::Enum:
        j["kind"] = "enum";
        j["members"] = type.enum_members;
        break;
    }
    return j;
}

ordered_json literal_json(const Literal& lit) {
    ordered_json j;
    switch (lit.kind) {
    case PrimKind::Bool:
        j["kind"] = "bool";
        j["value"] = lit.bool_value;
        break;
    case PrimKind::Int:
        j["kind"] = "int";
        j["value"] = lit.int_value;
        break;
    case PrimKind::Real:
        j["kind"] = "real";
        j["value"] = lit.real_value;
        break;
    case PrimKind::String:
        j["kind"] = "string";
        j["value"] = lit.text;
        break;
    case PrimKind::Enum:
        j["kind"] = "enum";
        j["value"] = lit.text;
        break;
    }
    return j;
}

std::string fq(const std::string& scope, const std::string& name) {
    return scope.empty() ? name : scope + "." + name;
}

ordered_json component_json(const SoftwareComponent& comp, const std::string& qname) {
    ordered_json j;
    j["name"] = comp.name;
    j["qualified_name"] = qname;
    j["ports"] = ordered_json::array();
    for (const auto& port : comp.ports) {
        ordered_json p;
        p["name"] = port.name;
        p["kind"] = port.kind == PortKind::Provided ? "provided" : "required";
        p["sends"] = ordered_json::array();
        for (const auto& ref : port.sends) p["sends"].push_back(fq(qname, ref.name));
        p["receives"] = ordered_json::array();
        for (const auto& ref : port.receives) p["receives"].push_back(fq(qname, ref.name));
        j["ports"].push_back(std::move(p));
    }
    j["payloads"] = ordered_json::array();
    for (const auto& payload : comp.payloads) {
        ordered_json p;
        p["name"] = payload.name;
        p["fields"] = ordered_json::array();
        for (const auto& field : payload.fields) {
            ordered_json f;
            f["name"] = field.name;
            f["type"] = type_json(field.type);
            p["fields"].push_back(std::move(f));
        }
        j["payloads"].push_back(std::move(p));
    }
    j["properties"] = ordered_json::array();
    for (const auto& prop : comp.properties) {
        ordered_json p;
        p["name"] = prop.name;
        p["type"] = type_json(prop.type);
        p["initial"] = literal_json(prop.initial);
        j["properties"].push_back(std::move(p));
    }
    j["operations"] = ordered_json::array();
    for (const auto& op : comp.operations) {
        ordered_json o;
        o["name"] = op.name;
        o["parameters"] = ordered_json::array();
        for (const auto& param : op.parameters) {
            ordered_json p;
            p["name"] = param.name;
            p["type"] = type_json(param.type);
            o["parameters"].push_back(std::move(p));
        }
        if (op.timing) {
            ordered_json t;
            t["kind"] = op.timing->kind == TimingKind::Periodic ? "periodic" : "sporadic";
            t["wcet_us"] = op.timing->wcet.us;
            t["period_us"] = op.timing->period_or_miat.us;
            if (op.timing->priority) t["priority"] = *op.timing->priority;
            else t["priority"] = nullptr;
            t["deadline_us"] = op.timing->deadline.us;
            o["timing"] = std::move(t);
        } else {
            o["timing"] = nullptr;
        }
        j["operations"].push_back(std::move(o));
    }
    if (comp.state_machine) {
        const StateMachine& sm = *comp.state_machine;
        ordered_json m;
        m["name"] = sm.name;
        m["initial"] = fq(qname, sm.initial.name);
        m["states"] = ordered_json::array();
        for (const auto& state : sm.states) {
            ordered_json s;
            s["name"] = state.name;
            s["on_entry"] = state.on_entry ? ordered_json(fq(qname, state.on_entry->name))
                                           : ordered_json(nullptr);
            s["on_exit"] = state.on_exit ? ordered_json(fq(qname, state.on_exit->name))
                                         : ordered_json(nullptr);
            m["states"].push_back(std::move(s));
        }
        m["events"] = ordered_json::array();
        for (const auto& event : sm.events) {
            ordered_json e;
            e["name"] = event.name;
            switch (event.kind) {
            case EventKind::General: e["kind"] = "general"; break;
            case EventKind::Incoming: e["kind"] = "incoming"; break;
            case EventKind::Outgoing: e["kind"] = "outgoing"; break;
            }
            e["port"] = event.port ? ordered_json(fq(qname, event.port->name))
                                   : ordered_json(nullptr);
            e["payload"] = event.payload ? ordered_json(fq(qname, event.payload->name))
                                         : ordered_json(nullptr);
            e["effect"] = event.effect ? ordered_json(fq(qname, event.effect->name))
                                       : ordered_json(nullptr);
            m["events"].push_back(std::move(e));
        }
        m["actions"] = ordered_json::array();
        for (const auto& action : sm.actions) {
            ordered_json a;
            a["name"] = action.name;
            switch (action.kind) {
            case ActionKind::Send: a["kind"] = "send"; break;
            case ActionKind::Receive: a["kind"] = "receive"; break;
            case ActionKind::Assign: a["kind"] = "assign"; break;
            }
            a["payload"] = action.payload ? ordered_json(fq(qname, action.payload->name))
                                          : ordered_json(nullptr);
            a["port"] = action.port ? ordered_json(fq(qname, action.port->name))
                                    : ordered_json(nullptr);
            a["property"] = action.target_property
                                ? ordered_json(fq(qname, action.target_property->name))
                                : ordered_json(nullptr);
            a["value"] = action.value ? literal_json(*action.value) : ordered_json(nullptr);
            m["actions"].push_back(std::move(a));
        }
        m["transitions"] = ordered_json::array();
        for (const auto& tr : sm.transitions) {
            ordered_json t;
            t["source"] = fq(qname, tr.source.name);
            t["target"] = fq(qname, tr.target.name);
            t["trigger"] = fq(qname, tr.trigger.name);
            t["guard"] = tr.guard && *tr.guard ? ordered_json(expr_to_text(*tr.guard))
                                               : ordered_json(nullptr);
            m["transitions"].push_back(std::move(t));
        }
        j["state_machine"] = std::move(m);
    } else {
        j["state_machine"] = nullptr;
    }
    j["subcomponents"] = ordered_json::array();
    for (const auto& sub : comp.subcomponents)
        j["subcomponents"].push_back(component_json(sub, fq(qname, sub.name)));
    return j;
}

} // namespace

std::string model_to_json(const SymbolTable& table) {
    const IoTModel& model = table.model();
    ordered_json j;
    j["name"] = model.name;
    ordered_json system;
    system["blocks"] = ordered_json::array();
    for (const auto& block : model.system.blocks) {
        ordered_json b;
        b["name"] = block.name;
        b["realizes"] =
            block.realizes ? ordered_json(block.realizes->name) : ordered_json(nullptr);
        b["flow_ports"] = ordered_json::array();
        for (const auto& fp : block.flow_ports) {
            ordered_json p;
            p["name"] = fp.name;
            switch (fp.direction) {
            case FlowDirection::In: p["direction"] = "in"; break;
            case FlowDirection::Out: p["direction"] = "out"; break;
            case FlowDirection::InOut: p["direction"] = "inout"; break;
            }
            p["payload"] = fp.payload_type.name;
            b["flow_ports"].push_back(std::move(p));
        }
        b["contracts"] = ordered_json::array();
        for (const auto& c : block.contracts) {
            ordered_json contract;
            contract["name"] = c.name;
            contract["assume"] = c.assume;
            contract["guarantee"] = c.guarantee;
            b["contracts"].push_back(std::move(contract));
        }
        system["blocks"].push_back(std::move(b));
    }
    system["connections"] = ordered_json::array();
    for (const auto& conn : model.system.connections) {
        ordered_json c;
        c["from"] = conn.from_owner.name + "." + conn.from_port.name;
        c["to"] = conn.to_owner.name + "." + conn.to_port.name;
        system["connections"].push_back(std::move(c));
    }
    j["system"] = std::move(system);
    j["software"] = ordered_json::array();
    for (const auto& comp : model.software)
        j["software"].push_back(component_json(comp, comp.name));
    j["hardware"] = ordered_json::array();
    for (const auto& proc : model.hardware) {
        ordered_json p;
        p["name"] = proc.name;
        p["cores"] = proc.cores;
        j["hardware"].push_back(std::move(p));
    }
    j["deployment"] = ordered_json::array();
    for (const auto& binding : model.deployment) {
        ordered_json b;
        b["component"] = binding.component.name;
        b["processor"] = binding.processor.name;
        j["deployment"].push_back(std::move(b));
    }
    if (model.operational) {
        ordered_json oc;
        oc["protocols"] = ordered_json::array();
        for (const auto& p : model.operational->protocols) {
            ordered_json proto;
            proto["name"] = p.name;
            switch (p.kind) {
            case ProtocolKind::Mqtt: proto["kind"] = "mqtt"; break;
            case ProtocolKind::Coap: proto["kind"] = "coap"; break;
            case ProtocolKind::Http: proto["kind"] = "http"; break;
            case ProtocolKind::Amqp: proto["kind"] = "amqp"; break;
            case ProtocolKind::Custom: proto["kind"] = p.custom_kind; break;
            }
            proto["server"] = p.server ? ordered_json(p.server->name) : ordered_json(nullptr);
            oc["protocols"].push_back(std::move(proto));
        }
        oc["servers"] = ordered_json::array();
        for (const auto& s : model.operational->servers) {
            ordered_json server;
            server["name"] = s.name;
            server["uri"] = s.uri;
            oc["servers"].push_back(std::move(server));
        }
        oc["storage"] = ordered_json::array();
        for (const auto& s : model.operational->storage) {
            ordered_json storage;
            storage["name"] = s.name;
            storage["capacity"] = s.capacity;
            oc["storage"].push_back(std::move(storage));
        }
        oc["modes"] = ordered_json::array();
        for (const auto& m : model.operational->modes) oc["modes"].push_back(m.name);
        j["operational"] = std::move(oc);
    } else {
        j["operational"] = nullptr;
    }
    return dump(j);
}

std::string diagnostics_to_json(const std::vector<Diagnostic>& diagnostics) {
    ordered_json j = ordered_json::array();
    for (const auto& d : diagnostics) {
        ordered_json item;
        item["code"] = d.code;
        item["severity"] = d.severity == Severity::Error ? "error" : "warning";
        item["message"] = d.message;
        item["file"] = d.span.file;
        ordered_json span;
        span["start_line"] = d.span.start_line;
        span["start_col"] = d.span.start_col;
        span["end_line"] = d.span.end_line;
        span["end_col"] = d.span.end_col;
        item["span"] = std::move(span);
        j.push_back(std::move(item));
    }
    return dump(j);
}

std::string schedule_report_to_json(const ScheduleReport& report) {
    ordered_json j;
    j["processor"] = report.processor;
    j["cores"] = ordered_json::array();
    for (const auto& core : report.cores) {
        ordered_json c;
        c["core"] = core.core;
        c["utilization"] = core.utilization.to_string();
        c["tasks"] = ordered_json::array();
        for (size_t i = 0; i < core.tasks.size(); ++i) {
            const TaskSpec& task = core.tasks[i];
            const ResponseResult& result = core.results[i];
            ordered_json t;
            t["id"] = task.id();
            t["wcet_us"] = task.wcet.us;
            t["period_us"] = task.period_or_miat.us;
            t["priority"] = *task.priority;
            t["deadline_us"] = task.deadline.us;
            if (result.response) t["response_us"] = result.response->us;
            else t["response_us"] = "diverged";
            t["schedulable"] = result.schedulable;
            c["tasks"].push_back(std::move(t));
        }
        j["cores"].push_back(std::move(c));
    }
    j["verdict"] = verdict_to_text(report.verdict);
    return dump(j);
}

std::string schedule_report_to_text(const ScheduleReport& report) {
    std::ostringstream os;
    os << "processor " << report.processor << ": " << verdict_to_text(report.verdict) << '\n';
    for (const auto& core : report.cores) {
        os << "  core " << core.core << " (utilization " << core.utilization.to_string() << ")\n";
        for (size_t i = 0; i < core.tasks.size(); ++i) {
            const TaskSpec& task = core.tasks[i];
            const ResponseResult& result = core.results[i];
            os << "    [" << *task.priority << "] " << task.id() << " wcet "
               << duration_to_text(task.wcet) << " period " << duration_to_text(task.period_or_miat)
               << " deadline " << duration_to_text(task.deadline) << " response ";
            if (result.response) os << duration_to_text(*result.response);
            else os << "diverged";
            os << (result.schedulable ? " (ok)" : " (deadline miss)") << '\n';
        }
    }
    return os.str();
}

namespace {

ordered_json witness_json(const std::vector<Move>& witness) {
    ordered_json j = ordered_json::array();
    for (const auto& move : witness) {
        ordered_json m;
        m["component"] = move.component;
        m["transition"] = move.transition_index;
        m["assumed"] = move.assumed ? ordered_json(*move.assumed) : ordered_json(nullptr);
        j.push_back(std::move(m));
    }
    return j;
}

} // namespace

std::string exploration_report_to_json(const ExplorationReport& report) {
    ordered_json j;
    j["reachable_configs"] = report.reachable_configs;
    j["truncated"] = report.truncated;
    j["abstraction_used"] = report.abstraction_used;
    j["deadlocks"] = ordered_json::array();
    for (const auto& d : report.deadlocks) {
        ordered_json item;
        item["digest"] = d.digest;
        item["potential"] = d.potential;
        item["witness"] = witness_json(d.witness);
        j["deadlocks"].push_back(std::move(item));
    }
    j["overflows"] = ordered_json::array();
    for (const auto& o : report.overflows) {
        ordered_json item;
        item["digest"] = o.digest;
        item["component"] = o.component;
        item["witness"] = witness_json(o.witness);
        j["overflows"].push_back(std::move(item));
    }
    return dump(j);
}

} // namespace iotforge
