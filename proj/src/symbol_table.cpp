#include "iotforge/symbol_table.hpp"

#include <set>
#include <sstream>

namespace iotforge {

const ComponentInfo* SymbolTable::find_component(std::string_view qualified_name) const {
    auto it = components_.find(std::string(qualified_name));
    return it == components_.end() ? nullptr : &it->second;
}

const SystemBlock* SymbolTable::find_block(std::string_view name) const {
    auto it = blocks_.find(std::string(name));
    return it == blocks_.end() ? nullptr : it->second;
}

const Processor* SymbolTable::find_processor(std::string_view name) const {
    auto it = processors_.find(std::string(name));
    return it == processors_.end() ? nullptr : it->second;
}

const ServerDecl* SymbolTable::find_server(std::string_view name) const {
    auto it = servers_.find(std::string(name));
    return it == servers_.end() ? nullptr : it->second;
}

std::optional<std::string> SymbolTable::deployment_of(std::string_view top_level_component) const {
    auto it = deployment_.find(std::string(top_level_component));
    if (it == deployment_.end()) return std::nullopt;
    return it->second;
}

std::vector<SymbolTable::Attachment> SymbolTable::attachments(std::string_view component,
                                                              std::string_view port) const {
    auto it = attachments_.find({std::string(component), std::string(port)});
    if (it == attachments_.end()) return {};
    return it->second;
}

namespace {

std::string join_path(const std::string& prefix, const std::string& name) {
    return prefix.empty() ? name : prefix + "." + name;
}

} // namespace

struct TableBuilder {
    SymbolTable& table;
    std::vector<Diagnostic>& diags;

    void set_model(const IoTModel& model) { table.model_ = &model; }

    void error(const std::string& code, const std::string& message, const SourceSpan& span) {
        diags.push_back({Severity::Error, code, message, span});
    }

    void duplicate(const std::string& what, const std::string& name, const SourceSpan& span) {
        error("V001", "duplicate " + what + " '" + name + "'", span);
    }

    template <typename T>
    bool declare(std::map<std::string, T>& map, const std::string& what, const std::string& name,
                 T value, const SourceSpan& span) {
        if (name.empty()) return false; // parse error already reported
        auto [it, inserted] = map.emplace(name, value);
        if (!inserted) duplicate(what, name, span);
        return inserted;
    }

    // ---- declaration pass ----

    void collect(const IoTModel& model) {
        for (const auto& block : model.system.blocks)
            declare(table.blocks_, "block", block.name, &block, block.span);
        for (const auto& block : model.system.blocks) {
            std::set<std::string> port_names;
            for (const auto& fp : block.flow_ports)
                if (!port_names.insert(fp.name).second)
                    duplicate("flow-port", block.name + "." + fp.name, fp.span);
            std::set<std::string> contract_names;
            for (const auto& c : block.contracts)
                if (!contract_names.insert(c.name).second)
                    duplicate("contract", c.name, c.span);
        }
        std::set<std::string> top_names;
        for (const auto& comp : model.software) {
            if (!comp.name.empty() && !top_names.insert(comp.name).second)
                duplicate("component", comp.name, comp.span);
            collect_component(comp, "", comp.name);
        }
        for (const auto& proc : model.hardware)
            declare(table.processors_, "processor", proc.name, &proc, proc.span);
        if (model.operational) {
            for (const auto& s : model.operational->servers)
                declare(table.servers_, "server", s.name, &s, s.span);
            std::set<std::string> names;
            for (const auto& p : model.operational->protocols)
                if (!names.insert(p.name).second) duplicate("protocol", p.name, p.span);
            names.clear();
            for (const auto& s : model.operational->storage)
                if (!names.insert(s.name).second) duplicate("storage", s.name, s.span);
            names.clear();
            for (const auto& m : model.operational->modes)
                if (!names.insert(m.name).second) duplicate("mode", m.name, m.span);
        }
    }

    void collect_component(const SoftwareComponent& comp, const std::string& prefix,
                           const std::string& top_level) {
        std::string qname = join_path(prefix, comp.name);
        ComponentInfo info;
        info.component = &comp;
        info.qualified_name = qname;
        info.top_level = top_level;
        for (const auto& p : comp.ports)
            declare(info.ports, "port", p.name, &p, p.span);
        for (const auto& p : comp.payloads) {
            declare(info.payloads, "payload", p.name, &p, p.span);
            std::set<std::string> field_names;
            for (const auto& f : p.fields)
                if (!field_names.insert(f.name).second)
                    duplicate("payload field", p.name + "." + f.name, f.span);
        }
        for (const auto& p : comp.properties)
            declare(info.properties, "property", p.name, &p, p.span);
        for (const auto& op : comp.operations) {
            declare(info.operations, "operation", op.name, &op, op.span);
            std::set<std::string> param_names;
            for (const auto& param : op.parameters)
                if (!param_names.insert(param.name).second)
                    duplicate("parameter", op.name + "." + param.name, param.span);
        }
        if (comp.state_machine) {
            const auto& sm = *comp.state_machine;
            for (const auto& s : sm.states) declare(info.states, "state", s.name, &s, s.span);
            for (const auto& e : sm.events) declare(info.events, "event", e.name, &e, e.span);
            for (const auto& a : sm.actions) declare(info.actions, "action", a.name, &a, a.span);
        }
        table.components_.emplace(qname, std::move(info));
        std::set<std::string> child_names;
        for (const auto& sub : comp.subcomponents) {
            if (!sub.name.empty() && !child_names.insert(sub.name).second)
                duplicate("component", join_path(qname, sub.name), sub.span);
            collect_component(sub, qname, top_level);
        }
    }

    // ---- resolution pass ----

    void unresolved(const std::string& code, const std::string& what, const Ref& ref) {
        error(code, "unresolved " + what + " '" + ref.name + "'", ref.span);
    }

    void resolve(const IoTModel& model) {
        for (const auto& block : model.system.blocks) {
            if (block.realizes && !is_top_level(model, block.realizes->name))
                unresolved("R002", "component reference", *block.realizes);
            for (const auto& fp : block.flow_ports) {
                if (!payload_declared_anywhere(model, fp.payload_type.name))
                    unresolved("V009", "payload reference", fp.payload_type);
            }
        }
        for (size_t i = 0; i < model.system.connections.size(); ++i)
            resolve_connector(model.system.connections[i]);
        for (auto& [qname, info] : table.components_) resolve_component(info);
        std::set<std::string> bound;
        for (const auto& binding : model.deployment) {
            bool ok = true;
            if (!is_top_level(model, binding.component.name)) {
                unresolved("R002", "component reference", binding.component);
                ok = false;
            }
            if (!table.processors_.count(binding.processor.name)) {
                unresolved("R002", "processor reference", binding.processor);
                ok = false;
            }
            if (!ok) continue;
            if (!bound.insert(binding.component.name).second) {
                error("R001", "component '" + binding.component.name + "' bound more than once",
                      binding.span);
                continue;
            }
            table.deployment_[binding.component.name] = binding.processor.name;
        }
        if (model.operational) {
            for (const auto& p : model.operational->protocols)
                if (p.server && !table.servers_.count(p.server->name))
                    unresolved("V012", "server reference", *p.server);
        }
    }

    bool is_top_level(const IoTModel& model, const std::string& name) const {
        for (const auto& comp : model.software)
            if (comp.name == name) return true;
        return false;
    }

    bool payload_declared_anywhere(const IoTModel&, const std::string& name) const {
        for (const auto& [qname, info] : table.components_)
            if (info.payloads.count(name)) return true;
        return false;
    }

    void resolve_connector(const Connector& conn) {
        auto side = [&](const Ref& owner, const Ref& port_ref)
            -> std::optional<std::pair<Endpoint, bool>> {
            if (const SystemBlock* block = table.find_block(owner.name)) {
                bool found = false;
                for (const auto& fp : block->flow_ports)
                    if (fp.name == port_ref.name) found = true;
                if (!found) {
                    unresolved("R002", "flow-port reference", port_ref);
                    return std::nullopt;
                }
                return std::make_pair(Endpoint{owner.name, port_ref.name}, false);
            }
            auto it = table.components_.find(owner.name);
            if (it != table.components_.end() && it->second.top_level == owner.name) {
                if (!it->second.ports.count(port_ref.name)) {
                    unresolved("R002", "port reference", port_ref);
                    return std::nullopt;
                }
                return std::make_pair(Endpoint{owner.name, port_ref.name}, true);
            }
            unresolved("R002", "connector endpoint", owner);
            return std::nullopt;
        };
        auto from = side(conn.from_owner, conn.from_port);
        auto to = side(conn.to_owner, conn.to_port);
        if (!from || !to) return;
        table.attachments_[{from->first.component, from->first.port}].push_back(
            {to->first.component, to->first.port, to->second});
        table.attachments_[{to->first.component, to->first.port}].push_back(
            {from->first.component, from->first.port, from->second});
    }

    void resolve_component(ComponentInfo& info) {
        const SoftwareComponent& comp = *info.component;
        for (const auto& port : comp.ports) {
            for (const auto& ref : port.sends)
                if (!info.payloads.count(ref.name)) unresolved("V009", "payload reference", ref);
            for (const auto& ref : port.receives)
                if (!info.payloads.count(ref.name)) unresolved("V009", "payload reference", ref);
        }
        if (!comp.state_machine) return;
        const StateMachine& sm = *comp.state_machine;
        if (!sm.initial.name.empty() && !info.states.count(sm.initial.name))
            unresolved("V005", "state reference", sm.initial);
        for (const auto& state : sm.states) {
            if (state.on_entry && !info.events.count(state.on_entry->name))
                unresolved("V004", "event reference", *state.on_entry);
            if (state.on_exit && !info.events.count(state.on_exit->name))
                unresolved("V004", "event reference", *state.on_exit);
        }
        for (const auto& event : sm.events) {
            if (event.port && !info.ports.count(event.port->name))
                unresolved("R002", "port reference", *event.port);
            if (event.payload && !info.payloads.count(event.payload->name))
                unresolved("V009", "payload reference", *event.payload);
            if (event.effect && !info.actions.count(event.effect->name))
                unresolved("R002", "action reference", *event.effect);
        }
        for (const auto& action : sm.actions) {
            if (action.payload && !info.payloads.count(action.payload->name))
                unresolved("V009", "payload reference", *action.payload);
            if (action.port && !info.ports.count(action.port->name))
                unresolved("R002", "port reference", *action.port);
            if (action.target_property && !info.properties.count(action.target_property->name))
                unresolved("R002", "property reference", *action.target_property);
        }
        for (const auto& tr : sm.transitions) {
            if (!tr.source.name.empty() && !info.states.count(tr.source.name))
                unresolved("V005", "state reference", tr.source);
            if (!tr.target.name.empty() && !info.states.count(tr.target.name))
                unresolved("V005", "state reference", tr.target);
            if (!tr.trigger.name.empty() && !info.events.count(tr.trigger.name))
                unresolved("V005", "event reference", tr.trigger);
        }
    }
};

SymbolTableResult build_symbol_table(const IoTModel& model) {
    SymbolTableResult result;
    TableBuilder builder{result.table, result.diagnostics};
    builder.set_model(model);
    builder.collect(model);
    builder.resolve(model);
    sort_diagnostics(result.diagnostics);
    return result;
}

std::optional<Endpoint> connected_peer(const SymbolTable& table, std::string_view component,
                                       std::string_view port) {
    const ComponentInfo* info = table.find_component(component);
    if (!info) throw QueryError("unknown component '" + std::string(component) + "'");
    if (!info->ports.count(std::string(port)))
        throw QueryError("unknown port '" + std::string(component) + "." + std::string(port) +
                         "'");
    auto attached = table.attachments(component, port);
    if (attached.empty()) return std::nullopt;
    if (attached.size() > 1)
        throw QueryError("ambiguous connection: more than one connector attaches to '" +
                         std::string(component) + "." + std::string(port) + "'");
    if (!attached.front().peer_is_component) return std::nullopt;
    return Endpoint{attached.front().peer_owner, attached.front().peer_port};
}

} // namespace iotforge
