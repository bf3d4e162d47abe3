#include "iotforge/guards.hpp"

namespace iotforge {

namespace {

const TypeRef* lookup_ident(const std::string& name, const ComponentInfo& component,
                            const Payload* trigger_payload) {
    if (trigger_payload) {
        for (const auto& field : trigger_payload->fields)
            if (field.name == name) return &field.type;
    }
    auto it = component.properties.find(name);
    if (it != component.properties.end()) return &it->second->type;
    return nullptr;
}

bool is_numeric(PrimKind k) { return k == PrimKind::Int || k == PrimKind::Real; }

struct Checker {
    const ComponentInfo& component;
    const Payload* trigger_payload;
    GuardCheck result;

    void fail(const std::string& message, const SourceSpan& span) {
        if (!result.ok) return;
        result.ok = false;
        result.error = message;
        result.span = span;
    }

    std::optional<GuardType> check(const ExprPtr& e) {
        if (!e) {
            fail("empty guard expression", {});
            return std::nullopt;
        }
        switch (e->kind) {
        case Expr::Kind::Literal:
            return GuardType{e->literal.kind, nullptr};
        case Expr::Kind::Identifier: {
            const TypeRef* decl = lookup_ident(e->ident, component, trigger_payload);
            if (!decl) {
                fail("unknown identifier '" + e->ident + "' in guard", e->span);
                return std::nullopt;
            }
            return GuardType{decl->kind, decl};
        }
        case Expr::Kind::Compare: {
            auto lhs = check(e->lhs);
            auto rhs = check(e->rhs);
            if (!lhs || !rhs) return std::nullopt;
            bool equality_only = e->op == CompareOp::Eq || e->op == CompareOp::Ne;
            if (is_numeric(lhs->kind) && is_numeric(rhs->kind))
                return GuardType{PrimKind::Bool, nullptr};
            if (lhs->kind == rhs->kind &&
                (lhs->kind == PrimKind::Bool || lhs->kind == PrimKind::String)) {
                if (!equality_only) {
                    fail("ordering comparison needs numeric operands", e->span);
                    return std::nullopt;
                }
                return GuardType{PrimKind::Bool, nullptr};
            }
            // enum against a string literal naming one of its members
            auto enum_vs_string = [&](const std::optional<GuardType>& en,
                                      const ExprPtr& other) -> bool {
                if (en->kind != PrimKind::Enum || !en->decl) return false;
                if (other->kind != Expr::Kind::Literal ||
                    other->literal.kind != PrimKind::String)
                    return false;
                for (const auto& member : en->decl->enum_members)
                    if (member == other->literal.text) return true;
                fail("'" + other->literal.text + "' is not a member of " +
                         type_to_text(*en->decl),
                     other->span);
                return false;
            };
            if (lhs->kind == PrimKind::Enum || rhs->kind == PrimKind::Enum) {
                if (!equality_only) {
                    fail("enum values only support = and !=", e->span);
                    return std::nullopt;
                }
                if (lhs->kind == PrimKind::Enum && rhs->kind == PrimKind::Enum) {
                    if (lhs->decl && rhs->decl &&
                        lhs->decl->enum_members == rhs->decl->enum_members)
                        return GuardType{PrimKind::Bool, nullptr};
                    fail("enum operands have different member sets", e->span);
                    return std::nullopt;
                }
                bool ok = lhs->kind == PrimKind::Enum ? enum_vs_string(lhs, e->rhs)
                                                      : enum_vs_string(rhs, e->lhs);
                if (!ok && result.ok)
                    fail("enum values compare against quoted member names", e->span);
                return ok ? std::optional<GuardType>(GuardType{PrimKind::Bool, nullptr})
                          : std::nullopt;
            }
            fail("type mismatch in comparison", e->span);
            return std::nullopt;
        }
        case Expr::Kind::And:
        case Expr::Kind::Or: {
            auto lhs = check(e->lhs);
            auto rhs = check(e->rhs);
            if (!lhs || !rhs) return std::nullopt;
            if (lhs->kind != PrimKind::Bool || rhs->kind != PrimKind::Bool) {
                fail("boolean connective needs boolean operands", e->span);
                return std::nullopt;
            }
            return GuardType{PrimKind::Bool, nullptr};
        }
        case Expr::Kind::Not: {
            auto operand = check(e->lhs);
            if (!operand) return std::nullopt;
            if (operand->kind != PrimKind::Bool) {
                fail("'not' needs a boolean operand", e->span);
                return std::nullopt;
            }
            return GuardType{PrimKind::Bool, nullptr};
        }
        }
        return std::nullopt;
    }
};

} // namespace

GuardCheck type_check_guard(const ExprPtr& expr, const ComponentInfo& component,
                            const Payload* trigger_payload) {
    Checker checker{component, trigger_payload, {}};
    auto type = checker.check(expr);
    if (type && type->kind != PrimKind::Bool)
        checker.fail("guard must be a boolean expression", expr->span);
    return checker.result;
}

bool guard_mentions_unbounded_property(const ExprPtr& expr, const ComponentInfo& component,
                                       const Payload* trigger_payload) {
    if (!expr) return false;
    if (expr->kind == Expr::Kind::Identifier) {
        // payload fields shadow properties and carry concrete message values
        if (trigger_payload) {
            for (const auto& field : trigger_payload->fields)
                if (field.name == expr->ident) return false;
        }
        auto it = component.properties.find(expr->ident);
        if (it == component.properties.end()) return false;
        PrimKind k = it->second->type.kind;
        return k == PrimKind::Int || k == PrimKind::Real || k == PrimKind::String;
    }
    return guard_mentions_unbounded_property(expr->lhs, component, trigger_payload) ||
           guard_mentions_unbounded_property(expr->rhs, component, trigger_payload);
}

} // namespace iotforge
