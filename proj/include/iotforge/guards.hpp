#pragma once

#include <optional>
#include <string>

#include "iotforge/expr.hpp"
#include "iotforge/symbol_table.hpp"

namespace iotforge {

// Static type of a guard subexpression. Identifiers resolve against the
// trigger event's payload fields first, then the component's properties.
struct GuardType {
    PrimKind kind = PrimKind::Bool;
    const TypeRef* decl = nullptr; // set for identifiers (enum member checks)
};

struct GuardCheck {
    bool ok = true;
    std::string error;
    SourceSpan span;
};

// Checks that the expression type-checks to boolean under the component's
// declarations. `trigger_payload` may be null for spontaneous triggers.
GuardCheck type_check_guard(const ExprPtr& expr, const ComponentInfo& component,
                            const Payload* trigger_payload);

// True when the guard mentions a property with an unbounded domain
// (int, real or string); such guards are explored nondeterministically.
bool guard_mentions_unbounded_property(const ExprPtr& expr, const ComponentInfo& component,
                                       const Payload* trigger_payload);

} // namespace iotforge
