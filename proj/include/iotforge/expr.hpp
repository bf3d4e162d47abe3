#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "iotforge/source_span.hpp"

namespace iotforge {

enum class PrimKind { Bool, Int, Real, String, Enum };

// A typed literal. Enum literals carry the member name in `text`.
struct Literal {
    PrimKind kind = PrimKind::Int;
    bool bool_value = false;
    std::int64_t int_value = 0;
    double real_value = 0.0;
    std::string text; // string value or enum member name

    static Literal boolean(bool v);
    static Literal integer(std::int64_t v);
    static Literal real(double v);
    static Literal string(std::string v);
    static Literal enum_member(std::string v);
};

bool operator==(const Literal& a, const Literal& b);

// Canonical source form, e.g. `true`, `42`, `3.5`, `"txt"`, `member`.
std::string literal_to_text(const Literal& lit);

// Shortest decimal form that parses back to the same double.
std::string real_to_text(double v);

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Boolean expression tree used by transition guards and contract text.
struct Expr {
    enum class Kind { Literal, Identifier, Compare, And, Or, Not };
    Kind kind = Kind::Literal;
    Literal literal;
    std::string ident;
    CompareOp op = CompareOp::Eq;
    ExprPtr lhs;
    ExprPtr rhs; // unused for Not
    SourceSpan span;
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// Renders with minimal parentheses; re-parsing yields an equal tree.
std::string expr_to_text(const ExprPtr& e);

struct ExprParseResult {
    ExprPtr expr;                 // null on failure
    std::string error;            // first error message
    SourceSpan error_span;
};

// Parses the guard/contract expression grammar. `origin` seeds spans so
// diagnostics can point into the enclosing file.
ExprParseResult parse_expression(std::string_view text, const SourceSpan& origin);

} // namespace iotforge
