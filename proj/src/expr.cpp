#include "iotforge/expr.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace iotforge {

Literal Literal::boolean(bool v) {
    Literal l;
    l.kind = PrimKind::Bool;
    l.bool_value = v;
    return l;
}

Literal Literal::integer(std::int64_t v) {
    Literal l;
    l.kind = PrimKind::Int;
    l.int_value = v;
    return l;
}

Literal Literal::real(double v) {
    Literal l;
    l.kind = PrimKind::Real;
    l.real_value = v;
    return l;
}

Literal Literal::string(std::string v) {
    Literal l;
    l.kind = PrimKind::String;
    l.text = std::move(v);
    return l;
}

Literal Literal::enum_member(std::string v) {
    Literal l;
    l.kind = PrimKind::Enum;
    l.text = std::move(v);
    return l;
}

bool operator==(const Literal& a, const Literal& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
    case PrimKind::Bool: return a.bool_value == b.bool_value;
    case PrimKind::Int: return a.int_value == b.int_value;
    case PrimKind::Real: return a.real_value == b.real_value;
    case PrimKind::String:
    case PrimKind::Enum: return a.text == b.text;
    }
    return false;
}

static std::string escape_string(const std::string& s) {
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

std::string real_to_text(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, ptr);
    // keep reals distinguishable from ints on re-parse
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string literal_to_text(const Literal& lit) {
    switch (lit.kind) {
    case PrimKind::Bool: return lit.bool_value ? "true" : "false";
    case PrimKind::Int: return std::to_string(lit.int_value);
    case PrimKind::Real: return real_to_text(lit.real_value);
    case PrimKind::String: return escape_string(lit.text);
    case PrimKind::Enum: return lit.text;
    }
    return {};
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
    case Expr::Kind::Literal: return a->literal == b->literal;
    case Expr::Kind::Identifier: return a->ident == b->ident;
    case Expr::Kind::Compare:
        return a->op == b->op && expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    case Expr::Kind::And:
    case Expr::Kind::Or:
        return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    case Expr::Kind::Not: return expr_equal(a->lhs, b->lhs);
    }
    return false;
}

static const char* op_text(CompareOp op) {
    switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
    }
    return "=";
}

// precedence: or < and < not < compare < atoms
static int precedence(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Or: return 1;
    case Expr::Kind::And: return 2;
    case Expr::Kind::Not: return 3;
    case Expr::Kind::Compare: return 4;
    default: return 6;
    }
}

static void render(const ExprPtr& e, int parent_prec, std::string& out) {
    int prec = precedence(*e);
    bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (e->kind) {
    case Expr::Kind::Literal: out += literal_to_text(e->literal); break;
    case Expr::Kind::Identifier: out += e->ident; break;
    case Expr::Kind::Compare:
        // comparison operands must be atoms or parenthesized
        render(e->lhs, 5, out);
        out += ' ';
        out += op_text(e->op);
        out += ' ';
        render(e->rhs, 5, out);
        break;
    case Expr::Kind::And:
        render(e->lhs, 2, out);
        out += " and ";
        render(e->rhs, 3, out);
        break;
    case Expr::Kind::Or:
        render(e->lhs, 1, out);
        out += " or ";
        render(e->rhs, 2, out);
        break;
    case Expr::Kind::Not:
        out += "not ";
        render(e->lhs, 3, out);
        break;
    }
    if (parens) out += ')';
}

std::string expr_to_text(const ExprPtr& e) {
    std::string out;
    if (e) render(e, 0, out);
    return out;
}

// ------------------------------------------------------------ expression parser

namespace {

struct ExprToken {
    enum class Kind { Ident, Int, Real, String, Op, LParen, RParen, End } kind;
    std::string text;
    std::int64_t int_value = 0;
    double real_value = 0.0;
    int offset = 0;
};

class ExprLexer {
public:
    explicit ExprLexer(std::string_view src) : src_(src) {}

    ExprToken next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) pos_++;
        ExprToken t;
        t.offset = static_cast<int>(pos_);
        if (pos_ >= src_.size()) {
            t.kind = ExprToken::Kind::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                pos_++;
            t.kind = ExprToken::Kind::Ident;
            t.text = std::string(src_.substr(start, pos_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            size_t start = pos_;
            pos_++;
            bool is_real = false;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    pos_++;
                } else if (d == '.' && !is_real) {
                    is_real = true;
                    pos_++;
                } else if ((d == 'e' || d == 'E') && pos_ + 1 < src_.size()) {
                    is_real = true;
                    pos_++;
                    if (src_[pos_] == '+' || src_[pos_] == '-') pos_++;
                } else {
                    break;
                }
            }
            std::string text(src_.substr(start, pos_ - start));
            if (is_real) {
                t.kind = ExprToken::Kind::Real;
                t.real_value = std::strtod(text.c_str(), nullptr);
            } else {
                t.kind = ExprToken::Kind::Int;
                t.int_value = std::strtoll(text.c_str(), nullptr, 10);
            }
            t.text = std::move(text);
            return t;
        }
        if (c == '"') {
            pos_++;
            std::string value;
            while (pos_ < src_.size() && src_[pos_] != '"') {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                    pos_++;
                    switch (src_[pos_]) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    default: value += src_[pos_];
                    }
                } else {
                    value += src_[pos_];
                }
                pos_++;
            }
            if (pos_ >= src_.size()) {
                t.kind = ExprToken::Kind::End;
                t.text = "unterminated string";
                error_ = true;
                return t;
            }
            pos_++; // closing quote
            t.kind = ExprToken::Kind::String;
            t.text = std::move(value);
            return t;
        }
        if (c == '(') {
            pos_++;
            t.kind = ExprToken::Kind::LParen;
            return t;
        }
        if (c == ')') {
            pos_++;
            t.kind = ExprToken::Kind::RParen;
            return t;
        }
        // operators: = == != < <= > >=
        static const char* ops[] = {"==", "!=", "<=", ">=", "=", "<", ">"};
        for (const char* op : ops) {
            std::string_view sv(op);
            if (src_.substr(pos_, sv.size()) == sv) {
                pos_ += sv.size();
                t.kind = ExprToken::Kind::Op;
                t.text = std::string(sv);
                return t;
            }
        }
        error_ = true;
        t.kind = ExprToken::Kind::End;
        t.text = std::string("unexpected character '") + c + "'";
        return t;
    }

    bool had_error() const { return error_; }

private:
    std::string_view src_;
    size_t pos_ = 0;
    bool error_ = false;
};

class ExprParser {
public:
    ExprParser(std::string_view src, const SourceSpan& origin)
        : lexer_(src), origin_(origin) {
        advance();
    }

    ExprParseResult run() {
        ExprParseResult result;
        ExprPtr e = parse_or();
        if (!failed_ && tok_.kind != ExprToken::Kind::End) fail("unexpected trailing input");
        if (failed_) {
            result.error = error_;
            result.error_span = span_at(error_offset_);
            return result;
        }
        result.expr = std::move(e);
        return result;
    }

private:
    void advance() {
        tok_ = lexer_.next();
        if (lexer_.had_error() && !failed_) fail(tok_.text);
    }

    void fail(const std::string& msg) {
        if (failed_) return;
        failed_ = true;
        error_ = msg;
        error_offset_ = tok_.offset;
    }

    SourceSpan span_at(int offset) const {
        SourceSpan s = origin_;
        s.start_col += offset;
        s.end_col = s.start_col;
        return s;
    }

    ExprPtr make(Expr e) const {
        return std::make_shared<const Expr>(std::move(e));
    }

    ExprPtr parse_or() {
        ExprPtr left = parse_and();
        while (!failed_ && tok_.kind == ExprToken::Kind::Ident && tok_.text == "or") {
            advance();
            ExprPtr right = parse_and();
            Expr e;
            e.kind = Expr::Kind::Or;
            e.lhs = std::move(left);
            e.rhs = std::move(right);
            e.span = origin_;
            left = make(std::move(e));
        }
        return left;
    }

    ExprPtr parse_and() {
        ExprPtr left = parse_unary();
        while (!failed_ && tok_.kind == ExprToken::Kind::Ident && tok_.text == "and") {
            advance();
            ExprPtr right = parse_unary();
            Expr e;
            e.kind = Expr::Kind::And;
            e.lhs = std::move(left);
            e.rhs = std::move(right);
            e.span = origin_;
            left = make(std::move(e));
        }
        return left;
    }

    ExprPtr parse_unary() {
        if (tok_.kind == ExprToken::Kind::Ident && tok_.text == "not") {
            advance();
            Expr e;
            e.kind = Expr::Kind::Not;
            e.lhs = parse_unary();
            e.span = origin_;
            return make(std::move(e));
        }
        return parse_primary();
    }

    ExprPtr parse_primary() {
        if (tok_.kind == ExprToken::Kind::LParen) {
            advance();
            ExprPtr inner = parse_or();
            if (tok_.kind != ExprToken::Kind::RParen) {
                fail("expected ')'");
                return inner;
            }
            advance();
            return maybe_comparison(std::move(inner));
        }
        ExprPtr atom = parse_atom();
        return maybe_comparison(std::move(atom));
    }

    ExprPtr maybe_comparison(ExprPtr left) {
        if (failed_ || tok_.kind != ExprToken::Kind::Op) return left;
        CompareOp op;
        if (tok_.text == "=" || tok_.text == "==") op = CompareOp::Eq;
        else if (tok_.text == "!=") op = CompareOp::Ne;
        else if (tok_.text == "<") op = CompareOp::Lt;
        else if (tok_.text == "<=") op = CompareOp::Le;
        else if (tok_.text == ">") op = CompareOp::Gt;
        else op = CompareOp::Ge;
        advance();
        ExprPtr right =
            tok_.kind == ExprToken::Kind::LParen ? parse_primary() : parse_atom();
        Expr e;
        e.kind = Expr::Kind::Compare;
        e.op = op;
        e.lhs = std::move(left);
        e.rhs = std::move(right);
        e.span = origin_;
        return make(std::move(e));
    }

    ExprPtr parse_atom() {
        Expr e;
        e.span = span_at(tok_.offset);
        switch (tok_.kind) {
        case ExprToken::Kind::Ident:
            if (tok_.text == "true" || tok_.text == "false") {
                e.kind = Expr::Kind::Literal;
                e.literal = Literal::boolean(tok_.text == "true");
            } else if (tok_.text == "and" || tok_.text == "or" || tok_.text == "not") {
                fail("expected operand, found '" + tok_.text + "'");
                return make(std::move(e));
            } else {
                e.kind = Expr::Kind::Identifier;
                e.ident = tok_.text;
            }
            break;
        case ExprToken::Kind::Int:
            e.kind = Expr::Kind::Literal;
            e.literal = Literal::integer(tok_.int_value);
            break;
        case ExprToken::Kind::Real:
            e.kind = Expr::Kind::Literal;
            e.literal = Literal::real(tok_.real_value);
            break;
        case ExprToken::Kind::String:
            e.kind = Expr::Kind::Literal;
            e.literal = Literal::string(tok_.text);
            break;
        default:
            fail("expected operand");
            return make(std::move(e));
        }
        advance();
        return make(std::move(e));
    }

    ExprLexer lexer_;
    SourceSpan origin_;
    ExprToken tok_;
    bool failed_ = false;
    std::string error_;
    int error_offset_ = 0;
};

} // namespace

ExprParseResult parse_expression(std::string_view text, const SourceSpan& origin) {
    return ExprParser(text, origin).run();
}

} // namespace iotforge
