#include "iotforge/parser.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <set>
#include <sstream>

namespace iotforge {

namespace {

enum class TokKind {
    Ident,
    Int,
    Real,
    String,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Semicolon,
    Comma,
    Dot,
    Arrow,
    Equals,
    Minus,
    CompareOp, // <, <=, >, >=, !=, == (guard text only)
    End,
};

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    std::int64_t int_value = 0;
    double real_value = 0.0;
    SourceSpan span;
    size_t offset = 0; // byte offset of first character
};

const char* tok_kind_name(TokKind k) {
    switch (k) {
    case TokKind::Ident: return "identifier";
    case TokKind::Int: return "integer";
    case TokKind::Real: return "number";
    case TokKind::String: return "string";
    case TokKind::LBrace: return "'{'";
    case TokKind::RBrace: return "'}'";
    case TokKind::LParen: return "'('";
    case TokKind::RParen: return "')'";
    case TokKind::LBracket: return "'['";
    case TokKind::RBracket: return "']'";
    case TokKind::Colon: return "':'";
    case TokKind::Semicolon: return "';'";
    case TokKind::Comma: return "','";
    case TokKind::Dot: return "'.'";
    case TokKind::Arrow: return "'->'";
    case TokKind::Equals: return "'='";
    case TokKind::Minus: return "'-'";
    case TokKind::CompareOp: return "comparison operator";
    case TokKind::End: return "end of input";
    }
    return "?";
}

const std::set<std::string, std::less<>>& reserved_words() {
    static const std::set<std::string, std::less<>> words = {
        "model",     "system",    "software",  "hardware", "deployment", "operational",
        "block",     "port",      "in",        "out",      "inout",      "connect",
        "component", "provided",  "required",  "sends",    "receives",   "payload",
        "property",  "operation", "timing",    "kind",     "periodic",   "sporadic",
        "wcet",      "period",    "miat",      "priority", "deadline",   "statemachine",
        "init",      "state",     "onentry",   "onexit",   "event",      "general",
        "incoming",  "outgoing",  "effect",    "action",   "send",       "receive",
        "via",       "assign",    "on",        "from",     "to",         "guard",
        "and",       "or",        "not",       "true",     "false",      "processor",
        "cores",     "bind",      "contract",  "assume",   "guarantee",  "protocol",
        "server",    "storage",   "mode",      "bool",     "int",        "real",
        "string",    "enum",      "realizes",
    };
    return words;
}

class Lexer {
public:
    Lexer(std::string_view src, const std::string& file) : src_(src), file_(file) {}

    std::vector<Token> run(std::vector<Diagnostic>& diags) {
        std::vector<Token> out;
        while (true) {
            Token t = next(diags);
            bool at_end = t.kind == TokKind::End;
            out.push_back(std::move(t));
            if (at_end) break;
        }
        return out;
    }

private:
    Token next(std::vector<Diagnostic>& diags) {
        skip_trivia();
        Token t;
        t.offset = pos_;
        t.span = point_span();
        if (pos_ >= src_.size()) {
            t.kind = TokKind::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                take();
            t.kind = TokKind::Ident;
            t.text = std::string(src_.substr(start, pos_ - start));
            t.span = close_span(t.span);
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = pos_;
            bool is_real = false;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isdigit(static_cast<unsigned char>(d))) {
                    take();
                } else if (d == '.' && !is_real && pos_ + 1 < src_.size() &&
                           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1]))) {
                    is_real = true;
                    take();
                } else if ((d == 'e' || d == 'E') && pos_ + 1 < src_.size() &&
                           (std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])) ||
                            src_[pos_ + 1] == '+' || src_[pos_ + 1] == '-')) {
                    is_real = true;
                    take();
                    if (src_[pos_] == '+' || src_[pos_] == '-') take();
                } else {
                    break;
                }
            }
            std::string text(src_.substr(start, pos_ - start));
            if (is_real) {
                t.kind = TokKind::Real;
                t.real_value = std::strtod(text.c_str(), nullptr);
            } else {
                t.kind = TokKind::Int;
                t.int_value = std::strtoll(text.c_str(), nullptr, 10);
            }
            t.text = std::move(text);
            t.span = close_span(t.span);
            return t;
        }
        if (c == '"') {
            take();
            std::string value;
            while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') {
                if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
                    take();
                    switch (src_[pos_]) {
                    case 'n': value += '\n'; break;
                    case 't': value += '\t'; break;
                    case 'r': value += '\r'; break;
                    default: value += src_[pos_];
                    }
                    take();
                } else {
                    value += src_[pos_];
                    take();
                }
            }
            if (pos_ >= src_.size() || src_[pos_] != '"') {
                t.span = close_span(t.span);
                diags.push_back({Severity::Error, "P001", "unterminated string literal", t.span});
                t.kind = TokKind::String;
                t.text = std::move(value);
                return t;
            }
            take();
            t.kind = TokKind::String;
            t.text = std::move(value);
            t.span = close_span(t.span);
            return t;
        }
        switch (c) {
        case '{': take(); t.kind = TokKind::LBrace; break;
        case '}': take(); t.kind = TokKind::RBrace; break;
        case '(': take(); t.kind = TokKind::LParen; break;
        case ')': take(); t.kind = TokKind::RParen; break;
        case '[': take(); t.kind = TokKind::LBracket; break;
        case ']': take(); t.kind = TokKind::RBracket; break;
        case ':': take(); t.kind = TokKind::Colon; break;
        case ';': take(); t.kind = TokKind::Semicolon; break;
        case ',': take(); t.kind = TokKind::Comma; break;
        case '.': take(); t.kind = TokKind::Dot; break;
        case '<':
        case '>':
            take();
            if (pos_ < src_.size() && src_[pos_] == '=') take();
            t.kind = TokKind::CompareOp;
            break;
        case '!':
            take();
            if (pos_ < src_.size() && src_[pos_] == '=') {
                take();
                t.kind = TokKind::CompareOp;
            } else {
                t.span = close_span(t.span);
                diags.push_back({Severity::Error, "P001", "unexpected character '!'", t.span});
                return next(diags);
            }
            break;
        case '=':
            take();
            if (pos_ < src_.size() && src_[pos_] == '=') {
                take();
                t.kind = TokKind::CompareOp;
            } else {
                t.kind = TokKind::Equals;
            }
            break;
        case '-':
            take();
            if (pos_ < src_.size() && src_[pos_] == '>') {
                take();
                t.kind = TokKind::Arrow;
            } else {
                t.kind = TokKind::Minus;
            }
            break;
        default: {
            take();
            t.span = close_span(t.span);
            std::ostringstream msg;
            msg << "unexpected character '" << c << "'";
            diags.push_back({Severity::Error, "P001", msg.str(), t.span});
            return next(diags); // resume after the bad character
        }
        }
        t.span = close_span(t.span);
        return t;
    }

    void skip_trivia() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                take();
            } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
                while (pos_ < src_.size() && src_[pos_] != '\n') take();
            } else {
                break;
            }
        }
    }

    void take() {
        if (src_[pos_] == '\n') {
            line_++;
            col_ = 1;
        } else {
            col_++;
        }
        pos_++;
    }

    SourceSpan point_span() const {
        SourceSpan s;
        s.file = file_;
        s.start_line = s.end_line = line_;
        s.start_col = s.end_col = col_;
        return s;
    }

    SourceSpan close_span(SourceSpan s) const {
        s.end_line = line_;
        s.end_col = col_ > 1 ? col_ - 1 : 1;
        if (s.end_line == s.start_line && s.end_col < s.start_col) s.end_col = s.start_col;
        return s;
    }

    std::string_view src_;
    std::string file_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::string_view src, const std::string& file) : src_(src), file_(file) {
        tokens_ = Lexer(src, file).run(diags_);
    }

    ParseResult run() {
        IoTModel model = parse_model_decl();
        ParseResult result;
        sort_diagnostics(diags_);
        result.diagnostics = std::move(diags_);
        if (!has_errors(result.diagnostics)) result.model = std::move(model);
        return result;
    }

private:
    const Token& tok(int ahead = 0) const {
        size_t i = index_ + static_cast<size_t>(ahead);
        if (i >= tokens_.size()) i = tokens_.size() - 1;
        return tokens_[i];
    }

    void advance() {
        if (index_ + 1 < tokens_.size()) {
            if (tokens_[index_].kind == TokKind::LBrace) brace_depth_++;
            if (tokens_[index_].kind == TokKind::RBrace) brace_depth_--;
            index_++;
        }
    }

    bool at(TokKind k) const { return tok().kind == k; }

    bool at_word(std::string_view w) const {
        return tok().kind == TokKind::Ident && tok().text == w;
    }

    bool accept(TokKind k) {
        if (!at(k)) return false;
        advance();
        return true;
    }

    bool accept_word(std::string_view w) {
        if (!at_word(w)) return false;
        advance();
        return true;
    }

    void syntax_error(const std::string& expected) {
        std::ostringstream msg;
        msg << "expected " << expected << ", found ";
        if (tok().kind == TokKind::Ident)
            msg << '\'' << tok().text << '\'';
        else
            msg << tok_kind_name(tok().kind);
        diags_.push_back({Severity::Error, "P002", msg.str(), tok().span});
    }

    bool expect(TokKind k, const std::string& what) {
        if (accept(k)) return true;
        syntax_error(what);
        return false;
    }

    bool expect_word(std::string_view w) {
        if (accept_word(w)) return true;
        syntax_error("'" + std::string(w) + "'");
        return false;
    }

    // Identifier that is not a reserved word.
    std::optional<Token> expect_ident(const std::string& what) {
        if (at(TokKind::Ident) && !is_reserved_word(tok().text)) {
            Token t = tok();
            advance();
            return t;
        }
        if (at(TokKind::Ident)) {
            diags_.push_back({Severity::Error, "P002",
                              "reserved word '" + tok().text + "' cannot be used as " + what,
                              tok().span});
            advance();
            return std::nullopt;
        }
        syntax_error(what);
        return std::nullopt;
    }

    Ref make_ref(const Token& t) const { return Ref{t.text, t.span}; }

    // Skips to the next ';' (consumed) or a brace boundary (left in place).
    void sync_past_statement() {
        while (!at(TokKind::End)) {
            if (at(TokKind::Semicolon)) {
                advance();
                return;
            }
            if (at(TokKind::RBrace) || at(TokKind::LBrace)) return;
            advance();
        }
    }

    // ---- grammar ----

    IoTModel parse_model_decl() {
        IoTModel model;
        expect_word("model");
        if (auto name = expect_ident("model name")) {
            model.name = name->text;
            model.span = name->span;
        }
        expect(TokKind::LBrace, "'{'");
        std::set<std::string> seen_sections;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (at_word("system") || at_word("software") || at_word("hardware") ||
                at_word("deployment") || at_word("operational")) {
                std::string section = tok().text;
                SourceSpan section_span = tok().span;
                advance();
                if (!seen_sections.insert(section).second) {
                    diags_.push_back({Severity::Error, "P003",
                                      "duplicate section '" + section + "'", section_span});
                }
                if (!expect(TokKind::LBrace, "'{'")) {
                    sync_past_statement();
                    continue;
                }
                int section_depth = brace_depth_;
                size_t errors_before = diags_.size();
                if (section == "system") parse_system(model.system);
                else if (section == "software") parse_software(model.software);
                else if (section == "hardware") parse_hardware(model.hardware);
                else if (section == "deployment") parse_deployment(model.deployment);
                else parse_operational(model);
                if (diags_.size() > errors_before) {
                    // recover at the section boundary and keep going
                    while (brace_depth_ >= section_depth && !at(TokKind::End)) advance();
                    continue;
                }
                expect(TokKind::RBrace, "'}'");
            } else {
                syntax_error("a section (system, software, hardware, deployment, operational)");
                advance();
            }
        }
        expect(TokKind::RBrace, "'}'");
        if (!at(TokKind::End)) syntax_error("end of input");
        return model;
    }

    void parse_system(SystemView& view) {
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (at_word("block")) {
                advance();
                parse_block(view);
            } else if (at_word("connect")) {
                advance();
                parse_connect(view);
            } else {
                syntax_error("'block' or 'connect'");
                return;
            }
        }
    }

    void parse_block(SystemView& view) {
        SystemBlock block;
        if (auto name = expect_ident("block name")) {
            block.name = name->text;
            block.span = name->span;
        }
        if (accept_word("realizes")) {
            if (auto target = expect_ident("component name")) block.realizes = make_ref(*target);
        }
        if (!expect(TokKind::LBrace, "'{'")) return;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (at_word("port")) {
                advance();
                FlowPort fp;
                if (accept_word("in")) fp.direction = FlowDirection::In;
                else if (accept_word("out")) fp.direction = FlowDirection::Out;
                else if (accept_word("inout")) fp.direction = FlowDirection::InOut;
                else {
                    syntax_error("'in', 'out' or 'inout'");
                    sync_past_statement();
                    continue;
                }
                if (auto name = expect_ident("flow-port name")) {
                    fp.name = name->text;
                    fp.span = name->span;
                }
                expect(TokKind::Colon, "':'");
                if (auto payload = expect_ident("payload name")) fp.payload_type = make_ref(*payload);
                expect(TokKind::Semicolon, "';'");
                block.flow_ports.push_back(std::move(fp));
            } else if (at_word("contract")) {
                advance();
                parse_contract(block);
            } else {
                syntax_error("'port' or 'contract'");
                return;
            }
        }
        expect(TokKind::RBrace, "'}'");
        view.blocks.push_back(std::move(block));
    }

    void parse_contract(SystemBlock& block) {
        Contract contract;
        if (auto name = expect_ident("contract name")) {
            contract.name = name->text;
            contract.span = name->span;
        }
        expect(TokKind::LBrace, "'{'");
        expect_word("assume");
        contract.assume = parse_expression_string();
        expect(TokKind::Semicolon, "';'");
        expect_word("guarantee");
        contract.guarantee = parse_expression_string();
        expect(TokKind::Semicolon, "';'");
        expect(TokKind::RBrace, "'}'");
        block.contracts.push_back(std::move(contract));
    }

    // Contract expressions are quoted strings that must parse as boolean
    // expressions; the check is purely syntactic.
    std::string parse_expression_string() {
        if (!at(TokKind::String)) {
            syntax_error("a quoted expression");
            return {};
        }
        Token t = tok();
        advance();
        auto parsed = parse_expression(t.text, t.span);
        if (!parsed.expr) {
            diags_.push_back({Severity::Error, "P002",
                              "invalid contract expression: " + parsed.error, t.span});
        }
        return t.text;
    }

    void parse_connect(SystemView& view) {
        Connector conn;
        conn.span = tok().span;
        auto owner1 = expect_ident("endpoint owner");
        expect(TokKind::Dot, "'.'");
        auto port1 = expect_ident("port name");
        expect(TokKind::Arrow, "'->'");
        auto owner2 = expect_ident("endpoint owner");
        expect(TokKind::Dot, "'.'");
        auto port2 = expect_ident("port name");
        expect(TokKind::Semicolon, "';'");
        if (owner1 && port1 && owner2 && port2) {
            conn.from_owner = make_ref(*owner1);
            conn.from_port = make_ref(*port1);
            conn.to_owner = make_ref(*owner2);
            conn.to_port = make_ref(*port2);
            view.connections.push_back(std::move(conn));
        }
    }

    void parse_software(std::vector<SoftwareComponent>& components) {
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (accept_word("component")) {
                components.push_back(parse_component());
            } else {
                syntax_error("'component'");
                return;
            }
        }
    }

    SoftwareComponent parse_component() {
        SoftwareComponent comp;
        if (auto name = expect_ident("component name")) {
            comp.name = name->text;
            comp.span = name->span;
        }
        if (!expect(TokKind::LBrace, "'{'")) return comp;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (at_word("provided") || at_word("required")) {
                parse_component_port(comp);
            } else if (accept_word("payload")) {
                parse_payload(comp);
            } else if (accept_word("property")) {
                parse_property(comp);
            } else if (accept_word("operation")) {
                parse_operation(comp);
            } else if (accept_word("statemachine")) {
                parse_statemachine(comp);
            } else if (accept_word("component")) {
                comp.subcomponents.push_back(parse_component());
            } else {
                syntax_error(
                    "'provided', 'required', 'payload', 'property', 'operation', "
                    "'statemachine' or 'component'");
                return comp;
            }
        }
        expect(TokKind::RBrace, "'}'");
        return comp;
    }

    void parse_component_port(SoftwareComponent& comp) {
        ComponentPort port;
        port.kind = at_word("provided") ? PortKind::Provided : PortKind::Required;
        advance();
        expect_word("port");
        if (auto name = expect_ident("port name")) {
            port.name = name->text;
            port.span = name->span;
        }
        if (accept_word("sends")) parse_ident_list(port.sends);
        if (accept_word("receives")) parse_ident_list(port.receives);
        expect(TokKind::Semicolon, "';'");
        comp.ports.push_back(std::move(port));
    }

    void parse_ident_list(std::vector<Ref>& out) {
        do {
            if (auto name = expect_ident("payload name")) out.push_back(make_ref(*name));
            else break;
        } while (accept(TokKind::Comma));
    }

    void parse_payload(SoftwareComponent& comp) {
        Payload payload;
        if (auto name = expect_ident("payload name")) {
            payload.name = name->text;
            payload.span = name->span;
        }
        if (!expect(TokKind::LBrace, "'{'")) return;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            PayloadField field;
            if (auto name = expect_ident("field name")) {
                field.name = name->text;
                field.span = name->span;
            } else {
                sync_past_statement();
                continue;
            }
            expect(TokKind::Colon, "':'");
            field.type = parse_type();
            expect(TokKind::Semicolon, "';'");
            payload.fields.push_back(std::move(field));
        }
        expect(TokKind::RBrace, "'}'");
        comp.payloads.push_back(std::move(payload));
    }

    TypeRef parse_type() {
        TypeRef type;
        if (accept_word("bool")) type.kind = PrimKind::Bool;
        else if (accept_word("int")) type.kind = PrimKind::Int;
        else if (accept_word("real")) type.kind = PrimKind::Real;
        else if (accept_word("string")) type.kind = PrimKind::String;
        else if (accept_word("enum")) {
            type.kind = PrimKind::Enum;
            expect(TokKind::LParen, "'('");
            do {
                if (auto member = expect_ident("enum member")) {
                    type.enum_members.push_back(member->text);
                } else {
                    break;
                }
            } while (accept(TokKind::Comma));
            expect(TokKind::RParen, "')'");
            if (type.enum_members.empty())
                diags_.push_back(
                    {Severity::Error, "P002", "enum type needs at least one member", tok().span});
        } else {
            syntax_error("a type (bool, int, real, string, enum)");
        }
        return type;
    }

    std::optional<Literal> parse_literal() {
        bool negative = accept(TokKind::Minus);
        if (at(TokKind::Int)) {
            std::int64_t v = tok().int_value;
            advance();
            return Literal::integer(negative ? -v : v);
        }
        if (at(TokKind::Real)) {
            double v = tok().real_value;
            advance();
            return Literal::real(negative ? -v : v);
        }
        if (negative) {
            syntax_error("a number after '-'");
            return std::nullopt;
        }
        if (at(TokKind::String)) {
            std::string v = tok().text;
            advance();
            return Literal::string(std::move(v));
        }
        if (at_word("true") || at_word("false")) {
            bool v = tok().text == "true";
            advance();
            return Literal::boolean(v);
        }
        if (at(TokKind::Ident) && !is_reserved_word(tok().text)) {
            std::string member = tok().text;
            advance();
            return Literal::enum_member(std::move(member));
        }
        syntax_error("a literal");
        return std::nullopt;
    }

    void parse_property(SoftwareComponent& comp) {
        Property prop;
        if (auto name = expect_ident("property name")) {
            prop.name = name->text;
            prop.span = name->span;
        }
        expect(TokKind::Colon, "':'");
        prop.type = parse_type();
        expect(TokKind::Equals, "'='");
        if (auto lit = parse_literal()) prop.initial = std::move(*lit);
        expect(TokKind::Semicolon, "';'");
        comp.properties.push_back(std::move(prop));
    }

    void parse_operation(SoftwareComponent& comp) {
        Operation op;
        if (auto name = expect_ident("operation name")) {
            op.name = name->text;
            op.span = name->span;
        }
        expect(TokKind::LParen, "'('");
        if (!at(TokKind::RParen)) {
            do {
                Parameter param;
                if (auto name = expect_ident("parameter name")) {
                    param.name = name->text;
                    param.span = name->span;
                } else {
                    break;
                }
                expect(TokKind::Colon, "':'");
                param.type = parse_type();
                op.parameters.push_back(std::move(param));
            } while (accept(TokKind::Comma));
        }
        expect(TokKind::RParen, "')'");
        if (at_word("timing")) {
            SourceSpan timing_span = tok().span;
            advance();
            op.timing = parse_timing(timing_span);
        }
        expect(TokKind::Semicolon, "';'");
        comp.operations.push_back(std::move(op));
    }

    TimingAnnotation parse_timing(SourceSpan span) {
        TimingAnnotation timing;
        timing.span = span;
        expect(TokKind::LBrace, "'{'");
        expect_word("kind");
        expect(TokKind::Colon, "':'");
        if (accept_word("periodic")) timing.kind = TimingKind::Periodic;
        else if (accept_word("sporadic")) timing.kind = TimingKind::Sporadic;
        else syntax_error("'periodic' or 'sporadic'");
        expect_word("wcet");
        expect(TokKind::Colon, "':'");
        timing.wcet = parse_duration();
        if (accept_word("period")) {
            if (timing.kind != TimingKind::Periodic)
                diags_.push_back({Severity::Error, "P002",
                                  "sporadic timing uses 'miat', not 'period'", tok().span});
        } else if (accept_word("miat")) {
            if (timing.kind != TimingKind::Sporadic)
                diags_.push_back({Severity::Error, "P002",
                                  "periodic timing uses 'period', not 'miat'", tok().span});
        } else {
            syntax_error("'period' or 'miat'");
        }
        expect(TokKind::Colon, "':'");
        timing.period_or_miat = parse_duration();
        if (accept_word("priority")) {
            expect(TokKind::Colon, "':'");
            if (at(TokKind::Int)) {
                if (tok().int_value <= 0)
                    diags_.push_back({Severity::Error, "P002",
                                      "priority must be a positive integer", tok().span});
                timing.priority = static_cast<int>(tok().int_value);
                advance();
            } else {
                syntax_error("an integer priority");
            }
        }
        expect_word("deadline");
        expect(TokKind::Colon, "':'");
        timing.deadline = parse_duration();
        expect(TokKind::RBrace, "'}'");
        return timing;
    }

    Duration parse_duration() {
        if (!at(TokKind::Int)) {
            syntax_error("a duration (integer with us/ms/s suffix)");
            return {};
        }
        std::int64_t value = tok().int_value;
        advance();
        if (at_word("us")) {
            advance();
            return Duration{value};
        }
        if (at_word("ms")) {
            advance();
            return Duration{value * 1000};
        }
        if (at_word("s")) {
            advance();
            return Duration{value * 1000000};
        }
        syntax_error("a duration unit (us, ms or s)");
        return Duration{value};
    }

    void parse_statemachine(SoftwareComponent& comp) {
        StateMachine sm;
        if (auto name = expect_ident("state machine name")) {
            sm.name = name->text;
            sm.span = name->span;
        }
        expect_word("init");
        if (auto init = expect_ident("initial state name")) sm.initial = make_ref(*init);
        if (!expect(TokKind::LBrace, "'{'")) return;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (accept_word("state")) parse_state(sm);
            else if (accept_word("event")) parse_event(sm);
            else if (accept_word("action")) parse_action(sm);
            else if (accept_word("on")) parse_transition(sm);
            else {
                syntax_error("'state', 'event', 'action' or 'on'");
                break;
            }
        }
        expect(TokKind::RBrace, "'}'");
        if (comp.state_machine) {
            diags_.push_back({Severity::Error, "P002",
                              "component '" + comp.name + "' already has a state machine",
                              sm.span});
        } else {
            comp.state_machine = std::move(sm);
        }
    }

    void parse_state(StateMachine& sm) {
        IoTState state;
        if (auto name = expect_ident("state name")) {
            state.name = name->text;
            state.span = name->span;
        }
        expect(TokKind::LBrace, "'{'");
        // onentry/onexit are optional in the grammar; the V004 rule enforces them
        if (accept_word("onentry")) {
            if (auto ev = expect_ident("event name")) state.on_entry = make_ref(*ev);
            expect(TokKind::Semicolon, "';'");
        }
        if (accept_word("onexit")) {
            if (auto ev = expect_ident("event name")) state.on_exit = make_ref(*ev);
            expect(TokKind::Semicolon, "';'");
        }
        expect(TokKind::RBrace, "'}'");
        sm.states.push_back(std::move(state));
    }

    void parse_event(StateMachine& sm) {
        IoTEvent event;
        if (auto name = expect_ident("event name")) {
            event.name = name->text;
            event.span = name->span;
        }
        expect_word("kind");
        if (accept_word("general")) event.kind = EventKind::General;
        else if (accept_word("incoming")) event.kind = EventKind::Incoming;
        else if (accept_word("outgoing")) event.kind = EventKind::Outgoing;
        else syntax_error("'general', 'incoming' or 'outgoing'");
        if (accept_word("port")) {
            if (auto port = expect_ident("port name")) event.port = make_ref(*port);
        }
        if (accept_word("payload")) {
            if (auto payload = expect_ident("payload name")) event.payload = make_ref(*payload);
        }
        if (accept_word("effect")) {
            if (auto action = expect_ident("action name")) event.effect = make_ref(*action);
        }
        expect(TokKind::Semicolon, "';'");
        sm.events.push_back(std::move(event));
    }

    void parse_action(StateMachine& sm) {
        IoTAction action;
        if (auto name = expect_ident("action name")) {
            action.name = name->text;
            action.span = name->span;
        }
        if (at_word("send") || at_word("receive")) {
            action.kind = at_word("send") ? ActionKind::Send : ActionKind::Receive;
            advance();
            if (auto payload = expect_ident("payload name")) action.payload = make_ref(*payload);
            expect_word("via");
            if (auto port = expect_ident("port name")) action.port = make_ref(*port);
        } else if (accept_word("assign")) {
            action.kind = ActionKind::Assign;
            if (auto prop = expect_ident("property name")) action.target_property = make_ref(*prop);
            expect(TokKind::Equals, "'='");
            if (auto lit = parse_literal()) action.value = std::move(*lit);
        } else {
            syntax_error("'send', 'receive' or 'assign'");
        }
        expect(TokKind::Semicolon, "';'");
        sm.actions.push_back(std::move(action));
    }

    void parse_transition(StateMachine& sm) {
        Transition tr;
        tr.span = tok().span;
        if (auto trigger = expect_ident("event name")) {
            tr.trigger = make_ref(*trigger);
            tr.span = trigger->span;
        }
        expect_word("from");
        if (auto source = expect_ident("state name")) tr.source = make_ref(*source);
        expect_word("to");
        if (auto target = expect_ident("state name")) tr.target = make_ref(*target);
        if (accept_word("guard")) {
            if (expect(TokKind::LBracket, "'['")) {
                tr.guard = parse_guard_expr();
                expect(TokKind::RBracket, "']'");
            }
        }
        expect(TokKind::Semicolon, "';'");
        sm.transitions.push_back(std::move(tr));
    }

    // Captures raw source between '[' and its matching ']' and parses it
    // with the expression grammar, so spans report into this file.
    ExprPtr parse_guard_expr() {
        size_t start_offset = tok().offset;
        SourceSpan origin = tok().span;
        size_t depth = 0;
        size_t end_offset = start_offset;
        // scan over tokens so strings containing ']' are handled
        while (!at(TokKind::End)) {
            if (at(TokKind::LBracket)) depth++;
            if (at(TokKind::RBracket)) {
                if (depth == 0) {
                    end_offset = tok().offset;
                    break;
                }
                depth--;
            }
            advance();
        }
        std::string_view text = src_.substr(start_offset, end_offset - start_offset);
        auto parsed = parse_expression(text, origin);
        if (!parsed.expr) {
            diags_.push_back(
                {Severity::Error, "P002", "invalid guard: " + parsed.error, parsed.error_span});
            return nullptr;
        }
        return parsed.expr;
    }

    void parse_hardware(std::vector<Processor>& processors) {
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!expect_word("processor")) return;
            Processor proc;
            if (auto name = expect_ident("processor name")) {
                proc.name = name->text;
                proc.span = name->span;
            }
            if (accept_word("cores")) {
                if (at(TokKind::Int)) {
                    proc.cores = static_cast<int>(tok().int_value);
                    if (proc.cores < 1)
                        diags_.push_back({Severity::Error, "P002",
                                          "core count must be at least 1", tok().span});
                    advance();
                } else {
                    syntax_error("a core count");
                }
            }
            expect(TokKind::Semicolon, "';'");
            processors.push_back(std::move(proc));
        }
    }

    void parse_deployment(std::vector<DeploymentBinding>& bindings) {
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (!expect_word("bind")) return;
            DeploymentBinding binding;
            binding.span = tok().span;
            if (auto comp = expect_ident("component name")) binding.component = make_ref(*comp);
            expect(TokKind::Arrow, "'->'");
            if (auto proc = expect_ident("processor name")) binding.processor = make_ref(*proc);
            expect(TokKind::Semicolon, "';'");
            bindings.push_back(std::move(binding));
        }
    }

    void parse_operational(IoTModel& model) {
        OperationalConfig config;
        while (!at(TokKind::RBrace) && !at(TokKind::End)) {
            if (accept_word("protocol")) {
                ProtocolDecl proto;
                if (auto name = expect_ident("protocol name")) {
                    proto.name = name->text;
                    proto.span = name->span;
                }
                if (accept_word("mqtt")) proto.kind = ProtocolKind::Mqtt;
                else if (accept_word("coap")) proto.kind = ProtocolKind::Coap;
                else if (accept_word("http")) proto.kind = ProtocolKind::Http;
                else if (accept_word("amqp")) proto.kind = ProtocolKind::Amqp;
                else if (accept_word("custom")) {
                    proto.kind = ProtocolKind::Custom;
                    if (at(TokKind::String)) {
                        proto.custom_kind = tok().text;
                        advance();
                    } else {
                        syntax_error("a quoted protocol kind");
                    }
                } else {
                    syntax_error("'mqtt', 'coap', 'http', 'amqp' or 'custom'");
                }
                if (accept_word("server")) {
                    if (auto server = expect_ident("server name")) proto.server = make_ref(*server);
                }
                expect(TokKind::Semicolon, "';'");
                config.protocols.push_back(std::move(proto));
            } else if (accept_word("server")) {
                ServerDecl server;
                if (auto name = expect_ident("server name")) {
                    server.name = name->text;
                    server.span = name->span;
                }
                if (at(TokKind::String)) {
                    server.uri = tok().text;
                    advance();
                } else {
                    syntax_error("a quoted URI");
                }
                expect(TokKind::Semicolon, "';'");
                config.servers.push_back(std::move(server));
            } else if (accept_word("storage")) {
                StorageDecl storage;
                if (auto name = expect_ident("storage name")) {
                    storage.name = name->text;
                    storage.span = name->span;
                }
                if (at(TokKind::String)) {
                    storage.capacity = tok().text;
                    advance();
                } else {
                    syntax_error("a quoted capacity");
                }
                expect(TokKind::Semicolon, "';'");
                config.storage.push_back(std::move(storage));
            } else if (accept_word("mode")) {
                ModeDecl mode;
                if (auto name = expect_ident("mode name")) {
                    mode.name = name->text;
                    mode.span = name->span;
                }
                expect(TokKind::Semicolon, "';'");
                config.modes.push_back(std::move(mode));
            } else {
                syntax_error("'protocol', 'server', 'storage' or 'mode'");
                return;
            }
        }
        model.operational = std::move(config);
    }

    std::string_view src_;
    std::string file_;
    std::vector<Token> tokens_;
    size_t index_ = 0;
    int brace_depth_ = 0;
    std::vector<Diagnostic> diags_;
};

} // namespace

bool is_reserved_word(std::string_view word) {
    return reserved_words().count(word) > 0;
}

ParseResult parse_model(std::string_view source, const std::string& file) {
    return Parser(source, file).run();
}

} // namespace iotforge
