#include <quadlift/errors.hpp>
#include <quadlift/parser.hpp>

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>
#include <sstream>

namespace quadlift {

ParseError::ParseError(Kind kind, std::size_t line, std::size_t column, const std::string &message)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message), m_kind(kind),
      m_line(line), m_column(column), m_detail(message)
{
}

std::string derivative_name(const std::string &input)
{
    return input + "'";
}

Expr SystemAST::state_symbol(std::size_t i) const
{
    return Expr::variable(states.at(i), static_cast<int>(i));
}

Expr SystemAST::input_symbol(std::size_t j) const
{
    return Expr::variable(inputs.at(j), static_cast<int>(states.size() + j));
}

Expr SystemAST::input_derivative_symbol(std::size_t j) const
{
    return Expr::variable(derivative_name(inputs.at(j)), kInputDerivativeRankBase + static_cast<int>(j));
}

const Expr &SystemAST::rhs(const std::string &state) const
{
    auto it = equations.find(state);
    if (it == equations.end()) {
        throw MissingRhsError("no equation for state '" + state + "'");
    }
    return it->second;
}

SymbolTable symbol_table(const SystemAST &system)
{
    SymbolTable table;
    for (std::size_t i = 0; i < system.states.size(); ++i) {
        table.symbols.emplace(system.states[i], system.state_symbol(i));
    }
    for (std::size_t j = 0; j < system.inputs.size(); ++j) {
        table.symbols.emplace(system.inputs[j], system.input_symbol(j));
        table.derivative_symbols.emplace(system.inputs[j], system.input_derivative_symbol(j));
    }
    for (const auto &p : system.parameters) {
        table.symbols.emplace(p, Expr::parameter(p));
    }
    return table;
}

namespace {

enum class Tok { Ident, Number, Symbol, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::size_t line = 1;
    std::size_t column = 1;
};

const std::map<std::string, Kind> &function_table()
{
    static const std::map<std::string, Kind> table = {
        {"exp", Kind::Exp},   {"log", Kind::Log},   {"sin", Kind::Sin},   {"cos", Kind::Cos},
        {"tan", Kind::Tan},   {"sinh", Kind::Sinh}, {"cosh", Kind::Cosh},
    };
    return table;
}

bool is_keyword(const std::string &s)
{
    return s == "vars" || s == "inputs" || s == "params" || s == "assume";
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : m_text(text) {}

    Token next()
    {
        skip_space();
        Token t;
        t.line = m_line;
        t.column = m_column;
        if (m_pos >= m_text.size()) {
            t.kind = Tok::End;
            return t;
        }
        const char c = m_text[m_pos];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::Ident;
            while (m_pos < m_text.size() &&
                   (std::isalnum(static_cast<unsigned char>(m_text[m_pos])) || m_text[m_pos] == '_')) {
                t.text.push_back(advance());
            }
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && m_pos + 1 < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos + 1])))) {
            t.kind = Tok::Number;
            lex_number(t.text);
            return t;
        }
        t.kind = Tok::Symbol;
        t.text.push_back(advance());
        return t;
    }

    /// Raw text up to (not including) the next ';', used for `assume` lines.
    std::string until_semicolon()
    {
        std::string out;
        while (m_pos < m_text.size() && m_text[m_pos] != ';') {
            out.push_back(advance());
        }
        return out;
    }

private:
    char advance()
    {
        const char c = m_text[m_pos++];
        if (c == '\n') {
            ++m_line;
            m_column = 1;
        } else {
            ++m_column;
        }
        return c;
    }

    void skip_space()
    {
        while (m_pos < m_text.size()) {
            const char c = m_text[m_pos];
            if (c == '#') {
                while (m_pos < m_text.size() && m_text[m_pos] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void lex_number(std::string &out)
    {
        auto digits = [&] {
            while (m_pos < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[m_pos]))) {
                out.push_back(advance());
            }
        };
        digits();
        if (m_pos < m_text.size() && m_text[m_pos] == '.') {
            out.push_back(advance());
            digits();
        }
        if (m_pos < m_text.size() && (m_text[m_pos] == 'e' || m_text[m_pos] == 'E')) {
            std::size_t look = m_pos + 1;
            if (look < m_text.size() && (m_text[look] == '+' || m_text[look] == '-')) {
                ++look;
            }
            if (look < m_text.size() && std::isdigit(static_cast<unsigned char>(m_text[look]))) {
                out.push_back(advance());
                if (m_text[m_pos] == '+' || m_text[m_pos] == '-') {
                    out.push_back(advance());
                }
                digits();
            }
        }
    }

    std::string_view m_text;
    std::size_t m_pos = 0;
    std::size_t m_line = 1;
    std::size_t m_column = 1;
};

class Parser {
public:
    Parser(std::string_view text, const SymbolTable *symbols, const Assumptions *assumptions)
        : m_lexer(text), m_symbols(symbols), m_assumptions(assumptions)
    {
        m_tok = m_lexer.next();
    }

    void set_symbols(const SymbolTable *symbols, const Assumptions *assumptions)
    {
        m_symbols = symbols;
        m_assumptions = assumptions;
    }

    const Token &peek() const { return m_tok; }
    Lexer &lexer() { return m_lexer; }

    Token take()
    {
        Token t = m_tok;
        m_tok = m_lexer.next();
        return t;
    }

    bool at_symbol(char c) const { return m_tok.kind == Tok::Symbol && m_tok.text.size() == 1 && m_tok.text[0] == c; }

    Token expect_symbol(char c, const char *what)
    {
        if (!at_symbol(c)) {
            fail(ParseError::Kind::Syntax, m_tok, std::string("expected ") + what + ", found " + describe(m_tok));
        }
        return take();
    }

    Token expect_ident(const char *what)
    {
        if (m_tok.kind != Tok::Ident) {
            fail(ParseError::Kind::Syntax, m_tok, std::string("expected ") + what + ", found " + describe(m_tok));
        }
        return take();
    }

    [[noreturn]] static void fail(ParseError::Kind kind, const Token &at, const std::string &message)
    {
        throw ParseError(kind, at.line, at.column, message);
    }

    static std::string describe(const Token &t)
    {
        switch (t.kind) {
        case Tok::End:
            return "end of input";
        case Tok::Number:
            return "number '" + t.text + "'";
        case Tok::Ident:
            return "identifier '" + t.text + "'";
        default:
            return "'" + t.text + "'";
        }
    }

    Expr expression()
    {
        Expr acc = term();
        while (at_symbol('+') || at_symbol('-')) {
            const bool minus = take().text[0] == '-';
            Expr rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

private:
    Expr term()
    {
        Expr acc = unary();
        while (at_symbol('*') || at_symbol('/')) {
            const Token op = take();
            Expr rhs = unary();
            if (op.text[0] == '*') {
                acc = acc * rhs;
            } else {
                if (rhs.is_zero()) {
                    fail(ParseError::Kind::Syntax, op, "division by zero");
                }
                acc = product({acc, power(rhs, Rational(-1), m_assumptions)}, m_assumptions);
            }
        }
        return acc;
    }

    Expr unary()
    {
        if (at_symbol('-')) {
            take();
            return -unary();
        }
        if (at_symbol('+')) {
            take();
            return unary();
        }
        return power_expr();
    }

    Expr power_expr()
    {
        Expr base = primary();
        if (!at_symbol('^')) {
            return base;
        }
        const Token caret = take();
        Expr e = unary();
        if (!is_parameter_only(e)) {
            fail(ParseError::Kind::Syntax, caret, "exponent must be a rational constant, found " + to_string(e));
        }
        if (!e.is_constant()) {
            fail(ParseError::Kind::Syntax, caret,
                 "symbolic exponents are not supported (found " + to_string(e) + "); instantiate with a number");
        }
        try {
            return power(base, e.value(), m_assumptions);
        } catch (const DomainError &err) {
            fail(ParseError::Kind::Syntax, caret, err.what());
        }
    }

    Expr primary()
    {
        const Token t = m_tok;
        if (t.kind == Tok::Number) {
            take();
            try {
                return Expr::constant(parse_decimal(t.text));
            } catch (const std::exception &) {
                fail(ParseError::Kind::Syntax, t, "malformed number '" + t.text + "'");
            }
        }
        if (t.kind == Tok::Ident) {
            take();
            if (at_symbol('(')) {
                return call(t);
            }
            if (at_symbol('\'')) {
                const Token quote = take();
                auto it = m_symbols->derivative_symbols.find(t.text);
                if (it == m_symbols->derivative_symbols.end()) {
                    fail(ParseError::Kind::UndeclaredSymbol, quote,
                         "'" + t.text + "'' is only available for declared inputs");
                }
                return it->second;
            }
            auto it = m_symbols->symbols.find(t.text);
            if (it == m_symbols->symbols.end()) {
                fail(ParseError::Kind::UndeclaredSymbol, t, "undeclared symbol '" + t.text + "'");
            }
            return it->second;
        }
        if (at_symbol('(')) {
            const Token open = take();
            Expr inner = expression();
            if (!at_symbol(')')) {
                fail(ParseError::Kind::Syntax, open,
                     "unbalanced parenthesis: '(' is never closed (found " + describe(m_tok) + ")");
            }
            take();
            return inner;
        }
        fail(ParseError::Kind::Syntax, t, "expected an expression, found " + describe(t));
    }

    Expr call(const Token &name)
    {
        const auto &table = function_table();
        auto it = table.find(name.text);
        if (it == table.end()) {
            fail(ParseError::Kind::UndeclaredSymbol, name,
                 "unknown function '" + name.text +
                     "'; supported functions are exp, log, sin, cos, tan, sinh, cosh (user-defined functions such "
                     "as Bessel functions are not supported)");
        }
        const Token open = take();
        Expr arg = expression();
        if (!at_symbol(')')) {
            fail(ParseError::Kind::Syntax, open,
                 "unbalanced parenthesis: '(' is never closed (found " + describe(m_tok) + ")");
        }
        take();
        try {
            return function(it->second, arg);
        } catch (const DomainError &err) {
            fail(ParseError::Kind::Syntax, name, err.what());
        }
    }

    Lexer m_lexer;
    Token m_tok;
    const SymbolTable *m_symbols;
    const Assumptions *m_assumptions;
};

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Recognizes `name > 0` inside a comma-separated assume line.
void record_positivity(const std::string &note, Assumptions &out)
{
    std::stringstream ss(note);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto gt = part.find('>');
        if (gt == std::string::npos) {
            continue;
        }
        const std::string lhs = trim(part.substr(0, gt));
        const std::string rhs = trim(part.substr(gt + 1));
        bool ident = !lhs.empty() && (std::isalpha(static_cast<unsigned char>(lhs[0])) || lhs[0] == '_');
        for (char c : lhs) {
            ident = ident && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
        }
        if (ident && (rhs == "0" || rhs == "0.0")) {
            out.positive.insert(lhs);
        }
    }
}

} // namespace

SystemAST parse_system(std::string_view text)
{
    SystemAST sys;
    SymbolTable table;
    std::set<std::string> declared;
    std::map<std::string, Token> equation_at;
    Parser p(text, &table, &sys.assumptions);

    auto declare_list = [&](const std::string &keyword, std::vector<std::string> &into) {
        do {
            const Token name = p.expect_ident("a name");
            if (is_keyword(name.text) || function_table().count(name.text) != 0) {
                Parser::fail(ParseError::Kind::Declaration, name, "'" + name.text + "' is a reserved word");
            }
            if (!declared.insert(name.text).second) {
                Parser::fail(ParseError::Kind::Declaration, name, "'" + name.text + "' is declared twice");
            }
            into.push_back(name.text);
            if (!p.at_symbol(',')) {
                break;
            }
            p.take();
        } while (true);
        p.expect_symbol(';', ("';' after the " + keyword + " list").c_str());
    };

    while (p.peek().kind != Tok::End) {
        const Token head = p.expect_ident("a declaration or an equation");
        if (head.text == "vars" || head.text == "inputs" || head.text == "params") {
            if (!sys.equations.empty()) {
                Parser::fail(ParseError::Kind::Declaration, head, "declarations must precede the equations");
            }
            std::vector<std::string> names;
            declare_list(head.text, names);
            auto &into = head.text == "vars" ? sys.states : head.text == "inputs" ? sys.inputs : sys.parameters;
            into.insert(into.end(), names.begin(), names.end());
            table = symbol_table(sys);
            continue;
        }
        if (head.text == "assume") {
            // The lexer already consumed one token of lookahead; collect it back into the note.
            std::string note;
            if (!p.at_symbol(';')) {
                note = p.peek().text + p.lexer().until_semicolon();
                p.take();
            }
            p.expect_symbol(';', "';' after assume");
            note = trim(note);
            sys.domain_notes.push_back(note);
            record_positivity(note, sys.assumptions);
            continue;
        }

        // Equation: name' = expr;
        if (!p.at_symbol('\'')) {
            Parser::fail(ParseError::Kind::Syntax, p.peek(),
                         "expected ' after '" + head.text + "' (equations have the form " + head.text +
                             "' = ...;)");
        }
        p.take();
        const bool is_state =
            std::find(sys.states.begin(), sys.states.end(), head.text) != sys.states.end();
        if (!is_state) {
            if (declared.count(head.text) != 0) {
                Parser::fail(ParseError::Kind::Declaration, head,
                             "'" + head.text + "' is an input or parameter and cannot have an equation");
            }
            Parser::fail(ParseError::Kind::UndeclaredSymbol, head, "equation for undeclared state '" + head.text + "'");
        }
        if (auto prev = equation_at.find(head.text); prev != equation_at.end()) {
            Parser::fail(ParseError::Kind::DuplicateEquation, head,
                         "second equation for '" + head.text + "' (first at line " +
                             std::to_string(prev->second.line) + ")");
        }
        p.expect_symbol('=', "'='");
        Expr rhs = p.expression();
        p.expect_symbol(';', "';' at the end of the equation");
        equation_at.emplace(head.text, head);
        sys.equations.emplace(head.text, rhs);
    }

    if (sys.states.empty()) {
        Parser::fail(ParseError::Kind::Declaration, p.peek(), "no state variables declared (missing 'vars')");
    }
    for (const auto &s : sys.states) {
        if (sys.equations.count(s) == 0) {
            Parser::fail(ParseError::Kind::MissingEquation, p.peek(), "missing equation for state '" + s + "'");
        }
    }
    return sys;
}

Expr parse_expression(std::string_view text, const SymbolTable &symbols)
{
    Assumptions none;
    Parser p(text, &symbols, &none);
    Expr e = p.expression();
    if (p.peek().kind != Tok::End) {
        Parser::fail(ParseError::Kind::Syntax, p.peek(), "unexpected " + Parser::describe(p.peek()));
    }
    return e;
}

std::string print_system(const SystemAST &system)
{
    std::ostringstream os;
    auto list = [&](const char *keyword, const std::vector<std::string> &names) {
        if (names.empty()) {
            return;
        }
        os << keyword << ' ';
        for (std::size_t i = 0; i < names.size(); ++i) {
            os << (i ? ", " : "") << names[i];
        }
        os << ";\n";
    };
    list("vars", system.states);
    list("inputs", system.inputs);
    list("params", system.parameters);
    for (const auto &note : system.domain_notes) {
        os << "assume " << note << ";\n";
    }
    for (const auto &s : system.states) {
        os << s << "' = " << to_string(system.rhs(s)) << ";\n";
    }
    return os.str();
}

} // namespace quadlift
