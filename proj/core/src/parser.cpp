#include "km/parser.hpp"

#include <cctype>
#include <optional>

namespace km {

ParseError::ParseError(SourceSpan span, const std::string& message)
    : std::runtime_error(message + " at offset " + std::to_string(span.start)), span_(span), message_(message) {}

namespace {

enum class Tok { Ident, Bottom, Top, Box, Not, And, Or, Imp, LParen, RParen, Comma, Turnstile, End };

struct Token {
    Tok kind;
    SourceSpan span;
    std::string text;
};

std::string describe(const Token& t) {
    switch (t.kind) {
    case Tok::End:
        return "end of input";
    case Tok::Ident:
        return "'" + t.text + "'";
    default:
        return "'" + t.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) {
                out.push_back({Tok::End, {pos_, pos_}, ""});
                return out;
            }
            out.push_back(next());
        }
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool starts(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    Token take(Tok kind, std::size_t len) {
        Token t{kind, {pos_, pos_ + len}, std::string(text_.substr(pos_, len))};
        pos_ += len;
        return t;
    }

    Token next() {
        static const std::pair<std::string_view, Tok> symbols[] = {
            {"=>", Tok::Turnstile}, {"|-", Tok::Turnstile}, {"->", Tok::Imp},    {"[]", Tok::Box},
            {"⇒", Tok::Turnstile},  {"→", Tok::Imp},        {"∧", Tok::And},     {"∨", Tok::Or},
            {"□", Tok::Box},        {"⊥", Tok::Bottom},     {"⊤", Tok::Top},     {"¬", Tok::Not},
            {"&", Tok::And},        {"|", Tok::Or},         {"~", Tok::Not},     {"#", Tok::Bottom},
            {"(", Tok::LParen},     {")", Tok::RParen},     {",", Tok::Comma},
        };
        for (const auto& [sym, kind] : symbols)
            if (starts(sym))
                return take(kind, sym.size());

        unsigned char c = static_cast<unsigned char>(text_[pos_]);
        if (std::isalpha(c)) {
            std::size_t len = 1;
            while (pos_ + len < text_.size()) {
                unsigned char d = static_cast<unsigned char>(text_[pos_ + len]);
                if (!std::isalnum(d) && d != '_')
                    break;
                ++len;
            }
            Token t = take(Tok::Ident, len);
            if (t.text == "box")
                t.kind = Tok::Box;
            else if (t.text == "false")
                t.kind = Tok::Bottom;
            else if (t.text == "true")
                t.kind = Tok::Top;
            return t;
        }
        std::size_t len = 1;
        // keep a whole UTF-8 sequence in the error span
        while (pos_ + len < text_.size() && (static_cast<unsigned char>(text_[pos_ + len]) & 0xC0) == 0x80)
            ++len;
        throw ParseError({pos_, pos_ + len}, "unexpected character '" + std::string(text_.substr(pos_, len)) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : tokens_(Lexer(text).run()) {}

    Formula formula() {
        Formula lhs = disjunction();
        if (peek().kind == Tok::Imp) {
            advance();
            return Formula::imp(lhs, formula());
        }
        return lhs;
    }

    std::vector<Formula> list() {
        std::vector<Formula> out;
        if (!starts_formula(peek().kind))
            return out;
        out.push_back(formula());
        while (peek().kind == Tok::Comma) {
            advance();
            out.push_back(formula());
        }
        return out;
    }

    const Token& peek() const { return tokens_[pos_]; }
    const Token& advance() { return tokens_[pos_++]; }

    void expect(Tok kind, const char* what) {
        if (peek().kind != kind)
            fail(std::string("expected ") + what + ", found " + describe(peek()));
        advance();
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(peek().span, msg); }

private:
    static bool starts_formula(Tok k) {
        return k == Tok::Ident || k == Tok::Bottom || k == Tok::Top || k == Tok::Box || k == Tok::Not ||
               k == Tok::LParen;
    }

    Formula disjunction() {
        Formula acc = conjunction();
        while (peek().kind == Tok::Or) {
            advance();
            acc = Formula::disj(acc, conjunction());
        }
        return acc;
    }

    Formula conjunction() {
        Formula acc = unary();
        while (peek().kind == Tok::And) {
            advance();
            acc = Formula::conj(acc, unary());
        }
        return acc;
    }

    Formula unary() {
        switch (peek().kind) {
        case Tok::Box:
            advance();
            return Formula::box(unary());
        case Tok::Not:
            advance();
            return Formula::neg(unary());
        default:
            return primary();
        }
    }

    Formula primary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Ident:
            advance();
            return Formula::atom(t.text);
        case Tok::Bottom:
            advance();
            return Formula::bottom();
        case Tok::Top:
            advance();
            return Formula::top();
        case Tok::LParen: {
            advance();
            Formula f = formula();
            expect(Tok::RParen, "')'");
            return f;
        }
        default:
            fail("expected a formula, found " + describe(t));
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer; higher binds tighter.
int level(Formula f) {
    switch (f.kind()) {
    case Kind::Imp:
        return 1;
    case Kind::Or:
        return 2;
    case Kind::And:
        return 3;
    default:
        return 4;
    }
}

void print_into(std::string& out, Formula f, int min_level, std::size_t limit) {
    if (out.size() > limit)
        return;
    const bool parens = level(f) < min_level;
    if (parens)
        out += '(';
    switch (f.kind()) {
    case Kind::Atom:
        out += f.name();
        break;
    case Kind::Bottom:
        out += "false";
        break;
    case Kind::Box:
        out += "box ";
        print_into(out, f.body(), 4, limit);
        break;
    case Kind::And:
        print_into(out, f.left(), 3, limit);
        out += " & ";
        print_into(out, f.right(), 4, limit);
        break;
    case Kind::Or:
        print_into(out, f.left(), 2, limit);
        out += " | ";
        print_into(out, f.right(), 3, limit);
        break;
    case Kind::Imp:
        print_into(out, f.left(), 2, limit);
        out += " -> ";
        print_into(out, f.right(), 1, limit);
        break;
    }
    if (parens)
        out += ')';
}

} // namespace

Formula parse_formula(std::string_view text) {
    Parser p(text);
    Formula f = p.formula();
    if (p.peek().kind != Tok::End)
        p.fail("unexpected " + describe(p.peek()));
    return f;
}

std::vector<Formula> parse_formula_list(std::string_view text) {
    Parser p(text);
    auto fs = p.list();
    if (p.peek().kind != Tok::End)
        p.fail("unexpected " + describe(p.peek()));
    return fs;
}

Sequent parse_sequent(std::string_view text) {
    Parser p(text);
    Sequent s;
    s.lhs = FMultiset(p.list());
    p.expect(Tok::Turnstile, "'=>'");
    s.rhs = FMultiset(p.list());
    if (p.peek().kind != Tok::End)
        p.fail("unexpected " + describe(p.peek()));
    return s;
}

namespace {

std::string truncated(std::string out, std::size_t max_chars) {
    if (out.size() > max_chars) {
        out.resize(max_chars);
        out += " ...";
    }
    return out;
}

} // namespace

std::string print_formula(Formula f, std::size_t max_chars) {
    std::string out;
    print_into(out, f, 0, max_chars);
    return truncated(std::move(out), max_chars);
}

std::string print_multiset(const FMultiset& m, std::size_t max_chars) {
    std::string out;
    for (Formula f : m.occurrences()) {
        if (out.size() > max_chars)
            break;
        if (!out.empty())
            out += ", ";
        print_into(out, f, 0, max_chars);
    }
    return truncated(std::move(out), max_chars);
}

std::string print_sequent(const Sequent& s, std::size_t max_chars) {
    std::string lhs = print_multiset(s.lhs, max_chars);
    std::string rhs = print_multiset(s.rhs, max_chars);
    std::string out = lhs;
    if (!lhs.empty())
        out += ' ';
    out += "=>";
    if (!rhs.empty())
        out += ' ' + rhs;
    return truncated(std::move(out), max_chars);
}

} // namespace km
