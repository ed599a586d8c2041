#pragma once

// Instance documents:
//   #mode classical.  |  #mode asp.
//   arg(a).  att(a,b).
//   rc(a): FORMULA.            (classical; ~ & | -> <-> true false, parentheses)
//   rc(a): h1 | h2 :- b, not c.  rc(a): :- b.   (asp)
//   constraint: FORMULA.       (CAF documents only)
// '%' starts a comment that runs to the end of the line.

#include "core.hpp"

#include <sstream>

namespace raf {

namespace detail {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Colon, Tilde, Amp, Bar, Arrow, Iff, If, Hash, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : src_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        while (true) {
            skip();
            if (pos_ >= src_.size()) {
                out.push_back({Tok::End, "", line_, col_});
                return out;
            }
            int l = line_, c = col_;
            char ch = src_[pos_];
            auto single = [&](Tok k) {
                out.push_back({k, std::string(1, ch), l, c});
                advance(1);
            };
            if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_' ||
                std::isdigit(static_cast<unsigned char>(ch))) {
                size_t start = pos_;
                while (pos_ < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                    advance(1);
                out.push_back({Tok::Ident, src_.substr(start, pos_ - start), l, c});
                continue;
            }
            switch (ch) {
            case '(': single(Tok::LParen); break;
            case ')': single(Tok::RParen); break;
            case ',': single(Tok::Comma); break;
            case '.': single(Tok::Dot); break;
            case '~': single(Tok::Tilde); break;
            case '&': single(Tok::Amp); break;
            case '|': single(Tok::Bar); break;
            case '#': single(Tok::Hash); break;
            case '-':
                if (peek(1) == '>') {
                    out.push_back({Tok::Arrow, "->", l, c});
                    advance(2);
                } else {
                    fail(l, c, "unexpected '-'");
                }
                break;
            case '<':
                if (peek(1) == '-' && peek(2) == '>') {
                    out.push_back({Tok::Iff, "<->", l, c});
                    advance(3);
                } else {
                    fail(l, c, "unexpected '<'");
                }
                break;
            case ':':
                if (peek(1) == '-') {
                    out.push_back({Tok::If, ":-", l, c});
                    advance(2);
                } else {
                    single(Tok::Colon);
                }
                break;
            default: fail(l, c, std::string("unexpected character '") + ch + "'");
            }
        }
    }

    [[noreturn]] static void fail(int line, int col, const std::string& msg) {
        throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
    }

private:
    char peek(size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

    void advance(size_t n) {
        for (size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void skip() {
        while (pos_ < src_.size()) {
            char ch = src_[pos_];
            if (ch == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(ch))) {
                advance(1);
            } else {
                break;
            }
        }
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class DocParser {
public:
    explicit DocParser(const std::string& text) : toks_(Lexer(text).run()) {}

    struct RcLine {
        std::string arg;
        Token at;
        size_t begin; // token range of the condition body, excluding the final dot
        size_t end;
    };

    std::optional<Mode> mode;
    Token mode_at{Tok::End, "", 0, 0};
    std::vector<std::pair<std::string, Token>> args;
    std::vector<std::pair<std::pair<std::string, std::string>, Token>> atts;
    std::vector<RcLine> rcs;
    std::optional<FormulaPtr> constraint;
    Token constraint_at{Tok::End, "", 0, 0};

    void parse_statements() {
        while (cur().kind != Tok::End) statement();
    }

    FormulaPtr formula_range(size_t begin, size_t end) {
        pos_ = begin;
        end_ = end;
        auto f = iff();
        if (pos_ != end_) err(cur(), "unexpected '" + cur().text + "' in formula");
        end_ = toks_.size();
        return f;
    }

    Rule rule_range(size_t begin, size_t end) {
        pos_ = begin;
        end_ = end;
        Rule r;
        if (cur().kind != Tok::If) {
            r.head.push_back(ident("head atom"));
            while (cur().kind == Tok::Bar) {
                ++pos_;
                r.head.push_back(ident("head atom"));
            }
        }
        if (cur().kind == Tok::If) {
            ++pos_;
            bool first = true;
            while (pos_ < end_) {
                if (!first) expect(Tok::Comma, "','");
                first = false;
                if (cur().kind == Tok::Ident && cur().text == "not") {
                    ++pos_;
                    r.neg.push_back(ident("atom"));
                } else {
                    r.pos.push_back(ident("atom"));
                }
            }
        }
        if (pos_ != end_) err(cur(), "unexpected '" + cur().text + "' in rule");
        end_ = toks_.size();
        r.canonicalize();
        return r;
    }

    const Token& tok(size_t i) const { return toks_[i]; }

    [[noreturn]] static void err(const Token& t, const std::string& msg) { Lexer::fail(t.line, t.col, msg); }

private:
    const Token& cur() const { return toks_[std::min(pos_, std::min(end_, toks_.size() - 1))]; }

    void expect(Tok k, const std::string& what) {
        if (pos_ >= end_ || cur().kind != k) err(cur(), "expected " + what);
        ++pos_;
    }

    std::string ident(const std::string& what) {
        if (pos_ >= end_ || cur().kind != Tok::Ident) err(cur(), "expected " + what);
        std::string s = cur().text;
        if (!valid_identifier(s)) err(cur(), "invalid identifier '" + s + "'");
        ++pos_;
        return s;
    }

    void statement() {
        const Token& t = cur();
        if (t.kind == Tok::Hash) {
            ++pos_;
            if (cur().kind != Tok::Ident || cur().text != "mode") err(cur(), "expected 'mode' after '#'");
            ++pos_;
            if (cur().kind != Tok::Ident || (cur().text != "classical" && cur().text != "asp"))
                err(cur(), "expected 'classical' or 'asp'");
            Mode m = cur().text == "asp" ? Mode::asp : Mode::classical;
            if (mode && *mode != m) err(cur(), "mixed classical/asp modes");
            mode = m;
            mode_at = t;
            ++pos_;
            expect(Tok::Dot, "'.'");
            return;
        }
        if (t.kind != Tok::Ident) err(t, "expected a statement");
        if (t.text == "arg") {
            ++pos_;
            expect(Tok::LParen, "'('");
            Token at = cur();
            auto name = ident("argument name");
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            args.push_back({name, at});
        } else if (t.text == "att") {
            ++pos_;
            expect(Tok::LParen, "'('");
            Token at = cur();
            auto a = ident("argument name");
            expect(Tok::Comma, "','");
            auto b = ident("argument name");
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            atts.push_back({{a, b}, at});
        } else if (t.text == "rc") {
            ++pos_;
            expect(Tok::LParen, "'('");
            Token at = cur();
            auto a = ident("argument name");
            expect(Tok::RParen, "')'");
            expect(Tok::Colon, "':'");
            size_t begin = pos_;
            while (cur().kind != Tok::Dot && cur().kind != Tok::End) ++pos_;
            if (cur().kind != Tok::Dot) err(cur(), "expected '.' to end rc line");
            rcs.push_back({a, at, begin, pos_});
            ++pos_;
        } else if (t.text == "constraint") {
            ++pos_;
            expect(Tok::Colon, "':'");
            size_t begin = pos_;
            while (cur().kind != Tok::Dot && cur().kind != Tok::End) ++pos_;
            if (cur().kind != Tok::Dot) err(cur(), "expected '.' to end constraint");
            size_t end = pos_;
            if (constraint) err(t, "duplicate constraint line");
            constraint_at = t;
            constraint = formula_range(begin, end);
            pos_ = end + 1;
        } else {
            err(t, "unknown statement '" + t.text + "'");
        }
    }

    FormulaPtr iff() {
        auto lhs = implies();
        if (pos_ < end_ && cur().kind == Tok::Iff) {
            ++pos_;
            return f_iff(lhs, iff());
        }
        return lhs;
    }

    FormulaPtr implies() {
        auto lhs = disj();
        if (pos_ < end_ && cur().kind == Tok::Arrow) {
            ++pos_;
            return f_implies(lhs, implies());
        }
        return lhs;
    }

    FormulaPtr disj() {
        std::vector<FormulaPtr> xs{conj()};
        while (pos_ < end_ && cur().kind == Tok::Bar) {
            ++pos_;
            xs.push_back(conj());
        }
        return f_or(std::move(xs));
    }

    FormulaPtr conj() {
        std::vector<FormulaPtr> xs{unary()};
        while (pos_ < end_ && cur().kind == Tok::Amp) {
            ++pos_;
            xs.push_back(unary());
        }
        return f_and(std::move(xs));
    }

    FormulaPtr unary() {
        if (pos_ >= end_) err(cur(), "unexpected end of formula");
        const Token& t = cur();
        if (t.kind == Tok::Tilde) {
            ++pos_;
            return f_not(unary());
        }
        if (t.kind == Tok::LParen) {
            ++pos_;
            auto f = iff();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.kind == Tok::Ident) {
            ++pos_;
            if (t.text == "true") return f_true();
            if (t.text == "false") return f_false();
            if (!valid_identifier(t.text)) err(t, "invalid identifier '" + t.text + "'");
            return f_atom(t.text);
        }
        if (t.kind == Tok::If) err(t, "mixed classical/asp modes: rule syntax in a classical condition");
        err(t, "unexpected '" + t.text + "' in formula");
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    size_t end_ = static_cast<size_t>(-1);
};

inline bool range_has(const DocParser& p, size_t b, size_t e, std::initializer_list<Tok> kinds) {
    for (size_t i = b; i < e; ++i)
        for (auto k : kinds)
            if (p.tok(i).kind == k) return true;
    return false;
}

inline AF build_af(DocParser& p) {
    AF f;
    for (const auto& [name, at] : p.args) {
        if (f.is_argument(name)) DocParser::err(at, "duplicate argument declaration '" + name + "'");
        f.add_argument(name);
    }
    for (const auto& [pair, at] : p.atts) {
        if (!f.is_argument(pair.first)) DocParser::err(at, "undeclared argument '" + pair.first + "'");
        if (!f.is_argument(pair.second)) DocParser::err(at, "undeclared argument '" + pair.second + "'");
        f.add_attack(pair.first, pair.second);
    }
    return f;
}

} // namespace detail

inline RAF parse_raf(const std::string& text) {
    detail::DocParser p(text);
    p.parse_statements();
    if (p.constraint) detail::DocParser::err(p.constraint_at, "constraint lines belong to CAF documents");
    RAF g = make_raf(detail::build_af(p), p.mode.value_or(Mode::classical));
    if (g.af.args.empty()) throw InputError("document declares no arguments");
    for (const auto& rc : p.rcs) {
        if (!g.af.is_argument(rc.arg)) detail::DocParser::err(rc.at, "undeclared argument '" + rc.arg + "'");
        if (g.mode == Mode::classical) {
            if (detail::range_has(p, rc.begin, rc.end, {detail::Tok::If}))
                detail::DocParser::err(p.tok(rc.begin), "mixed classical/asp modes: rule in a classical document");
            if (rc.begin == rc.end) detail::DocParser::err(rc.at, "empty condition");
            g.add_formula(rc.arg, p.formula_range(rc.begin, rc.end));
        } else {
            if (detail::range_has(p, rc.begin, rc.end,
                                  {detail::Tok::Tilde, detail::Tok::Amp, detail::Tok::Arrow, detail::Tok::Iff}))
                detail::DocParser::err(p.tok(rc.begin), "mixed classical/asp modes: formula in an asp document");
            if (rc.begin == rc.end) detail::DocParser::err(rc.at, "empty rule");
            g.add_rule(rc.arg, p.rule_range(rc.begin, rc.end));
        }
    }
    return g;
}

inline CAF parse_caf(const std::string& text) {
    detail::DocParser p(text);
    p.parse_statements();
    if (!p.rcs.empty()) detail::DocParser::err(p.rcs.front().at, "rc lines are not allowed in CAF documents");
    if (p.mode && *p.mode != Mode::classical) detail::DocParser::err(p.mode_at, "CAF documents are classical");
    CAF c;
    c.af = detail::build_af(p);
    if (c.af.args.empty()) throw InputError("document declares no arguments");
    c.constraint = p.constraint.value_or(f_true());
    for (const auto& v : vars(c.constraint))
        if (!c.af.is_argument(v)) detail::DocParser::err(p.constraint_at, "undeclared argument '" + v + "' in constraint");
    return c;
}

inline std::string render_af_lines(const AF& f) {
    std::ostringstream os;
    for (const auto& a : f.args) os << "arg(" << a << ").\n";
    for (auto [a, b] : f.attacks) os << "att(" << f.args[a] << "," << f.args[b] << ").\n";
    return os.str();
}

inline std::string render_raf(const RAF& g) {
    std::ostringstream os;
    os << "#mode " << (g.mode == Mode::asp ? "asp" : "classical") << ".\n";
    os << render_af_lines(g.af);
    for (int a = 0; a < g.size(); ++a) {
        if (g.mode == Mode::classical) {
            for (const auto& f : g.formulas[a]) os << "rc(" << g.af.args[a] << "): " << to_string(f) << ".\n";
        } else {
            for (const auto& r : g.rules[a]) os << "rc(" << g.af.args[a] << "): " << to_string(r) << ".\n";
        }
    }
    return os.str();
}

inline std::string render_caf(const CAF& c) {
    std::ostringstream os;
    os << render_af_lines(c.af);
    os << "constraint: " << to_string(c.constraint) << ".\n";
    return os.str();
}

inline bool same_af(const AF& a, const AF& b) { return a.args == b.args && a.attacks == b.attacks; }

inline bool same_raf(const RAF& a, const RAF& b) {
    if (!same_af(a.af, b.af) || a.mode != b.mode) return false;
    if (a.rules != b.rules) return false;
    if (a.formulas.size() != b.formulas.size()) return false;
    for (size_t i = 0; i < a.formulas.size(); ++i) {
        if (a.formulas[i].size() != b.formulas[i].size()) return false;
        for (size_t j = 0; j < a.formulas[i].size(); ++j)
            if (!structurally_equal(*a.formulas[i][j], *b.formulas[i][j])) return false;
    }
    return true;
}

} // namespace raf
