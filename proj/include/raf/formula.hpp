#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace raf {

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { True, False, Atom, Not, And, Or, Implies, Iff };
    Kind kind = Kind::True;
    std::string atom;
    std::vector<FormulaPtr> args;
};

inline FormulaPtr f_true() {
    static const FormulaPtr t = std::make_shared<Formula>(Formula{Formula::Kind::True, {}, {}});
    return t;
}

inline FormulaPtr f_false() {
    static const FormulaPtr f = std::make_shared<Formula>(Formula{Formula::Kind::False, {}, {}});
    return f;
}

inline FormulaPtr f_atom(std::string name) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Atom, std::move(name), {}});
}

inline FormulaPtr f_not(FormulaPtr x) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Not, {}, {std::move(x)}});
}

// n-ary; an empty conjunction is true and an empty disjunction is false
inline FormulaPtr f_and(std::vector<FormulaPtr> xs) {
    if (xs.empty()) return f_true();
    if (xs.size() == 1) return xs.front();
    return std::make_shared<Formula>(Formula{Formula::Kind::And, {}, std::move(xs)});
}

inline FormulaPtr f_or(std::vector<FormulaPtr> xs) {
    if (xs.empty()) return f_false();
    if (xs.size() == 1) return xs.front();
    return std::make_shared<Formula>(Formula{Formula::Kind::Or, {}, std::move(xs)});
}

inline FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Implies, {}, {std::move(a), std::move(b)}});
}

inline FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
    return std::make_shared<Formula>(Formula{Formula::Kind::Iff, {}, {std::move(a), std::move(b)}});
}

inline FormulaPtr f_lit(const std::string& atom, bool positive) {
    return positive ? f_atom(atom) : f_not(f_atom(atom));
}

inline void collect_vars(const Formula& f, std::set<std::string>& out) {
    if (f.kind == Formula::Kind::Atom) out.insert(f.atom);
    for (const auto& a : f.args) collect_vars(*a, out);
}

inline std::set<std::string> vars(const FormulaPtr& f) {
    std::set<std::string> out;
    collect_vars(*f, out);
    return out;
}

inline bool structurally_equal(const Formula& a, const Formula& b) {
    if (a.kind != b.kind || a.atom != b.atom || a.args.size() != b.args.size()) return false;
    for (size_t i = 0; i < a.args.size(); ++i)
        if (!structurally_equal(*a.args[i], *b.args[i])) return false;
    return true;
}

inline FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, std::string>& ren) {
    if (f->kind == Formula::Kind::Atom) {
        auto it = ren.find(f->atom);
        return it == ren.end() ? f : f_atom(it->second);
    }
    if (f->args.empty()) return f;
    std::vector<FormulaPtr> kids;
    kids.reserve(f->args.size());
    for (const auto& a : f->args) kids.push_back(substitute(a, ren));
    return std::make_shared<Formula>(Formula{f->kind, {}, std::move(kids)});
}

namespace detail {

inline int precedence(Formula::Kind k) {
    switch (k) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
    }
}

inline void render(const Formula& f, std::string& out, int ctx) {
    int p = precedence(f.kind);
    bool paren = p < ctx;
    if (paren) out += '(';
    switch (f.kind) {
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Atom: out += f.atom; break;
    case Formula::Kind::Not:
        out += '~';
        render(*f.args[0], out, 5);
        break;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
        const char* op = f.kind == Formula::Kind::And ? " & " : " | ";
        for (size_t i = 0; i < f.args.size(); ++i) {
            if (i) out += op;
            // nested same-kind operands get parentheses so the tree shape survives a round trip
            render(*f.args[i], out, p + 1);
        }
        break;
    }
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
        // both are parsed right-associatively; a left operand of equal precedence needs parentheses
        render(*f.args[0], out, p + 1);
        out += f.kind == Formula::Kind::Implies ? " -> " : " <-> ";
        render(*f.args[1], out, p + 1);
        break;
    }
    if (paren) out += ')';
}

} // namespace detail

inline std::string to_string(const FormulaPtr& f) {
    std::string s;
    detail::render(*f, s, 0);
    return s;
}

// Rules: H <- B+, not B-. An empty head is a constraint.
struct Rule {
    std::vector<std::string> head;
    std::vector<std::string> pos;
    std::vector<std::string> neg;

    void canonicalize() {
        for (auto* v : {&head, &pos, &neg}) {
            std::sort(v->begin(), v->end());
            v->erase(std::unique(v->begin(), v->end()), v->end());
        }
    }
    bool operator==(const Rule&) const = default;
    auto operator<=>(const Rule&) const = default;
};

inline Rule make_rule(std::vector<std::string> head, std::vector<std::string> pos = {},
                      std::vector<std::string> neg = {}) {
    Rule r{std::move(head), std::move(pos), std::move(neg)};
    r.canonicalize();
    return r;
}

inline std::set<std::string> atoms(const Rule& r) {
    std::set<std::string> s(r.head.begin(), r.head.end());
    s.insert(r.pos.begin(), r.pos.end());
    s.insert(r.neg.begin(), r.neg.end());
    return s;
}

using Program = std::vector<Rule>;

inline std::set<std::string> atoms(const Program& p) {
    std::set<std::string> s;
    for (const auto& r : p) {
        auto a = atoms(r);
        s.insert(a.begin(), a.end());
    }
    return s;
}

inline std::string to_string(const Rule& r) {
    std::string s;
    for (size_t i = 0; i < r.head.size(); ++i) {
        if (i) s += " | ";
        s += r.head[i];
    }
    if (r.pos.empty() && r.neg.empty()) {
        if (r.head.empty()) s += ":-";
        return s;
    }
    s += r.head.empty() ? ":- " : " :- ";
    bool first = true;
    for (const auto& b : r.pos) {
        if (!first) s += ", ";
        s += b;
        first = false;
    }
    for (const auto& b : r.neg) {
        if (!first) s += ", ";
        s += "not " + b;
        first = false;
    }
    return s;
}

} // namespace raf
