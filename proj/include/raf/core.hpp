#pragma once

#include "formula.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace raf {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bit set over argument indices. Enumeration caps keep frameworks far below 64.
using ArgSet = std::uint64_t;

inline bool has(ArgSet s, int i) { return (s >> i) & 1u; }
inline ArgSet bit(int i) { return ArgSet{1} << i; }
inline int popcount(ArgSet s) { return __builtin_popcountll(s); }

struct Caps {
    int af = 20;
    int logic = 22;
    int qbf = 24;
};

enum class Semantics { conf, adm, comp, pref, stab, semiSt, stag };
enum class Mode { classical, asp };
enum class RcClass { simple, propositional, tight, normal, disjunctive };

inline const std::vector<Semantics>& all_semantics() {
    static const std::vector<Semantics> v{Semantics::conf, Semantics::adm,  Semantics::comp,  Semantics::pref,
                                          Semantics::stab, Semantics::semiSt, Semantics::stag};
    return v;
}

inline std::string to_string(Semantics s) {
    switch (s) {
    case Semantics::conf: return "conf";
    case Semantics::adm: return "adm";
    case Semantics::comp: return "comp";
    case Semantics::pref: return "pref";
    case Semantics::stab: return "stab";
    case Semantics::semiSt: return "semiSt";
    case Semantics::stag: return "stag";
    }
    return "?";
}

inline std::optional<Semantics> parse_semantics(const std::string& s) {
    for (auto x : all_semantics())
        if (to_string(x) == s) return x;
    if (s == "semist" || s == "semi-stable") return Semantics::semiSt;
    if (s == "stage") return Semantics::stag;
    return std::nullopt;
}

inline std::string to_string(RcClass c) {
    switch (c) {
    case RcClass::simple: return "simple";
    case RcClass::propositional: return "propositional";
    case RcClass::tight: return "tight";
    case RcClass::normal: return "normal";
    case RcClass::disjunctive: return "disjunctive";
    }
    return "?";
}

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    if (std::isdigit(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return s != "not" && s != "true" && s != "false";
}

struct AF {
    std::vector<std::string> args;
    std::vector<std::pair<int, int>> attacks; // sorted, unique
    std::map<std::string, int> index;

    int size() const { return static_cast<int>(args.size()); }

    int add_argument(const std::string& name) {
        if (!valid_identifier(name)) throw InputError("invalid argument name '" + name + "'");
        if (index.count(name)) throw InputError("duplicate argument '" + name + "'");
        index[name] = size();
        args.push_back(name);
        return size() - 1;
    }

    int id(const std::string& name) const {
        auto it = index.find(name);
        if (it == index.end()) throw InputError("undeclared argument '" + name + "'");
        return it->second;
    }

    bool is_argument(const std::string& name) const { return index.count(name) > 0; }

    void add_attack(int a, int b) {
        auto p = std::make_pair(a, b);
        auto it = std::lower_bound(attacks.begin(), attacks.end(), p);
        if (it == attacks.end() || *it != p) attacks.insert(it, p);
    }

    void add_attack(const std::string& a, const std::string& b) { add_attack(id(a), id(b)); }

    bool attacks_pair(int a, int b) const {
        return std::binary_search(attacks.begin(), attacks.end(), std::make_pair(a, b));
    }

    ArgSet to_set(const std::vector<std::string>& names) const {
        ArgSet s = 0;
        for (const auto& n : names) s |= bit(id(n));
        return s;
    }

    std::vector<std::string> names(ArgSet s) const {
        std::vector<std::string> out;
        for (int i = 0; i < size(); ++i)
            if (has(s, i)) out.push_back(args[i]);
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline AF make_af(const std::vector<std::string>& args, const std::vector<std::pair<std::string, std::string>>& att) {
    AF f;
    for (const auto& a : args) f.add_argument(a);
    for (const auto& [a, b] : att) f.add_attack(a, b);
    return f;
}

// Rejection conditions: in classical mode C(a) is a set of formulas, in asp mode a set of rules.
// An empty set is the trivially satisfied condition.
struct RAF {
    AF af;
    Mode mode = Mode::classical;
    std::vector<std::vector<FormulaPtr>> formulas;
    std::vector<std::vector<Rule>> rules;

    int size() const { return af.size(); }

    void ensure_slots() {
        formulas.resize(af.args.size());
        rules.resize(af.args.size());
    }

    void add_formula(const std::string& arg, FormulaPtr f) {
        ensure_slots();
        formulas[af.id(arg)].push_back(std::move(f));
    }

    void add_rule(const std::string& arg, Rule r) {
        ensure_slots();
        r.canonicalize();
        rules[af.id(arg)].push_back(std::move(r));
    }

    bool empty_condition(int a) const {
        return mode == Mode::classical ? formulas[a].empty() : rules[a].empty();
    }
};

inline RAF make_raf(AF af, Mode mode = Mode::classical) {
    RAF g;
    g.af = std::move(af);
    g.mode = mode;
    g.ensure_slots();
    return g;
}

struct CAF {
    AF af;
    FormulaPtr constraint = f_true();
};

// var(C(a)): atoms mentioned by the condition of a
inline std::set<std::string> condition_vars(const RAF& g, int a) {
    std::set<std::string> s;
    if (g.mode == Mode::classical) {
        for (const auto& f : g.formulas[a]) collect_vars(*f, s);
    } else {
        for (const auto& r : g.rules[a]) {
            auto at = atoms(r);
            s.insert(at.begin(), at.end());
        }
    }
    return s;
}

inline std::set<std::string> condition_vars(const RAF& g) {
    std::set<std::string> s;
    for (int a = 0; a < g.size(); ++a) {
        auto v = condition_vars(g, a);
        s.insert(v.begin(), v.end());
    }
    return s;
}

// Atoms of the conditions that are not arguments.
inline std::vector<std::string> auxiliary_atoms(const RAF& g) {
    std::vector<std::string> out;
    for (const auto& v : condition_vars(g))
        if (!g.af.is_argument(v)) out.push_back(v);
    return out;
}

inline Program all_rules(const RAF& g) {
    Program p;
    for (const auto& rs : g.rules) p.insert(p.end(), rs.begin(), rs.end());
    return p;
}

namespace detail {

inline bool cycle_from(const std::string& v, const std::map<std::string, std::set<std::string>>& edges,
                       std::map<std::string, int>& state) {
    state[v] = 1;
    auto it = edges.find(v);
    if (it != edges.end()) {
        for (const auto& w : it->second) {
            int st = state[w];
            if (st == 1) return true;
            if (st == 0 && cycle_from(w, edges, state)) return true;
        }
    }
    state[v] = 2;
    return false;
}

inline bool has_cycle(const std::map<std::string, std::set<std::string>>& edges) {
    std::map<std::string, int> state;
    for (const auto& [v, _] : edges)
        if (state[v] == 0 && cycle_from(v, edges, state)) return true;
    return false;
}

} // namespace detail

// Dependency digraph: x -> y whenever x is in the head and y in the positive body of one rule.
inline std::map<std::string, std::set<std::string>> dependency_digraph(const Program& p) {
    std::map<std::string, std::set<std::string>> g;
    for (const auto& a : atoms(p)) g[a];
    for (const auto& r : p)
        for (const auto& h : r.head)
            for (const auto& b : r.pos) g[h].insert(b);
    return g;
}

inline bool is_tight(const Program& p) { return !detail::has_cycle(dependency_digraph(p)); }

inline RcClass classify_rc(const RAF& g) {
    if (g.mode == Mode::classical) {
        for (const auto& v : condition_vars(g))
            if (!g.af.is_argument(v)) return RcClass::propositional;
        return RcClass::simple;
    }
    Program p = all_rules(g);
    if (is_tight(p)) return RcClass::tight;
    for (const auto& r : p)
        if (r.head.size() > 1) return RcClass::disjunctive;
    return RcClass::normal;
}

inline void validate(const RAF& g) {
    const AF& f = g.af;
    if (f.args.empty()) throw ValidationError("af: argument set is empty");
    std::set<std::string> seen;
    for (size_t i = 0; i < f.args.size(); ++i) {
        if (!valid_identifier(f.args[i]))
            throw ValidationError("af.args[" + std::to_string(i) + "]: invalid name '" + f.args[i] + "'");
        if (!seen.insert(f.args[i]).second)
            throw ValidationError("af.args[" + std::to_string(i) + "]: duplicate argument '" + f.args[i] + "'");
        auto it = f.index.find(f.args[i]);
        if (it == f.index.end() || it->second != static_cast<int>(i))
            throw ValidationError("af.index: entry for '" + f.args[i] + "' is stale");
    }
    for (size_t i = 0; i < f.attacks.size(); ++i) {
        auto [a, b] = f.attacks[i];
        if (a < 0 || b < 0 || a >= f.size() || b >= f.size())
            throw ValidationError("af.attacks[" + std::to_string(i) + "]: endpoint is not a declared argument");
    }
    if (g.formulas.size() != f.args.size() || g.rules.size() != f.args.size())
        throw ValidationError("rc: condition map is not total");
    for (int a = 0; a < f.size(); ++a) {
        if (g.mode == Mode::classical && !g.rules[a].empty())
            throw ValidationError("rc(" + f.args[a] + "): rule condition in classical mode");
        if (g.mode == Mode::asp && !g.formulas[a].empty())
            throw ValidationError("rc(" + f.args[a] + "): formula condition in asp mode");
        for (const auto& v : condition_vars(g, a))
            if (!valid_identifier(v))
                throw ValidationError("rc(" + f.args[a] + "): invalid atom '" + v + "'");
    }
}

inline void validate(const CAF& c) {
    RAF g = make_raf(c.af);
    validate(g);
    for (const auto& v : vars(c.constraint))
        if (!c.af.is_argument(v)) throw ValidationError("constraint: atom '" + v + "' is not an argument");
}

} // namespace raf
