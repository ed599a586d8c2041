#pragma once

#include "af_semantics.hpp"
#include "logic.hpp"

namespace raf {

struct RejectionInstance {
    Mode mode = Mode::classical;
    std::vector<FormulaPtr> formulas; // classical: C(E)
    Assignment fixed;                 // classical: e -> 1, a -> 0
    Program program;                  // asp: C(E), facts E, constraints :- a
};

inline RejectionInstance rejection_instance(const RAF& g, ArgSet e) {
    check_subset(g.af, e);
    RejectionInstance ri;
    ri.mode = g.mode;
    for (int a = 0; a < g.size(); ++a) {
        if (has(e, a)) {
            if (g.mode == Mode::classical) {
                ri.formulas.insert(ri.formulas.end(), g.formulas[a].begin(), g.formulas[a].end());
            } else {
                ri.program.insert(ri.program.end(), g.rules[a].begin(), g.rules[a].end());
            }
        }
    }
    for (int a = 0; a < g.size(); ++a) {
        const auto& name = g.af.args[a];
        if (g.mode == Mode::classical) {
            ri.fixed[name] = has(e, a);
        } else {
            ri.program.push_back(has(e, a) ? make_rule({name}) : make_rule({}, {name}));
        }
    }
    return ri;
}

inline bool consistent(const RejectionInstance& ri, const Caps& caps = {}) {
    if (ri.mode == Mode::classical) return classical_consistent(ri.formulas, ri.fixed, caps.logic);
    return asp_consistent(ri.program, caps.logic);
}

// Whether maximality for pref/semiSt/stag is judged among base-AF sets (the default) or among the
// RAF's own admissible/conflict-free extensions.
enum class MaximalityScope { base, raf };

// Rejection checks memoized per candidate set.
class Rejection {
public:
    Rejection(const RAF& g, Caps caps) : g_(g), caps_(caps) {}

    bool rejected(ArgSet e) {
        if (e == 0) return false;
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        bool r = !consistent(rejection_instance(g_, e), caps_);
        memo_[e] = r;
        return r;
    }

private:
    const RAF& g_;
    Caps caps_;
    std::map<ArgSet, bool> memo_;
};

inline std::vector<ArgSet> enumerate_extension_sets(const RAF& g, Semantics sem, const Caps& caps = {},
                                                    MaximalityScope scope = MaximalityScope::base) {
    Rejection rej(g, caps);
    auto keep_rejected = [&](const std::vector<ArgSet>& xs) {
        std::vector<ArgSet> out;
        for (auto s : xs)
            if (rej.rejected(s)) out.push_back(s);
        return out;
    };
    bool maximal = sem == Semantics::pref || sem == Semantics::semiSt || sem == Semantics::stag;
    if (scope == MaximalityScope::base || !maximal) return keep_rejected(enumerate_sets(g.af, sem, caps));
    AttackIndex ix(g.af);
    auto pool = keep_rejected(enumerate_sets(g.af, sem == Semantics::stag ? Semantics::conf : Semantics::adm, caps));
    std::vector<ArgSet> out;
    if (sem == Semantics::pref) {
        out = maximal_by(pool, [](ArgSet s) { return s; });
    } else {
        out = maximal_by(pool, [&](ArgSet s) { return ix.range(s); });
    }
    sort_sets(g.af, out);
    return out;
}

inline std::vector<Extension> enumerate_extensions(const RAF& g, Semantics sem, const Caps& caps = {},
                                                   MaximalityScope scope = MaximalityScope::base) {
    AttackIndex ix(g.af);
    std::vector<Extension> out;
    for (auto s : enumerate_extension_sets(g, sem, caps, scope)) out.push_back({s, ix.range(s)});
    return out;
}

inline bool is_extension(const RAF& g, ArgSet e, Semantics sem, const Caps& caps = {},
                         MaximalityScope scope = MaximalityScope::base) {
    check_subset(g.af, e);
    if (e == 0) return false;
    bool maximal = sem == Semantics::pref || sem == Semantics::semiSt || sem == Semantics::stag;
    if (scope == MaximalityScope::raf && maximal) {
        auto all = enumerate_extension_sets(g, sem, caps, scope);
        return std::find(all.begin(), all.end(), e) != all.end();
    }
    if (!satisfies(g.af, e, sem, caps)) return false;
    return !consistent(rejection_instance(g, e), caps);
}

inline bool cons(const RAF& g, Semantics sem, const Caps& caps = {}, MaximalityScope scope = MaximalityScope::base) {
    if (scope == MaximalityScope::raf || sem == Semantics::pref || sem == Semantics::semiSt || sem == Semantics::stag)
        return !enumerate_extension_sets(g, sem, caps, scope).empty();
    Rejection rej(g, caps);
    for (auto s : enumerate_sets(g.af, sem, caps))
        if (rej.rejected(s)) return true;
    return false;
}

// Existence via a guessed admissible (semiSt) or conflict-free (stag) set that is rejected, without
// any maximality check.
inline bool cons_via_shortcut(const RAF& g, Semantics sem, const Caps& caps = {}) {
    if (sem != Semantics::semiSt && sem != Semantics::stag)
        throw InputError("the shortcut applies to semiSt and stag only");
    Rejection rej(g, caps);
    for (auto s : enumerate_sets(g.af, sem == Semantics::stag ? Semantics::conf : Semantics::adm, caps))
        if (rej.rejected(s)) return true;
    return false;
}

inline bool cred(const RAF& g, Semantics sem, const std::string& arg, const Caps& caps = {},
                 MaximalityScope scope = MaximalityScope::base) {
    int c = g.af.id(arg);
    for (auto s : enumerate_extension_sets(g, sem, caps, scope))
        if (has(s, c)) return true;
    return false;
}

} // namespace raf
