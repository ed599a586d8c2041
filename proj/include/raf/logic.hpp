#pragma once

#include "core.hpp"
#include "sat.hpp"

#include <functional>

namespace raf {

using Assignment = std::map<std::string, bool>;
using AtomSet = std::set<std::string>;

inline bool evaluate(const Formula& f, const Assignment& nu) {
    using K = Formula::Kind;
    switch (f.kind) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: {
        auto it = nu.find(f.atom);
        if (it == nu.end()) throw InputError("unassigned variable '" + f.atom + "'");
        return it->second;
    }
    case K::Not: return !evaluate(*f.args[0], nu);
    case K::And:
        for (const auto& a : f.args)
            if (!evaluate(*a, nu)) return false;
        return true;
    case K::Or:
        for (const auto& a : f.args)
            if (evaluate(*a, nu)) return true;
        return false;
    case K::Implies: return !evaluate(*f.args[0], nu) || evaluate(*f.args[1], nu);
    case K::Iff: return evaluate(*f.args[0], nu) == evaluate(*f.args[1], nu);
    }
    return false;
}

inline bool evaluate(const FormulaPtr& f, const Assignment& nu) { return evaluate(*f, nu); }

// Partial evaluation with constant folding.
inline FormulaPtr simplify(const FormulaPtr& f, const Assignment& fixed) {
    using K = Formula::Kind;
    auto is = [](const FormulaPtr& g, K k) { return g->kind == k; };
    switch (f->kind) {
    case K::True:
    case K::False: return f;
    case K::Atom: {
        auto it = fixed.find(f->atom);
        if (it == fixed.end()) return f;
        return it->second ? f_true() : f_false();
    }
    case K::Not: {
        auto a = simplify(f->args[0], fixed);
        if (is(a, K::True)) return f_false();
        if (is(a, K::False)) return f_true();
        return f_not(a);
    }
    case K::And:
    case K::Or: {
        bool conj = f->kind == K::And;
        std::vector<FormulaPtr> kids;
        for (const auto& x : f->args) {
            auto a = simplify(x, fixed);
            if (is(a, conj ? K::False : K::True)) return a;
            if (is(a, conj ? K::True : K::False)) continue;
            kids.push_back(a);
        }
        return conj ? f_and(std::move(kids)) : f_or(std::move(kids));
    }
    case K::Implies:
        return simplify(f_or({f_not(f->args[0]), f->args[1]}), fixed);
    case K::Iff: {
        auto a = simplify(f->args[0], fixed), b = simplify(f->args[1], fixed);
        if (is(a, K::True)) return b;
        if (is(b, K::True)) return a;
        if (is(a, K::False)) return simplify(f_not(b), {});
        if (is(b, K::False)) return simplify(f_not(a), {});
        return f_iff(a, b);
    }
    }
    return f;
}

// Tseitin transformation with full biconditional definitions. Variables 1..n name the atoms of
// the formula in sorted order; auxiliaries follow.
struct TseitinCnf {
    std::vector<std::string> names; // names[v-1]
    std::map<std::string, int> var;
    int num_atoms = 0;
    std::vector<Clause> clauses;
    int output = 0;

    int num_vars() const { return static_cast<int>(names.size()); }
};

namespace detail {

struct TseitinBuilder {
    TseitinCnf& out;

    int fresh() {
        out.names.push_back("__t" + std::to_string(out.names.size() - out.num_atoms + 1));
        return out.num_vars();
    }

    int encode(const Formula& f) {
        using K = Formula::Kind;
        switch (f.kind) {
        case K::Atom: return out.var.at(f.atom);
        case K::Not: return -encode(*f.args[0]);
        case K::True:
        case K::False: {
            int t = fresh();
            out.clauses.push_back({f.kind == K::True ? t : -t});
            return t;
        }
        case K::And:
        case K::Or: {
            std::vector<int> xs;
            for (const auto& a : f.args) xs.push_back(encode(*a));
            int t = fresh();
            bool conj = f.kind == K::And;
            // conj: t -> x_i, (x_1 & ... ) -> t ; disj dual
            Clause big{conj ? t : -t};
            for (int x : xs) {
                out.clauses.push_back(conj ? Clause{-t, x} : Clause{t, -x});
                big.push_back(conj ? -x : x);
            }
            out.clauses.push_back(big);
            return t;
        }
        case K::Implies: {
            int a = encode(*f.args[0]), b = encode(*f.args[1]);
            int t = fresh();
            out.clauses.push_back({-t, -a, b});
            out.clauses.push_back({t, a});
            out.clauses.push_back({t, -b});
            return t;
        }
        case K::Iff: {
            int a = encode(*f.args[0]), b = encode(*f.args[1]);
            int t = fresh();
            out.clauses.push_back({-t, -a, b});
            out.clauses.push_back({-t, a, -b});
            out.clauses.push_back({t, a, b});
            out.clauses.push_back({t, -a, -b});
            return t;
        }
        }
        return 0;
    }
};

} // namespace detail

inline TseitinCnf tseitin(const FormulaPtr& f, const std::set<std::string>& extra_atoms = {}) {
    TseitinCnf out;
    auto vs = vars(f);
    vs.insert(extra_atoms.begin(), extra_atoms.end());
    for (const auto& v : vs) {
        out.names.push_back(v);
        out.var[v] = out.num_vars();
    }
    out.num_atoms = out.num_vars();
    detail::TseitinBuilder b{out};
    out.output = b.encode(*f);
    return out;
}

// Satisfiability of the conjunction of φs with some variables fixed. The free variables are counted
// against the cap.
inline bool classical_consistent(const std::vector<FormulaPtr>& phis, const Assignment& fixed, int cap = 22) {
    auto conj = f_and(phis);
    size_t free = 0;
    for (const auto& v : vars(conj))
        if (!fixed.count(v)) ++free;
    if (static_cast<int>(free) > cap)
        throw CapExceeded(std::to_string(free) + " free variables exceed the logic cap " + std::to_string(cap));
    auto residual = simplify(conj, fixed);
    if (residual->kind == Formula::Kind::True) return true;
    if (residual->kind == Formula::Kind::False) return false;
    auto cnf = tseitin(residual);
    Sat s(cnf.num_vars());
    for (auto& c : cnf.clauses) s.add_clause(c);
    s.add_clause({cnf.output});
    return s.solve();
}

// Clauses equivalent to φ over var(φ), read off the truth table. Used where auxiliary variables are
// not allowed.
inline std::vector<std::vector<std::pair<std::string, bool>>> truth_table_cnf(const FormulaPtr& f, int max_vars = 16) {
    auto vset = vars(f);
    std::vector<std::string> vs(vset.begin(), vset.end());
    if (static_cast<int>(vs.size()) > max_vars)
        throw CapExceeded("condition over " + std::to_string(vs.size()) + " variables is too large to clausify");
    std::vector<std::vector<std::pair<std::string, bool>>> out;
    // clause-shaped formulas are kept verbatim
    std::function<bool(const FormulaPtr&, std::vector<std::pair<std::string, bool>>&)> as_clause =
        [&](const FormulaPtr& g, std::vector<std::pair<std::string, bool>>& lits) -> bool {
        using K = Formula::Kind;
        switch (g->kind) {
        case K::Atom: lits.push_back({g->atom, true}); return true;
        case K::Not:
            if (g->args[0]->kind == K::Atom) {
                lits.push_back({g->args[0]->atom, false});
                return true;
            }
            return false;
        case K::False: return true;
        case K::Or:
            for (const auto& a : g->args)
                if (!as_clause(a, lits)) return false;
            return true;
        case K::Implies: {
            const auto& lhs = g->args[0];
            if (lhs->kind == K::Atom)
                lits.push_back({lhs->atom, false});
            else if (lhs->kind == K::Not && lhs->args[0]->kind == K::Atom)
                lits.push_back({lhs->args[0]->atom, true});
            else
                return false;
            return as_clause(g->args[1], lits);
        }
        default: return false;
        }
    };
    std::vector<std::pair<std::string, bool>> lits;
    if (f->kind == Formula::Kind::True) return out;
    if (as_clause(f, lits)) {
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        for (size_t i = 1; i < lits.size(); ++i)
            if (lits[i].first == lits[i - 1].first) return out; // tautology
        out.push_back(lits);
        return out;
    }
    size_t n = vs.size();
    for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) {
        Assignment nu;
        for (size_t i = 0; i < n; ++i) nu[vs[i]] = (m >> i) & 1;
        if (evaluate(f, nu)) continue;
        std::vector<std::pair<std::string, bool>> c;
        for (size_t i = 0; i < n; ++i) c.push_back({vs[i], !nu[vs[i]]});
        out.push_back(c);
    }
    return out;
}

// ---------------------------------------------------------------- answer set programming

inline Program gl_reduct(const Program& p, const AtomSet& m) {
    Program out;
    for (const auto& r : p) {
        bool blocked = false;
        for (const auto& b : r.neg)
            if (m.count(b)) blocked = true;
        if (!blocked) out.push_back(Rule{r.head, r.pos, {}});
    }
    return out;
}

inline bool body_true(const Rule& r, const AtomSet& m) {
    for (const auto& b : r.pos)
        if (!m.count(b)) return false;
    for (const auto& b : r.neg)
        if (m.count(b)) return false;
    return true;
}

inline bool is_model(const Program& p, const AtomSet& m) {
    for (const auto& r : p) {
        if (!body_true(r, m)) continue;
        bool ok = false;
        for (const auto& h : r.head)
            if (m.count(h)) ok = true;
        if (!ok) return false;
    }
    return true;
}

inline bool is_answer_set(const Program& p, const AtomSet& m, int cap = 22) {
    if (static_cast<int>(m.size()) > cap)
        throw CapExceeded("candidate of size " + std::to_string(m.size()) + " exceeds the logic cap");
    Program red = gl_reduct(p, m);
    if (!is_model(red, m)) return false;
    bool normal = true;
    for (const auto& r : red)
        if (r.head.size() > 1) normal = false;
    if (normal) {
        // least model of the definite part
        AtomSet least;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : red) {
                if (r.head.empty() || least.count(r.head[0])) continue;
                if (body_true(r, least)) {
                    least.insert(r.head[0]);
                    changed = true;
                }
            }
        }
        return least == m;
    }
    // search for a model M' ⊊ M of the reduct; atoms outside M stay false
    std::vector<std::string> atoms(m.begin(), m.end());
    std::map<std::string, int> id;
    for (size_t i = 0; i < atoms.size(); ++i) id[atoms[i]] = static_cast<int>(i) + 1;
    Sat s(static_cast<int>(atoms.size()));
    for (const auto& r : red) {
        bool applicable = true;
        for (const auto& b : r.pos)
            if (!m.count(b)) applicable = false;
        if (!applicable) continue;
        Clause c;
        for (const auto& b : r.pos) c.push_back(-id[b]);
        for (const auto& h : r.head)
            if (m.count(h)) c.push_back(id[h]);
        s.add_clause(c);
    }
    Clause smaller;
    for (size_t i = 0; i < atoms.size(); ++i) smaller.push_back(-static_cast<int>(i + 1));
    s.add_clause(smaller);
    return !s.solve();
}

// Answer-set existence. Candidates are the supported models, enumerated with a SAT solver over the
// atoms; each is then checked for minimality.
inline std::optional<AtomSet> find_answer_set(const Program& p, int cap = 22) {
    auto at = atoms(p);
    if (static_cast<int>(at.size()) > cap)
        throw CapExceeded(std::to_string(at.size()) + " atoms exceed the logic cap " + std::to_string(cap));
    std::vector<std::string> names(at.begin(), at.end());
    std::map<std::string, int> id;
    for (size_t i = 0; i < names.size(); ++i) id[names[i]] = static_cast<int>(i) + 1;
    Sat s(static_cast<int>(names.size()));
    std::map<std::string, Clause> support;
    for (const auto& n : names) support[n] = {-id[n]};
    for (const auto& r : p) {
        Clause c;
        for (const auto& h : r.head) c.push_back(id[h]);
        for (const auto& b : r.pos) c.push_back(-id[b]);
        for (const auto& b : r.neg) c.push_back(id[b]);
        s.add_clause(c);
        for (const auto& h : r.head) {
            // β <-> body ∧ other heads false
            int beta = s.new_var();
            Clause back{beta};
            auto lit = [&](int l) {
                s.add_clause({-beta, l});
                back.push_back(-l);
            };
            for (const auto& b : r.pos) lit(id[b]);
            for (const auto& b : r.neg) lit(-id[b]);
            for (const auto& o : r.head)
                if (o != h) lit(-id[o]);
            s.add_clause(back);
            support[h].push_back(beta);
        }
    }
    for (auto& [_, c] : support) s.add_clause(c);
    std::vector<int> proj;
    for (size_t i = 0; i < names.size(); ++i) proj.push_back(static_cast<int>(i) + 1);
    std::optional<AtomSet> found;
    s.enumerate(proj, [&] {
        AtomSet m;
        for (size_t i = 0; i < names.size(); ++i)
            if (s.model_value(static_cast<int>(i) + 1)) m.insert(names[i]);
        if (is_answer_set(p, m, cap)) {
            found = m;
            return true;
        }
        return false;
    });
    return found;
}

inline bool asp_consistent(const Program& p, int cap = 22) { return find_answer_set(p, cap).has_value(); }

// Model check plus justification; agrees with is_answer_set on tight programs.
inline bool justified_model_check(const Program& p, const AtomSet& m) {
    if (!is_tight(p)) throw InputError("justified model check requires a tight program");
    if (!is_model(p, m)) return false;
    for (const auto& a : m) {
        bool justified = false;
        for (const auto& r : p) {
            if (std::find(r.head.begin(), r.head.end(), a) == r.head.end() || !body_true(r, m)) continue;
            bool alone = true;
            for (const auto& h : r.head)
                if (h != a && m.count(h)) alone = false;
            if (alone) {
                justified = true;
                break;
            }
        }
        if (!justified) return false;
    }
    return true;
}

} // namespace raf
