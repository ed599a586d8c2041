#pragma once

#include "raf/raf.hpp"

#include <random>

namespace raf::testing {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::vector<std::string> names(const std::string& stem, int n) {
    std::vector<std::string> out;
    for (int i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

inline AF random_af(Rng& rng, int n, double p_attack = 0.25) {
    AF f;
    for (const auto& a : names("a", n)) f.add_argument(a);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (chance(rng, a == b ? p_attack / 3 : p_attack)) f.add_attack(a, b);
    return f;
}

inline FormulaPtr random_formula(Rng& rng, const std::vector<std::string>& atoms, int depth) {
    if (depth == 0 || chance(rng, 0.3)) {
        if (chance(rng, 0.05)) return chance(rng, 0.5) ? f_true() : f_false();
        auto a = f_atom(atoms[uniform(rng, 0, static_cast<int>(atoms.size()) - 1)]);
        return chance(rng, 0.4) ? f_not(a) : a;
    }
    auto sub = [&] { return random_formula(rng, atoms, depth - 1); };
    switch (uniform(rng, 0, 5)) {
    case 0: return f_not(sub());
    case 1:
    case 2: return f_and({sub(), sub()});
    case 3:
    case 4: return f_or({sub(), sub()});
    default: return chance(rng, 0.5) ? f_implies(sub(), sub()) : f_iff(sub(), sub());
    }
}

// Classical RAF; simple when n_aux is 0.
inline RAF random_classical_raf(Rng& rng, int n, int n_aux, double p_rc = 0.6, int depth = 2) {
    RAF g = make_raf(random_af(rng, n), Mode::classical);
    auto atoms = g.af.args;
    for (const auto& p : names("p", n_aux)) atoms.push_back(p);
    for (const auto& a : g.af.args)
        if (chance(rng, p_rc)) {
            int k = uniform(rng, 1, 2);
            for (int i = 0; i < k; ++i) g.add_formula(a, random_formula(rng, atoms, depth));
        }
    return g;
}

// Clause-shaped classical RAF, to keep encodings small.
inline RAF random_clausal_raf(Rng& rng, int n, int n_aux, double p_rc = 0.6) {
    RAF g = make_raf(random_af(rng, n), Mode::classical);
    auto atoms = g.af.args;
    for (const auto& p : names("p", n_aux)) atoms.push_back(p);
    for (const auto& a : g.af.args)
        if (chance(rng, p_rc)) {
            int k = uniform(rng, 1, 2);
            for (int i = 0; i < k; ++i) {
                std::vector<FormulaPtr> lits;
                int w = uniform(rng, 1, 2);
                for (int j = 0; j < w; ++j) {
                    auto x = f_atom(atoms[uniform(rng, 0, static_cast<int>(atoms.size()) - 1)]);
                    lits.push_back(chance(rng, 0.5) ? f_not(x) : x);
                }
                g.add_formula(a, f_or(lits));
            }
        }
    return g;
}

enum class ProgramKind { tight, normal, disjunctive };

// Program-mode RAF. Tight programs only use positive body atoms that precede the head atom.
inline RAF random_asp_raf(Rng& rng, int n, int n_aux, ProgramKind kind, double p_rc = 0.6) {
    RAF g = make_raf(random_af(rng, n), Mode::asp);
    auto aux = names("q", n_aux);
    std::vector<std::string> atoms = aux;
    for (const auto& a : g.af.args) atoms.push_back(a);
    auto pick = [&](const std::vector<std::string>& pool) { return pool[uniform(rng, 0, static_cast<int>(pool.size()) - 1)]; };
    for (const auto& a : g.af.args) {
        if (!chance(rng, p_rc)) continue;
        int k = uniform(rng, 1, 3);
        for (int i = 0; i < k; ++i) {
            Rule r;
            int heads = aux.empty() || chance(rng, 0.25) ? 0 : (kind == ProgramKind::disjunctive && chance(rng, 0.4) ? 2 : 1);
            for (int h = 0; h < heads; ++h) r.head.push_back(pick(aux));
            int nb = uniform(rng, heads == 0 ? 1 : 0, 2);
            for (int b = 0; b < nb; ++b) {
                auto x = pick(atoms);
                if (chance(rng, 0.5)) {
                    r.neg.push_back(x);
                } else if (kind == ProgramKind::tight && !r.head.empty()) {
                    // positive auxiliary atoms precede every head atom, so dependencies stay acyclic
                    auto pos = std::find(aux.begin(), aux.end(), x);
                    bool ok = true;
                    for (const auto& h : r.head)
                        if (pos != aux.end() && pos >= std::find(aux.begin(), aux.end(), h)) ok = false;
                    if (ok) r.pos.push_back(x);
                } else {
                    r.pos.push_back(x);
                }
            }
            g.add_rule(a, r);
        }
    }
    return g;
}

inline CAF random_caf(Rng& rng, int n, int depth = 3) {
    CAF c;
    c.af = random_af(rng, n);
    c.constraint = random_formula(rng, c.af.args, depth);
    return c;
}

// ---------------------------------------------------------------- worked examples

inline RAF grill_base() {
    return parse_raf("arg(noS). arg(W). arg(T). arg(P).\n"
                     "att(noS,T). att(noS,P). att(W,noS).\n");
}

inline RAF grill_raf() {
    return parse_raf("arg(noS). arg(W). arg(T). arg(P). arg(Te). arg(Re).\n"
                     "att(noS,T). att(noS,P). att(W,noS). att(Re,Te). att(Te,W).\n"
                     "rc(W): (~p_hw | ~p_dl) & (p_dl -> p_hw).\n"
                     "rc(P): p_dl.\n"
                     "rc(T): p_dl.\n"
                     "rc(Te): p_exp.\n"
                     "rc(Re): ~p_exp & (p_hw -> p_exp).\n");
}

inline RAF asp_raf() {
    return parse_raf("#mode asp.\n"
                     "arg(a). arg(b). arg(c). arg(d).\n"
                     "att(a,c). att(b,c). att(b,d). att(d,b).\n"
                     "rc(b): :- a.\n"
                     "rc(d): :- not a, not b.\n");
}

// the decomposition printed alongside the primal graph of grill_raf()
inline TreeDecomposition grill_td() {
    TreeDecomposition td;
    int r = td.add_node({"noS", "P", "p_dl"});
    td.add_node({"T", "noS", "p_dl"}, r);
    int c = td.add_node({"noS", "W", "p_dl"}, r);
    c = td.add_node({"W", "p_dl", "p_hw"}, c);
    c = td.add_node({"W", "p_hw", "Te"}, c);
    td.add_node({"Te", "p_hw", "p_exp", "Re"}, c);
    return td;
}

// a<->b, a->c, b->c, e->d, e->e
inline AF hybrid_af() {
    return make_af({"a", "b", "c", "d", "e"}, {{"a", "b"}, {"b", "a"}, {"a", "c"}, {"b", "c"}, {"e", "d"}, {"e", "e"}});
}

// ∃x1,x2 ∀y. (x1 ∧ ¬x2 ∧ y) ∨ (x1 ∧ ¬x2 ∧ ¬y)
inline Qbf exists_forall_qbf() {
    Qbf q;
    q.add_block(Quant::exists, std::vector<std::string>{"x1", "x2"});
    q.add_block(Quant::forall, std::vector<std::string>{"y"});
    q.dnf.push_back({q.lit("x1", true), q.lit("x2", false), q.lit("y", true)});
    q.dnf.push_back({q.lit("x1", true), q.lit("x2", false), q.lit("y", false)});
    return q;
}

inline std::set<std::vector<std::string>> name_sets(const AF& f, const std::vector<ArgSet>& sets) {
    std::set<std::vector<std::string>> out;
    for (auto s : sets) out.insert(f.names(s));
    return out;
}

inline std::vector<ArgSet> without_empty(std::vector<ArgSet> sets) {
    sets.erase(std::remove(sets.begin(), sets.end(), ArgSet{0}), sets.end());
    return sets;
}

} // namespace raf::testing
