#pragma once

#include "qbf.hpp"
#include "raf_semantics.hpp"

#include <random>

namespace raf {

// Picks a suffix such that name+suffix is not already taken, for every name in `bases`.
inline std::string fresh_suffix(const std::set<std::string>& taken, const std::vector<std::string>& bases,
                                const std::string& stem) {
    for (int k = 0;; ++k) {
        std::string tag = k == 0 ? stem : stem + std::to_string(k);
        bool clash = false;
        for (const auto& b : bases)
            if (taken.count(b + tag)) clash = true;
        if (!clash) return tag;
    }
}

inline RAF af_to_raf(const AF& f) {
    RAF g = make_raf(f, Mode::classical);
    for (const auto& a : f.args) g.add_formula(a, f_false());
    return g;
}

// ---------------------------------------------------------------- CAF simulation

// The RAF built for σ reproduces the CAF σ-extensions under this base semantics.
inline Semantics caf_target_semantics(Semantics sem) {
    switch (sem) {
    case Semantics::pref:
    case Semantics::semiSt: return Semantics::adm;
    case Semantics::stag: return Semantics::conf;
    default: return sem;
    }
}

namespace detail {

struct CafNames {
    std::map<std::string, std::string> p, pp, d, dp;
};

inline CafNames caf_names(const AF& f) {
    std::set<std::string> taken(f.args.begin(), f.args.end());
    CafNames n;
    std::map<std::string, std::string>* maps[] = {&n.p, &n.pp, &n.d, &n.dp};
    const char* stems[] = {"__p", "__pp", "__d", "__dp"};
    for (int i = 0; i < 4; ++i) {
        auto tag = fresh_suffix(taken, f.args, stems[i]);
        for (const auto& a : f.args) {
            (*maps[i])[a] = a + tag;
            taken.insert(a + tag);
        }
    }
    return n;
}

// D (primed) is admissible, or only conflict-free when `conf_only`.
inline FormulaPtr primed_base(const AF& f, const CafNames& n, bool conf_only) {
    std::vector<FormulaPtr> parts;
    for (auto [a, b] : f.attacks)
        parts.push_back(f_or({f_not(f_atom(n.p.at(f.args[a]))), f_not(f_atom(n.p.at(f.args[b])))}));
    if (!conf_only) {
        for (auto [b, a] : f.attacks) {
            std::vector<FormulaPtr> d{f_not(f_atom(n.p.at(f.args[a])))};
            for (auto [c, bb] : f.attacks)
                if (bb == b) d.push_back(f_atom(n.p.at(f.args[c])));
            parts.push_back(f_or(d));
        }
    }
    return f_and(parts);
}

// D satisfies φ, via the double-primed copy.
inline FormulaPtr primed_constraint(const AF& f, const CafNames& n, const FormulaPtr& phi) {
    std::vector<FormulaPtr> parts;
    for (const auto& a : f.args) parts.push_back(f_iff(f_atom(n.p.at(a)), f_atom(n.pp.at(a))));
    parts.push_back(substitute(phi, n.pp));
    return f_and(parts);
}

inline FormulaPtr psi_pref(const AF& f, const CafNames& n, const FormulaPtr& phi) {
    std::vector<FormulaPtr> sup, strict;
    for (const auto& a : f.args) {
        sup.push_back(f_implies(f_atom(a), f_atom(n.p.at(a))));
        strict.push_back(f_and({f_atom(n.p.at(a)), f_not(f_atom(a))}));
    }
    return f_and({primed_base(f, n, false), primed_constraint(f, n, phi), f_and(sup), f_or(strict)});
}

// Range of D strictly includes the range of E.
inline FormulaPtr psi_range(const AF& f, const CafNames& n, const FormulaPtr& phi, bool conf_only) {
    std::vector<FormulaPtr> defs, cover, strict;
    for (int a = 0; a < f.size(); ++a) {
        const auto& an = f.args[a];
        std::vector<FormulaPtr> att, attp;
        for (auto [b, aa] : f.attacks)
            if (aa == a) {
                att.push_back(f_atom(f.args[b]));
                attp.push_back(f_atom(n.p.at(f.args[b])));
            }
        defs.push_back(f_iff(f_atom(n.d.at(an)), f_or(att)));
        defs.push_back(f_iff(f_atom(n.dp.at(an)), f_or(attp)));
        auto in_d = f_or({f_atom(n.p.at(an)), f_atom(n.dp.at(an))});
        cover.push_back(f_implies(f_atom(an), in_d));
        cover.push_back(f_implies(f_atom(n.d.at(an)), in_d));
        strict.push_back(f_and({in_d, f_not(f_atom(an)), f_not(f_atom(n.d.at(an)))}));
    }
    return f_and({primed_base(f, n, conf_only), primed_constraint(f, n, phi), f_and(defs), f_and(cover), f_or(strict)});
}

} // namespace detail

inline RAF caf_to_raf(const CAF& cf, Semantics sem) {
    if (sem == Semantics::conf) throw InputError("CAF simulation is not defined for conf");
    validate(cf);
    const AF& f = cf.af;
    auto neg = f_not(cf.constraint);
    FormulaPtr cond = neg;
    if (sem == Semantics::pref || sem == Semantics::semiSt || sem == Semantics::stag) {
        auto n = detail::caf_names(f);
        FormulaPtr psi = sem == Semantics::pref ? detail::psi_pref(f, n, cf.constraint)
                                                : detail::psi_range(f, n, cf.constraint, sem == Semantics::stag);
        cond = f_or({neg, psi});
    }
    RAF g = make_raf(f, Mode::classical);
    for (const auto& a : f.args) g.add_formula(a, cond);
    return g;
}

// Completion semantics by brute force.
inline std::vector<ArgSet> caf_oracle(const CAF& cf, Semantics sem, const Caps& caps = {}) {
    const AF& f = cf.af;
    AttackIndex ix(f);
    auto models = [&](ArgSet s) {
        Assignment nu;
        for (int a = 0; a < f.size(); ++a) nu[f.args[a]] = has(s, a);
        return evaluate(cf.constraint, nu);
    };
    auto filtered = [&](Semantics base) {
        std::vector<ArgSet> out;
        for (auto s : enumerate_sets(f, base, caps))
            if (models(s)) out.push_back(s);
        return out;
    };
    std::vector<ArgSet> out;
    switch (sem) {
    case Semantics::conf:
    case Semantics::adm:
    case Semantics::comp:
    case Semantics::stab: out = filtered(sem); break;
    case Semantics::pref: out = maximal_by(filtered(Semantics::adm), [](ArgSet s) { return s; }); break;
    case Semantics::semiSt:
        out = maximal_by(filtered(Semantics::adm), [&](ArgSet s) { return ix.range(s); });
        break;
    case Semantics::stag:
        out = maximal_by(filtered(Semantics::conf), [&](ArgSet s) { return ix.range(s); });
        break;
    }
    sort_sets(f, out);
    return out;
}

// ---------------------------------------------------------------- twofold extensions

inline AF induced_subframework(const AF& f, ArgSet s) {
    AF sub;
    for (int a = 0; a < f.size(); ++a)
        if (has(s, a)) sub.add_argument(f.args[a]);
    for (auto [a, b] : f.attacks)
        if (has(s, a) && has(s, b)) sub.add_attack(f.args[a], f.args[b]);
    return sub;
}

inline RAF twofold_to_raf(const AF& f, ArgSet shrinking) {
    check_subset(f, shrinking);
    std::set<std::string> taken(f.args.begin(), f.args.end());
    auto tag = fresh_suffix(taken, f.args, "__p");
    auto prime = [&](int a) { return f_atom(f.args[a] + tag); };
    std::vector<FormulaPtr> some_out;
    for (int x = 0; x < f.size(); ++x)
        if (has(shrinking, x)) some_out.push_back(f_not(prime(x)));
    RAF g = make_raf(f, Mode::classical);
    for (int a = 0; a < f.size(); ++a) {
        if (!has(shrinking, a)) continue;
        std::vector<FormulaPtr> parts{prime(a)};
        for (auto [x, b] : f.attacks)
            if (x == a) parts.push_back(prime(b));
        parts.push_back(f_or(some_out));
        g.add_formula(f.args[a], f_and(parts));
    }
    return g;
}

inline std::vector<ArgSet> twofold_oracle(const AF& f, ArgSet shrinking, Semantics s1, Semantics s2,
                                          const Caps& caps = {}) {
    AF sub = induced_subframework(f, shrinking);
    std::vector<ArgSet> inner;
    if (sub.size() == 0) {
        inner.push_back(0); // the empty framework has the empty set as its only extension
    } else {
        inner = enumerate_sets(sub, s2, caps);
    }
    std::set<std::vector<std::string>> ok;
    for (auto s : inner) ok.insert(sub.names(s));
    std::vector<ArgSet> out;
    for (auto e : enumerate_sets(f, s1, caps))
        if (ok.count(f.names(e & shrinking))) out.push_back(e);
    return out;
}

// ---------------------------------------------------------------- hardness generators

namespace detail {

inline const std::string& qname(const Qbf& q, int l) { return q.names[std::abs(l) - 1]; }

inline void require_identifiers(const Qbf& q) {
    for (const auto& n : q.names)
        if (!valid_identifier(n)) throw InputError("QBF variable name '" + n + "' is not a valid identifier");
}

inline std::vector<Quant> quantifier_shape(const Qbf& q) {
    std::vector<Quant> s;
    for (const auto& b : q.prefix) s.push_back(b.q);
    return s;
}

inline void require_shape(const Qbf& q, std::vector<Quant> shape, bool want_cnf, const std::string& what) {
    validate(q);
    if (quantifier_shape(q) != shape) throw InputError("expected a " + what + " prefix");
    if (want_cnf && !q.dnf.empty()) throw InputError("expected a CNF matrix (no terms)");
    if (!want_cnf && !q.cnf.empty()) throw InputError("expected a DNF matrix (no clauses)");
    if (!want_cnf && q.dnf.empty()) throw InputError("expected at least one term");
    require_identifiers(q);
}

// Clause literal as a formula over the QBF names.
inline FormulaPtr lit_formula(const Qbf& q, int l) { return f_lit(qname(q, l), l > 0); }

} // namespace detail

// Argument copies x, x' with mutual attacks for every x in `xs`.
inline AF doubled_af(const std::vector<std::string>& xs, std::map<std::string, std::string>& prime,
                     const std::set<std::string>& taken_extra = {}) {
    std::set<std::string> taken(xs.begin(), xs.end());
    taken.insert(taken_extra.begin(), taken_extra.end());
    auto tag = fresh_suffix(taken, xs, "__p");
    AF f;
    for (const auto& x : xs) {
        prime[x] = x + tag;
        f.add_argument(x);
    }
    for (const auto& x : xs) f.add_argument(prime[x]);
    for (const auto& x : xs) {
        f.add_attack(x, prime[x]);
        f.add_attack(prime[x], x);
    }
    return f;
}

inline RAF hardness_instance(const Qbf& q, RcClass cls) {
    using detail::qname;
    auto block_names = [&](size_t b) {
        std::vector<std::string> out;
        for (int v : q.prefix[b].vars) out.push_back(q.names[v - 1]);
        return out;
    };
    std::map<std::string, std::string> prime;
    switch (cls) {
    case RcClass::simple: {
        detail::require_shape(q, {Quant::exists}, true, "purely existential");
        auto xs = block_names(0);
        RAF g = make_raf(doubled_af(xs, prime), Mode::classical);
        std::vector<FormulaPtr> cls_;
        for (const auto& c : q.cnf) {
            std::vector<FormulaPtr> lits;
            for (int l : c) lits.push_back(detail::lit_formula(q, l));
            cls_.push_back(f_or(lits));
        }
        auto neg = f_not(f_and(cls_));
        for (const auto& a : g.af.args) g.add_formula(a, neg);
        return g;
    }
    case RcClass::propositional: {
        detail::require_shape(q, {Quant::exists, Quant::forall}, false, "2-QBF (exists-forall)");
        auto xs = block_names(0);
        auto ys = block_names(1);
        RAF g = make_raf(doubled_af(xs, prime, std::set<std::string>(ys.begin(), ys.end())), Mode::classical);
        std::set<std::string> xset(xs.begin(), xs.end());
        for (const auto& t : q.dnf) {
            std::vector<FormulaPtr> neg;
            std::set<std::string> hosts;
            for (int l : t) {
                neg.push_back(f_lit(qname(q, l), l < 0));
                if (xset.count(qname(q, l))) hosts.insert(qname(q, l));
            }
            auto c = f_or(neg);
            // a term without X variables constrains every candidate
            if (hosts.empty()) hosts = xset;
            for (const auto& x : hosts) {
                g.add_formula(x, c);
                g.add_formula(prime[x], c);
            }
        }
        return g;
    }
    case RcClass::tight: {
        detail::require_shape(q, {Quant::exists, Quant::forall}, false, "2-QBF (exists-forall)");
        auto xs = block_names(0);
        auto ys = block_names(1);
        std::set<std::string> taken(xs.begin(), xs.end());
        taken.insert(ys.begin(), ys.end());
        RAF g = make_raf(doubled_af(xs, prime, taken), Mode::asp);
        for (const auto& a : g.af.args) taken.insert(a);
        auto ytag = fresh_suffix(taken, ys, "__p");
        std::set<std::string> xset(xs.begin(), xs.end());
        for (const auto& t : q.dnf) {
            std::vector<std::string> body, ysin;
            for (int l : t) {
                const auto& v = qname(q, l);
                if (xset.count(v)) {
                    body.push_back(l > 0 ? v : prime[v]);
                } else {
                    body.push_back(l > 0 ? v : v + ytag);
                    ysin.push_back(v);
                }
            }
            Rule constraint = make_rule({}, body);
            std::set<std::string> hosts;
            for (const auto& b : body)
                if (g.af.is_argument(b)) hosts.insert(b);
            if (hosts.empty()) hosts.insert(g.af.args.begin(), g.af.args.end());
            for (const auto& h : hosts) {
                g.add_rule(h, constraint);
                for (const auto& y : ysin) {
                    g.add_rule(h, make_rule({y}, {}, {y + ytag}));
                    g.add_rule(h, make_rule({y + ytag}, {}, {y}));
                }
            }
        }
        for (auto& rs : g.rules) {
            std::sort(rs.begin(), rs.end());
            rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
        }
        return g;
    }
    case RcClass::disjunctive:
    case RcClass::normal: {
        if (cls == RcClass::normal) throw InputError("no generator for the normal class");
        detail::require_shape(q, {Quant::exists, Quant::forall, Quant::exists}, true, "3-QBF (exists-forall-exists)");
        auto xs = block_names(0);
        auto ys = block_names(1);
        auto zs = block_names(2);
        std::set<std::string> taken(q.names.begin(), q.names.end());
        RAF g = make_raf(doubled_af(xs, prime, taken), Mode::asp);
        for (const auto& a : g.af.args) taken.insert(a);
        std::vector<std::string> yz(ys);
        yz.insert(yz.end(), zs.begin(), zs.end());
        auto tag = fresh_suffix(taken, yz, "__p");
        for (const auto& v : yz) taken.insert(v + tag);
        std::string s = "sat";
        while (taken.count(s)) s += "_";
        std::set<std::string> xset(xs.begin(), xs.end());
        Program p;
        for (const auto& y : ys) {
            p.push_back(make_rule({y}, {}, {y + tag}));
            p.push_back(make_rule({y + tag}, {}, {y}));
        }
        for (const auto& z : zs) {
            p.push_back(make_rule({z, z + tag}));
            p.push_back(make_rule({z}, {s}));
            p.push_back(make_rule({z + tag}, {s}));
        }
        p.push_back(make_rule({}, {}, {s}));
        for (const auto& c : q.cnf) {
            std::vector<std::string> body;
            for (int l : c) {
                const auto& v = qname(q, l);
                if (xset.count(v)) {
                    body.push_back(l > 0 ? prime[v] : v);
                } else {
                    body.push_back(l > 0 ? v + tag : v);
                }
            }
            p.push_back(make_rule({s}, body));
        }
        for (const auto& x : xs) p.push_back(make_rule({s}, {}, {x, prime[x]}));
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        for (const auto& a : g.af.args)
            for (const auto& r : p) g.add_rule(a, r);
        return g;
    }
    }
    throw InputError("unsupported class");
}

struct CredInstance {
    RAF raf;
    std::string query;           // t'
    MaximalityScope scope;       // scope under which the reduction is exact
};

// ∀Y∃Z.⋀C (simple) or ∀Y∃Z∀X.⋁C (propositional, disjunctive). Φ is valid iff the query argument is in
// no semi-stable/stage extension.
inline CredInstance cred_hardness_instance(const Qbf& q, RcClass cls) {
    using detail::qname;
    bool simple = cls == RcClass::simple;
    if (simple) {
        detail::require_shape(q, {Quant::forall, Quant::exists}, true, "forall-exists");
    } else if (cls == RcClass::propositional || cls == RcClass::disjunctive) {
        detail::require_shape(q, {Quant::forall, Quant::exists, Quant::forall}, false, "forall-exists-forall");
    } else {
        throw InputError("credulous generator supports simple, propositional and disjunctive");
    }
    auto block_names = [&](size_t b) {
        std::vector<std::string> out;
        for (int v : q.prefix[b].vars) out.push_back(q.names[v - 1]);
        return out;
    };
    auto ys = block_names(0), zs = block_names(1);
    std::vector<std::string> xs = simple ? std::vector<std::string>{} : block_names(2);
    std::set<std::string> taken(q.names.begin(), q.names.end());
    auto pick = [&](std::string n) {
        while (taken.count(n)) n += "_";
        taken.insert(n);
        return n;
    };
    std::string t = pick("t"), tp = pick("t__p"), b = pick("b");
    std::vector<std::string> yz(ys);
    yz.insert(yz.end(), zs.begin(), zs.end());
    auto ptag = fresh_suffix(taken, yz, "__p");
    for (const auto& v : yz) taken.insert(v + ptag);
    auto htag = fresh_suffix(taken, ys, "__h");
    for (const auto& v : ys) taken.insert(v + htag);
    auto hptag = fresh_suffix(taken, ys, "__hp");
    for (const auto& v : ys) taken.insert(v + hptag);

    AF f;
    f.add_argument(t);
    f.add_argument(tp);
    f.add_argument(b);
    std::vector<std::string> clause_args;
    if (simple)
        for (size_t i = 0; i < q.cnf.size(); ++i) clause_args.push_back(f.args[f.add_argument(pick("cl" + std::to_string(i + 1)))]);
    for (const auto& y : ys) {
        f.add_argument(y);
        f.add_argument(y + ptag);
        f.add_argument(y + htag);
        f.add_argument(y + hptag);
    }
    for (const auto& z : zs) {
        f.add_argument(z);
        f.add_argument(z + ptag);
    }
    for (size_t i = 0; i < clause_args.size(); ++i) {
        f.add_attack(clause_args[i], t);
        for (int l : q.cnf[i]) f.add_attack(l > 0 ? qname(q, l) : qname(q, l) + ptag, clause_args[i]);
    }
    for (const auto& v : yz) {
        f.add_attack(v, v + ptag);
        f.add_attack(v + ptag, v);
    }
    for (const auto& y : ys) {
        f.add_attack(y, y + htag);
        f.add_attack(y + ptag, y + hptag);
        f.add_attack(y + htag, y + htag);
        f.add_attack(y + hptag, y + hptag);
    }
    f.add_attack(t, tp);
    f.add_attack(tp, t);
    f.add_attack(t, b);
    f.add_attack(b, b);

    if (simple) return {af_to_raf(f), tp, MaximalityScope::base};

    std::set<std::string> xset(xs.begin(), xs.end());
    if (cls == RcClass::propositional) {
        RAF g = make_raf(f, Mode::classical);
        for (const auto& c : q.dnf) {
            std::vector<FormulaPtr> neg;
            for (int l : c) neg.push_back(f_lit(qname(q, l), l < 0));
            g.add_formula(t, f_or(neg));
        }
        g.add_formula(tp, f_false());
        return {g, tp, MaximalityScope::raf};
    }
    RAF g = make_raf(f, Mode::asp);
    auto xtag = fresh_suffix(taken, xs, "__p");
    for (const auto& x : xs) {
        g.add_rule(t, make_rule({x}, {}, {x + xtag}));
        g.add_rule(t, make_rule({x + xtag}, {}, {x}));
    }
    for (const auto& c : q.dnf) {
        Rule r;
        for (int l : c) {
            const auto& v = qname(q, l);
            if (xset.count(v)) {
                r.pos.push_back(l > 0 ? v : v + xtag);
            } else if (l > 0) {
                r.pos.push_back(v);
            } else {
                r.neg.push_back(v);
            }
        }
        g.add_rule(t, r);
    }
    g.add_rule(tp, make_rule({}));
    return {g, tp, MaximalityScope::raf};
}

// ---------------------------------------------------------------- random inputs

struct QbfShape {
    std::vector<std::pair<Quant, int>> blocks; // quantifier, number of variables (names x/y/z per position)
    bool dnf = false;
    int parts = 4;  // clauses or terms
    int width = 3;  // literals per clause/term (capped by the variable count)
    bool mix_first_last = false; // every part mentions the first and the last block
};

inline Qbf random_qbf(std::mt19937_64& rng, const QbfShape& shape) {
    static const char* stems[] = {"x", "y", "z", "u", "v"};
    Qbf q;
    std::vector<std::vector<int>> blocks;
    for (size_t b = 0; b < shape.blocks.size(); ++b) {
        std::vector<int> vs;
        for (int i = 1; i <= shape.blocks[b].second; ++i)
            vs.push_back(q.var(std::string(stems[std::min<size_t>(b, 4)]) + std::to_string(i)));
        q.add_block(shape.blocks[b].first, vs);
        blocks.push_back(vs);
    }
    std::vector<int> all;
    for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
    auto coin = [&] { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; };
    auto pick_from = [&](const std::vector<int>& pool) {
        return pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(rng)];
    };
    for (int p = 0; p < shape.parts; ++p) {
        std::set<int> chosen;
        if (shape.mix_first_last && blocks.size() >= 2) {
            chosen.insert(pick_from(blocks.front()));
            chosen.insert(pick_from(blocks.back()));
        }
        int w = std::min<int>(shape.width, static_cast<int>(all.size()));
        while (static_cast<int>(chosen.size()) < w) chosen.insert(pick_from(all));
        Clause c;
        for (int v : chosen) c.push_back(coin() ? v : -v);
        (shape.dnf ? q.dnf : q.cnf).push_back(c);
    }
    return q;
}

// Inputs accepted by hardness_instance for each class.
inline Qbf random_hardness_input(std::mt19937_64& rng, RcClass cls, int size = 2) {
    auto n = [&](int lo) { return std::uniform_int_distribution<int>(lo, lo + size)(rng); };
    QbfShape s;
    switch (cls) {
    case RcClass::simple:
        s.blocks = {{Quant::exists, n(2)}};
        s.parts = 4 * s.blocks[0].second + n(0);
        break;
    case RcClass::propositional:
        s.blocks = {{Quant::exists, n(1)}, {Quant::forall, n(1)}};
        s.dnf = true;
        s.parts = n(3);
        s.mix_first_last = true;
        break;
    case RcClass::tight:
        s.blocks = {{Quant::exists, n(1)}, {Quant::forall, n(1)}};
        s.dnf = true;
        s.width = 2;
        s.parts = n(2);
        break;
    case RcClass::disjunctive:
        s.blocks = {{Quant::exists, n(1)}, {Quant::forall, n(1)}, {Quant::exists, n(1)}};
        s.parts = n(6);
        break;
    default: throw InputError("no generator for class " + to_string(cls));
    }
    return random_qbf(rng, s);
}

// Inputs accepted by cred_hardness_instance.
inline Qbf random_cred_input(std::mt19937_64& rng, RcClass cls, int size = 1) {
    auto n = [&](int lo) { return std::uniform_int_distribution<int>(lo, lo + size)(rng); };
    QbfShape s;
    if (cls == RcClass::simple) {
        s.blocks = {{Quant::forall, n(1)}, {Quant::exists, n(1)}};
        s.parts = n(3);
    } else {
        s.blocks = {{Quant::forall, n(1)}, {Quant::exists, n(1)}, {Quant::forall, n(1)}};
        s.dnf = true;
        s.width = 2;
        s.parts = n(4);
    }
    return random_qbf(rng, s);
}

} // namespace raf
