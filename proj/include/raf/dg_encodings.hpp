#pragma once

// Decomposition-guided reductions from stable-extension existence to QBF.

#include "td.hpp"

namespace raf {

enum class Fragment { stab, simple, prop, tight, disj };

inline std::string to_string(Fragment f) {
    switch (f) {
    case Fragment::stab: return "stab";
    case Fragment::simple: return "simple";
    case Fragment::prop: return "prop";
    case Fragment::tight: return "tight";
    case Fragment::disj: return "disj";
    }
    return "?";
}

inline std::optional<Fragment> parse_fragment(const std::string& s) {
    for (auto f : {Fragment::stab, Fragment::simple, Fragment::prop, Fragment::tight, Fragment::disj})
        if (to_string(f) == s) return f;
    return std::nullopt;
}

// family is one of A, D, W, B, B', J, S, r; node is -1 for variables not tied to a node
struct Provenance {
    std::string family;
    std::string element;
    int node = -1;
};

struct Encoding {
    Fragment fragment = Fragment::stab;
    Qbf qbf;
    std::vector<Provenance> provenance; // provenance[v-1]
    NormalizedTd ntd;
    TreeDecomposition induced;
    int source_width = 0;
    int construction_width = 0;     // width of the per-node bag construction
    int heuristic_width = 0; // min-fill on the matrix primal graph
    std::string induced_method;

    int induced_width() const { return induced.width(); }
};

namespace detail {

class EncodingBuilder {
public:
    EncodingBuilder(const RAF& g, const TreeDecomposition& source, Fragment frag) : g_(g) {
        e_.fragment = frag;
        e_.ntd = normalize_td(source, g);
        e_.source_width = std::max(0, source.width());
        for (const auto& a : g.af.args) var(a, "A", a);
        for (const auto& v : condition_vars(g))
            if (!g.af.is_argument(v)) b_.push_back(v);
        for (const auto& b : b_) var(b, "B", b);
    }

    const TreeDecomposition& td() const { return e_.ntd.td; }
    const Unit& unit(int i) const { return e_.ntd.units[i]; }
    const std::vector<int>& units_at(int t) const { return e_.ntd.node_units[t]; }
    const std::vector<std::string>& b_vars() const { return b_; }
    Qbf& qbf() { return e_.qbf; }

    int var(const std::string& name, const std::string& family, const std::string& element, int node = -1) {
        int before = e_.qbf.num_vars();
        int v = e_.qbf.var(name);
        if (v > before) e_.provenance.push_back({family, element, node});
        return v;
    }

    int find(const std::string& name) const { return e_.qbf.find(name); }

    bool is_arg(const std::string& x) const { return g_.af.is_argument(x); }

    int last(const std::string& v) const { return e_.ntd.last.at(v); }

    std::vector<std::string> args_at(int t) const {
        std::vector<std::string> out;
        for (const auto& v : td().bags[t])
            if (is_arg(v)) out.push_back(v);
        return out;
    }

    std::vector<std::string> b_at(int t) const {
        std::vector<std::string> out;
        for (const auto& v : td().bags[t])
            if (!is_arg(v)) out.push_back(v);
        return out;
    }

    std::vector<std::string> hosts_at(int t, int u) const {
        std::vector<std::string> out;
        for (const auto& h : unit(u).hosts)
            if (td().bags[t].count(h)) out.push_back(h);
        return out;
    }

    static std::string node_name(const std::string& stem, const std::string& elem, int t) {
        return stem + "(" + elem + (elem.empty() ? "" : ",") + std::to_string(t) + ")";
    }

    int d(const std::string& a, int t) { return find(node_name("d", a, t)); }

    void clause(Clause c) { e_.qbf.cnf.push_back(std::move(c)); }
    void term(Clause c) { e_.qbf.dnf.push_back(std::move(c)); }

    // guessed arguments form a stable extension, checked bag by bag
    void stab_part() {
        for (int t : td().post_order())
            for (const auto& a : args_at(t)) var(node_name("d", a, t), "D", a, t);
        for (int t : td().post_order()) {
            for (const auto& a : args_at(t)) {
                Clause c{-d(a, t)};
                for (int ch : td().children[t])
                    if (td().bags[ch].count(a)) c.push_back(d(a, ch));
                for (auto [b, x] : g_.af.attacks)
                    if (g_.af.args[x] == a && td().bags[t].count(g_.af.args[b])) c.push_back(find(g_.af.args[b]));
                clause(c);
            }
        }
        for (auto [a, b] : g_.af.attacks) {
            int x = find(g_.af.args[a]), y = find(g_.af.args[b]);
            clause(x == y ? Clause{-x} : Clause{-x, -y});
        }
        for (const auto& a : g_.af.args) clause({find(a), d(a, e_.ntd.last.at(a))});
    }

    // complement of a clause literal
    int neg_lit(const std::pair<std::string, bool>& l) const { return l.second ? -find(l.first) : find(l.first); }

    // The unit is violated while a hosting argument is in.
    void violation_terms() {
        for (int t : td().post_order())
            for (int u : units_at(t))
                for (const auto& a : hosts_at(t, u)) {
                    Clause c{find(a)};
                    if (g_.mode == Mode::classical) {
                        for (const auto& l : unit(u).clause) c.push_back(neg_lit(l));
                    } else {
                        const Rule& r = unit(u).rule;
                        for (const auto& h : r.head) c.push_back(-find(h));
                        for (const auto& p : r.pos) c.push_back(find(p));
                        for (const auto& n : r.neg) c.push_back(-find(n));
                    }
                    term(dedupe(c));
                }
    }

    static Clause dedupe(Clause c) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        return c;
    }

    void no_terms_means_false() {
        if (e_.qbf.dnf.empty()) clause({});
    }

    Encoding finish(const std::vector<std::pair<Quant, std::vector<int>>>& blocks) {
        for (const auto& [q, vs] : blocks) e_.qbf.add_block(q, vs);
        build_induced();
        return std::move(e_);
    }

    std::vector<int> family(const std::string& fam) const {
        std::vector<int> out;
        for (int v = 1; v <= e_.qbf.num_vars(); ++v)
            if (e_.provenance[v - 1].family == fam) out.push_back(v);
        return out;
    }

private:
    void build_induced() {
        const auto& T = td();
        const auto& q = e_.qbf;
        TreeDecomposition built;
        std::vector<std::set<std::string>> bags(T.size());
        for (int t = 0; t < T.size(); ++t) bags[t] = T.bags[t];
        for (int v = 1; v <= q.num_vars(); ++v) {
            const auto& p = e_.provenance[v - 1];
            const auto& name = q.names[v - 1];
            if (p.family == "r") {
                for (auto& b : bags) b.insert(name);
            } else if (p.family == "B'") {
                for (int t = 0; t < T.size(); ++t)
                    if (T.bags[t].count(p.element)) bags[t].insert(name);
            } else if (p.node >= 0) {
                bags[p.node].insert(name);
                // variables the parent's formulas read from its children: d_a^t, w^t, j_x^t, s^t
                int par = T.parent[p.node];
                if (par < 0) continue;
                bool summary = name == node_name("w", "", p.node) || name == node_name("s", "", p.node);
                bool per_vertex = name == node_name("d", p.element, p.node) || name == node_name("j", p.element, p.node);
                if (summary || (per_vertex && T.bags[par].count(p.element))) bags[par].insert(name);
            }
        }
        for (int t = 0; t < T.size(); ++t) built.add_node(bags[t], T.parent[t]);
        built.root = T.root;
        auto graph = primal_graph(q);
        e_.construction_width = validate_td(graph, built);
        auto heur = heuristic_td(graph);
        e_.heuristic_width = validate_td(graph, heur);
        if (e_.heuristic_width < e_.construction_width) {
            e_.induced = std::move(heur);
            e_.induced_method = "min-fill";
        } else {
            e_.induced = std::move(built);
            e_.induced_method = "construction";
        }
    }

    const RAF& g_;
    Encoding e_;
    std::vector<std::string> b_;
};

// Disjunctive rules become one normal rule per head atom; answer sets are preserved for
// head-cycle-free programs, tight ones included.
inline RAF shifted(const RAF& g) {
    RAF out = make_raf(g.af, g.mode);
    for (int a = 0; a < g.size(); ++a)
        for (const auto& r : g.rules[a]) {
            if (r.head.size() <= 1) {
                out.rules[a].push_back(r);
                continue;
            }
            for (const auto& h : r.head) {
                Rule s = r;
                s.head = {h};
                for (const auto& o : r.head)
                    if (o != h) s.neg.push_back(o);
                s.canonicalize();
                out.rules[a].push_back(s);
            }
        }
    return out;
}

} // namespace detail

inline Encoding encode_stab(const AF& f, const TreeDecomposition& td) {
    RAF g = make_raf(f);
    // a decomposition of a RAF's primal graph restricted to the arguments decomposes the AF
    TreeDecomposition on_args = restrict_td(td, [&](const std::string& v) { return f.is_argument(v); });
    detail::EncodingBuilder eb(g, on_args, Fragment::stab);
    eb.stab_part();
    auto ex = eb.family("A");
    for (int v : eb.family("D")) ex.push_back(v);
    return eb.finish({{Quant::exists, ex}});
}

inline Encoding encode_stab_simple(const RAF& g, const TreeDecomposition& td) {
    if (classify_rc(g) != RcClass::simple) throw InputError("the simple encoding needs simple rejection conditions");
    detail::EncodingBuilder eb(g, td, Fragment::simple);
    eb.stab_part();
    const auto& T = eb.td();
    using detail::EncodingBuilder;
    for (int t : T.post_order()) {
        eb.var(EncodingBuilder::node_name("w", "", t), "W", "", t);
        for (int u : eb.units_at(t)) eb.var(EncodingBuilder::node_name("wc", std::to_string(u), t), "W", eb.unit(u).key, t);
    }
    auto w = [&](int t) { return eb.find(EncodingBuilder::node_name("w", "", t)); };
    auto wc = [&](int u, int t) { return eb.find(EncodingBuilder::node_name("wc", std::to_string(u), t)); };
    for (int t : T.post_order()) {
        Clause covered{-w(t)};
        for (int ch : T.children[t]) covered.push_back(w(ch));
        for (int u : eb.units_at(t)) covered.push_back(wc(u, t));
        eb.clause(covered);
        for (int u : eb.units_at(t)) {
            for (const auto& l : eb.unit(u).clause) eb.clause({-wc(u, t), eb.neg_lit(l)});
            Clause hosted{-wc(u, t)};
            for (const auto& a : eb.hosts_at(t, u)) hosted.push_back(eb.find(a));
            eb.clause(hosted);
        }
    }
    eb.clause({w(T.root)});
    auto ex = eb.family("A");
    for (const char* fam : {"D", "W"})
        for (int v : eb.family(fam)) ex.push_back(v);
    return eb.finish({{Quant::exists, ex}});
}

inline Encoding encode_stab_prop(const RAF& g, const TreeDecomposition& td) {
    auto cls = classify_rc(g);
    if (cls != RcClass::simple && cls != RcClass::propositional)
        throw InputError("the propositional encoding needs classical rejection conditions");
    detail::EncodingBuilder eb(g, td, Fragment::prop);
    eb.stab_part();
    eb.violation_terms();
    eb.no_terms_means_false();
    auto ex = eb.family("A");
    for (int v : eb.family("D")) ex.push_back(v);
    return eb.finish({{Quant::exists, ex}, {Quant::forall, eb.family("B")}});
}

inline Encoding encode_stab_tight(const RAF& g, const TreeDecomposition& td) {
    if (g.mode != Mode::asp || classify_rc(g) != RcClass::tight)
        throw InputError("the tight encoding needs tight programs as rejection conditions");
    RAF s = detail::shifted(g);
    detail::EncodingBuilder eb(s, td, Fragment::tight);
    using detail::EncodingBuilder;
    eb.stab_part();
    const auto& T = eb.td();
    // j_c^t exists for rules that can justify a non-argument atom
    auto justifies = [&](int u) {
        const auto& h = eb.unit(u).rule.head;
        return h.size() == 1 && !eb.is_arg(h[0]);
    };
    for (int t : T.post_order()) {
        for (const auto& x : eb.b_at(t)) eb.var(EncodingBuilder::node_name("j", x, t), "J", x, t);
        for (int u : eb.units_at(t))
            if (justifies(u)) eb.var(EncodingBuilder::node_name("jc", std::to_string(u), t), "J", eb.unit(u).key, t);
    }
    auto j = [&](const std::string& x, int t) { return eb.find(EncodingBuilder::node_name("j", x, t)); };
    auto jc = [&](int u, int t) { return eb.find(EncodingBuilder::node_name("jc", std::to_string(u), t)); };
    eb.violation_terms();
    for (int t : T.post_order()) {
        for (const auto& x : eb.b_at(t)) {
            Clause justified{j(x, t)};
            for (int ch : T.children[t])
                if (T.bags[ch].count(x)) justified.push_back(-j(x, ch));
            for (int u : eb.units_at(t))
                if (justifies(u) && eb.unit(u).rule.head[0] == x) justified.push_back(-jc(u, t));
            eb.term(justified);
        }
        for (int u : eb.units_at(t)) {
            if (!justifies(u)) continue;
            const Rule& r = eb.unit(u).rule;
            for (const auto& n : r.neg) eb.term(EncodingBuilder::dedupe({jc(u, t), eb.find(n)}));
            for (const auto& p : r.pos) eb.term(EncodingBuilder::dedupe({jc(u, t), -eb.find(p)}));
            Clause fires{jc(u, t)};
            for (const auto& a : eb.hosts_at(t, u)) fires.push_back(-eb.find(a));
            eb.term(fires);
        }
    }
    for (const auto& x : eb.b_vars()) eb.term({eb.find(x), -j(x, eb.last(x))});
    eb.no_terms_means_false();
    auto ex = eb.family("A");
    for (int v : eb.family("D")) ex.push_back(v);
    auto un = eb.family("B");
    for (int v : eb.family("J")) un.push_back(v);
    return eb.finish({{Quant::exists, ex}, {Quant::forall, un}});
}

inline Encoding encode_stab_disj(const RAF& g, const TreeDecomposition& td) {
    if (g.mode != Mode::asp) throw InputError("the disjunctive encoding needs programs as rejection conditions");
    detail::EncodingBuilder eb(g, td, Fragment::disj);
    using detail::EncodingBuilder;
    const auto& T = eb.td();
    for (const auto& b : eb.b_vars()) eb.var(b + "'", "B'", b);
    int r = eb.var("r()", "r", "");
    eb.stab_part();
    for (int t : T.post_order()) {
        eb.var(EncodingBuilder::node_name("s", "", t), "S", "", t);
        for (const auto& b : eb.b_at(t)) eb.var(EncodingBuilder::node_name("sb", b, t), "S", b, t);
    }
    auto s = [&](int t) { return eb.find(EncodingBuilder::node_name("s", "", t)); };
    auto sb = [&](const std::string& b, int t) { return eb.find(EncodingBuilder::node_name("sb", b, t)); };
    // reduct copies: argument atoms keep their value
    auto primed = [&](const std::string& x) { return eb.is_arg(x) ? eb.find(x) : eb.find(x + "'"); };
    for (int t : T.post_order()) {
        for (int u : eb.units_at(t)) {
            const Rule& rule = eb.unit(u).rule;
            for (const auto& a : eb.hosts_at(t, u)) {
                Clause reduct_rule{-r, -eb.find(a)};
                for (const auto& h : rule.head) reduct_rule.push_back(primed(h));
                for (const auto& p : rule.pos) reduct_rule.push_back(-primed(p));
                for (const auto& n : rule.neg) reduct_rule.push_back(eb.find(n));
                eb.clause(EncodingBuilder::dedupe(reduct_rule));
            }
        }
        Clause smaller{-r, -s(t)};
        for (int ch : T.children[t]) smaller.push_back(s(ch));
        for (const auto& b : eb.b_at(t)) {
            smaller.push_back(sb(b, t));
            eb.clause({-sb(b, t), eb.find(b)});
            eb.clause({-sb(b, t), -eb.find(b + "'")});
        }
        eb.clause(smaller);
    }
    for (const auto& b : eb.b_vars()) eb.clause({-r, -eb.find(b + "'"), eb.find(b)});
    eb.clause({s(T.root)});
    eb.violation_terms();
    eb.term({r});
    auto ex = eb.family("A");
    for (int v : eb.family("D")) ex.push_back(v);
    auto inner = eb.family("B'");
    for (int v : eb.family("S")) inner.push_back(v);
    inner.push_back(r);
    return eb.finish({{Quant::exists, ex}, {Quant::forall, eb.family("B")}, {Quant::exists, inner}});
}

inline Encoding encode(Fragment f, const RAF& g, const TreeDecomposition& td) {
    switch (f) {
    case Fragment::stab: return encode_stab(g.af, td);
    case Fragment::simple: return encode_stab_simple(g, td);
    case Fragment::prop: return encode_stab_prop(g, td);
    case Fragment::tight: return encode_stab_tight(g, td);
    case Fragment::disj: return encode_stab_disj(g, td);
    }
    throw InputError("unknown fragment");
}

// Fragments whose preconditions the RAF meets.
inline std::vector<Fragment> applicable_fragments(const RAF& g) {
    auto cls = classify_rc(g);
    if (g.mode == Mode::classical) {
        if (cls == RcClass::simple) return {Fragment::stab, Fragment::simple, Fragment::prop};
        return {Fragment::stab, Fragment::prop};
    }
    if (cls == RcClass::tight) return {Fragment::stab, Fragment::tight, Fragment::disj};
    return {Fragment::stab, Fragment::disj};
}

// Stated width bound of the induced decomposition for a source of width k.
inline int width_bound(Fragment f, int k) {
    switch (f) {
    case Fragment::simple: return 3 * k + 1;
    case Fragment::disj: return 9 * k + 9;
    default: return 2 * k + 1;
    }
}

} // namespace raf
