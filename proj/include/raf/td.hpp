#pragma once

#include "logic.hpp"
#include "qbf.hpp"

#include <deque>
#include <functional>

namespace raf {

// Undirected simple graph over named vertices; self-loops are dropped.
struct Graph {
    std::vector<std::string> names;
    std::map<std::string, int> ids;
    std::vector<std::set<int>> adj;

    int size() const { return static_cast<int>(names.size()); }

    int vertex(const std::string& n) {
        auto it = ids.find(n);
        if (it != ids.end()) return it->second;
        ids[n] = size();
        names.push_back(n);
        adj.emplace_back();
        return size() - 1;
    }

    bool has_vertex(const std::string& n) const { return ids.count(n) > 0; }

    void add_edge(const std::string& a, const std::string& b) {
        int x = vertex(a), y = vertex(b);
        if (x == y) return;
        adj[x].insert(y);
        adj[y].insert(x);
    }

    void add_clique(const std::set<std::string>& vs) {
        for (const auto& v : vs) vertex(v);
        for (auto i = vs.begin(); i != vs.end(); ++i)
            for (auto j = std::next(i); j != vs.end(); ++j) add_edge(*i, *j);
    }

    bool has_edge(const std::string& a, const std::string& b) const {
        auto x = ids.find(a), y = ids.find(b);
        return x != ids.end() && y != ids.end() && adj[x->second].count(y->second);
    }

    // Edges as name pairs (first < second), sorted.
    std::vector<std::pair<std::string, std::string>> edges() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (int v = 0; v < size(); ++v)
            for (int u : adj[v])
                if (names[v] < names[u]) out.push_back({names[v], names[u]});
        std::sort(out.begin(), out.end());
        return out;
    }

    size_t num_edges() const {
        size_t n = 0;
        for (const auto& a : adj) n += a.size();
        return n / 2;
    }
};

struct TreeDecomposition {
    std::vector<std::set<std::string>> bags;
    std::vector<int> parent; // -1 at the root
    std::vector<std::vector<int>> children;
    int root = 0;

    int size() const { return static_cast<int>(bags.size()); }

    int width() const {
        size_t m = 0;
        for (const auto& b : bags) m = std::max(m, b.size());
        return static_cast<int>(m) - 1;
    }

    int add_node(std::set<std::string> bag, int par = -1) {
        bags.push_back(std::move(bag));
        parent.push_back(par);
        children.emplace_back();
        int id = size() - 1;
        if (par >= 0) children[par].push_back(id);
        return id;
    }

    std::vector<int> post_order() const {
        std::vector<int> out;
        if (bags.empty()) return out;
        std::vector<std::pair<int, size_t>> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [t, i] = stack.back();
            if (i < children[t].size()) {
                int c = children[t][i++];
                stack.push_back({c, 0});
            } else {
                out.push_back(t);
                stack.pop_back();
            }
        }
        return out;
    }

    std::vector<int> bfs_order() const {
        std::vector<int> out;
        if (bags.empty()) return out;
        std::deque<int> q{root};
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            out.push_back(t);
            for (int c : children[t]) q.push_back(c);
        }
        return out;
    }
};

// ---------------------------------------------------------------- conditions as units

// One clause (classical) or rule (asp) of some rejection condition, with the arguments hosting it.
struct Unit {
    std::string key;
    std::set<std::string> vars;
    std::set<std::string> hosts;
    std::vector<std::pair<std::string, bool>> clause;
    Rule rule;
};

inline std::string clause_key(const std::vector<std::pair<std::string, bool>>& c) {
    if (c.empty()) return "false";
    std::string s;
    for (const auto& [v, pos] : c) {
        if (!s.empty()) s += " | ";
        s += (pos ? "" : "~") + v;
    }
    return s;
}

namespace detail {

inline void conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->kind == Formula::Kind::And) {
        for (const auto& a : f->args) conjuncts(a, out);
    } else {
        out.push_back(f);
    }
}

} // namespace detail

inline std::vector<Unit> condition_units(const RAF& g) {
    std::map<std::string, Unit> by_key;
    auto add = [&](Unit u, const std::string& host) {
        auto [it, fresh] = by_key.try_emplace(u.key, std::move(u));
        it->second.hosts.insert(host);
    };
    for (int a = 0; a < g.size(); ++a) {
        const auto& host = g.af.args[a];
        if (g.mode == Mode::classical) {
            for (const auto& f : g.formulas[a]) {
                std::vector<FormulaPtr> parts;
                detail::conjuncts(f, parts);
                for (const auto& p : parts)
                    for (auto& c : truth_table_cnf(p)) {
                        std::sort(c.begin(), c.end());
                        c.erase(std::unique(c.begin(), c.end()), c.end());
                        Unit u;
                        u.key = clause_key(c);
                        for (const auto& l : c) u.vars.insert(l.first);
                        u.clause = std::move(c);
                        add(std::move(u), host);
                    }
            }
        } else {
            for (const auto& r : g.rules[a]) {
                Unit u;
                u.rule = r;
                u.rule.canonicalize();
                u.key = to_string(u.rule);
                u.vars = atoms(u.rule);
                add(std::move(u), host);
            }
        }
    }
    std::vector<Unit> out;
    for (auto& [k, u] : by_key) out.push_back(std::move(u));
    return out;
}

// ---------------------------------------------------------------- primal graphs

inline Graph primal_graph(const AF& f) {
    Graph g;
    for (const auto& a : f.args) g.vertex(a);
    for (auto [a, b] : f.attacks) g.add_edge(f.args[a], f.args[b]);
    return g;
}

inline Graph primal_graph(const RAF& r) {
    Graph g = primal_graph(r.af);
    for (const auto& v : condition_vars(r)) g.vertex(v);
    for (const auto& u : condition_units(r)) {
        g.add_clique(u.vars);
        for (const auto& h : u.hosts)
            for (const auto& v : u.vars) g.add_edge(h, v);
    }
    return g;
}

inline Graph primal_graph(const Qbf& q) {
    Graph g;
    for (const auto& n : q.names) g.vertex(n);
    for (const auto* part : {&q.cnf, &q.dnf})
        for (const auto& c : *part) {
            std::set<std::string> vs;
            for (int l : c) vs.insert(q.names[std::abs(l) - 1]);
            g.add_clique(vs);
        }
    return g;
}

// ---------------------------------------------------------------- heuristic decomposition

enum class Heuristic { min_fill, min_degree };

inline TreeDecomposition heuristic_td(const Graph& g, Heuristic h = Heuristic::min_fill) {
    int n = g.size();
    TreeDecomposition td;
    if (n == 0) {
        td.add_node({});
        return td;
    }
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    std::vector<std::set<int>> live(n);
    for (int v = 0; v < n; ++v)
        for (int u : g.adj[v]) {
            adj[v][u] = 1;
            live[v].insert(u);
        }
    auto score_of = [&](int v) {
        if (h == Heuristic::min_degree) return static_cast<long>(live[v].size());
        long fill = 0;
        for (auto i = live[v].begin(); i != live[v].end(); ++i)
            for (auto j = std::next(i); j != live[v].end(); ++j)
                if (!adj[*i][*j]) ++fill;
        return fill;
    };
    std::vector<long> score(n);
    for (int v = 0; v < n; ++v) score[v] = score_of(v);
    std::vector<char> gone(n, 0);
    std::vector<int> order, pos(n, -1);
    std::vector<std::vector<int>> nbrs(n);
    for (int step = 0; step < n; ++step) {
        int best = -1;
        for (int v = 0; v < n; ++v) {
            if (gone[v]) continue;
            if (best < 0 || score[v] < score[best] || (score[v] == score[best] && g.names[v] < g.names[best])) best = v;
        }
        nbrs[best].assign(live[best].begin(), live[best].end());
        for (int x : nbrs[best]) {
            live[x].erase(best);
            for (int y : nbrs[best])
                if (x != y && !adj[x][y]) {
                    adj[x][y] = adj[y][x] = 1;
                    live[x].insert(y);
                    live[y].insert(x);
                }
        }
        gone[best] = 1;
        pos[best] = step;
        order.push_back(best);
        std::set<int> touched(nbrs[best].begin(), nbrs[best].end());
        for (int x : nbrs[best]) touched.insert(live[x].begin(), live[x].end());
        for (int v : touched) score[v] = score_of(v);
    }
    // node i holds order[i] and its later neighbours; its parent is the node of the earliest of them
    std::vector<int> par(n, -1);
    for (int i = 0; i < n; ++i) {
        int v = order[i], p = -1;
        for (int u : nbrs[v])
            if (p < 0 || pos[u] < p) p = pos[u];
        par[i] = p;
    }
    std::vector<int> node_of(n, -1);
    int root_step = n - 1;
    // build top-down so parents exist first
    std::vector<std::set<std::string>> bag(n);
    for (int i = 0; i < n; ++i) {
        bag[i].insert(g.names[order[i]]);
        for (int u : nbrs[order[i]]) bag[i].insert(g.names[u]);
    }
    node_of[root_step] = td.add_node(bag[root_step]);
    for (int i = n - 2; i >= 0; --i) {
        int p = par[i] < 0 ? root_step : par[i];
        node_of[i] = td.add_node(bag[i], node_of[p]);
    }
    td.root = node_of[root_step];
    // contract nodes whose bag is contained in the parent's
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < td.size(); ++t) {
            int p = td.parent[t];
            if (p < 0) continue;
            if (!std::includes(td.bags[p].begin(), td.bags[p].end(), td.bags[t].begin(), td.bags[t].end())) continue;
            // move t's children to p, then drop t
            for (int c : td.children[t]) {
                td.parent[c] = p;
                td.children[p].push_back(c);
            }
            auto& pc = td.children[p];
            pc.erase(std::find(pc.begin(), pc.end(), t));
            td.children[t].clear();
            td.parent[t] = -2; // dead
            changed = true;
        }
    }
    // compact
    std::vector<int> remap(td.size(), -1);
    TreeDecomposition out;
    for (int t : td.bfs_order()) {
        int p = td.parent[t];
        remap[t] = out.add_node(td.bags[t], p < 0 ? -1 : remap[p]);
    }
    out.root = 0;
    return out;
}

// ---------------------------------------------------------------- validation

// Bags cut down to the kept vertices; tree edges whose bags are nested are contracted.
inline TreeDecomposition restrict_td(const TreeDecomposition& in, const std::function<bool(const std::string&)>& keep) {
    TreeDecomposition out;
    if (in.bags.empty()) return out;
    auto cut = [&](int t) {
        std::set<std::string> b;
        for (const auto& v : in.bags[t])
            if (keep(v)) b.insert(v);
        return b;
    };
    out.add_node(cut(in.root));
    std::vector<std::pair<int, int>> stack{{in.root, 0}}; // old node, new node it went into
    while (!stack.empty()) {
        auto [t, nt] = stack.back();
        stack.pop_back();
        for (int c : in.children[t]) {
            auto b = cut(c);
            auto& host = out.bags[nt];
            if (std::includes(host.begin(), host.end(), b.begin(), b.end())) {
                stack.push_back({c, nt});
            } else if (std::includes(b.begin(), b.end(), host.begin(), host.end())) {
                host = std::move(b);
                stack.push_back({c, nt});
            } else {
                stack.push_back({c, out.add_node(std::move(b), nt)});
            }
        }
    }
    return out;
}

inline std::string bag_string(const std::set<std::string>& b) {
    std::string s = "{";
    for (const auto& v : b) s += (s.size() > 1 ? "," : "") + v;
    return s + "}";
}

// Checks the tree structure and the decomposition conditions; returns the width.
inline int validate_td(const Graph& g, const TreeDecomposition& td) {
    int n = td.size();
    if (n == 0) throw ValidationError("decomposition has no nodes");
    if (td.parent.size() != td.bags.size() || td.children.size() != td.bags.size())
        throw ValidationError("decomposition arrays have inconsistent sizes");
    if (td.root < 0 || td.root >= n || td.parent[td.root] != -1) throw ValidationError("root has a parent");
    for (int t = 0; t < n; ++t)
        for (int c : td.children[t]) {
            if (c < 0 || c >= n || td.parent[c] != t)
                throw ValidationError("node " + std::to_string(c) + " is listed as a child of " + std::to_string(t) +
                                      " but has another parent");
        }
    auto order = td.bfs_order();
    if (static_cast<int>(order.size()) != n) {
        std::vector<char> seen(n, 0);
        for (int t : order) seen[t] = 1;
        for (int t = 0; t < n; ++t)
            if (!seen[t]) throw ValidationError("node " + std::to_string(t) + " is not reachable from the root");
    }
    for (int t = 0; t < n; ++t)
        for (const auto& v : td.bags[t])
            if (!g.has_vertex(v))
                throw ValidationError("bag " + std::to_string(t) + " contains unknown vertex '" + v + "'");
    std::map<std::string, int> tops;
    for (int t = 0; t < n; ++t)
        for (const auto& v : td.bags[t]) {
            int p = td.parent[t];
            if (p >= 0 && td.bags[p].count(v)) continue;
            auto [it, fresh] = tops.try_emplace(v, t);
            if (!fresh)
                throw ValidationError("vertex '" + v + "' occurs in disconnected nodes " + std::to_string(it->second) +
                                      " and " + std::to_string(t));
        }
    for (const auto& v : g.names)
        if (!tops.count(v)) throw ValidationError("vertex '" + v + "' is not covered by any bag");
    for (const auto& [a, b] : g.edges()) {
        bool ok = false;
        for (const auto& bag : td.bags)
            if (bag.count(a) && bag.count(b)) {
                ok = true;
                break;
            }
        if (!ok) throw ValidationError("edge {" + a + "," + b + "} is not covered by any bag");
    }
    return td.width();
}

// ---------------------------------------------------------------- normalization

struct NormalizedTd {
    TreeDecomposition td;
    int width = 0;                         // width of the source decomposition
    std::vector<Unit> units;
    std::vector<std::vector<int>> node_units; // C_t of each node, at most width+1 units
    std::map<std::string, int> last;           // topmost node containing the vertex
};

struct BagProjection {
    std::set<std::string> args;
    std::vector<std::pair<std::string, std::string>> attacks;
    std::vector<Unit> conditions;
};

// Units hosted by an argument of the bag whose variables lie inside the bag.
inline std::vector<int> eligible_units(const std::vector<Unit>& units, const std::set<std::string>& bag) {
    std::vector<int> out;
    for (size_t i = 0; i < units.size(); ++i) {
        const auto& u = units[i];
        bool hosted = false;
        for (const auto& h : u.hosts)
            if (bag.count(h)) hosted = true;
        if (!hosted) continue;
        bool inside = std::includes(bag.begin(), bag.end(), u.vars.begin(), u.vars.end());
        if (inside) out.push_back(static_cast<int>(i));
    }
    return out;
}

inline BagProjection bag_projection(const RAF& g, const TreeDecomposition& td, int node) {
    if (node < 0 || node >= td.size()) throw InputError("no node " + std::to_string(node));
    const auto& bag = td.bags[node];
    BagProjection p;
    for (const auto& v : bag)
        if (g.af.is_argument(v)) p.args.insert(v);
    for (auto [a, b] : g.af.attacks)
        if (bag.count(g.af.args[a]) && bag.count(g.af.args[b])) p.attacks.push_back({g.af.args[a], g.af.args[b]});
    auto units = condition_units(g);
    for (int i : eligible_units(units, bag)) p.conditions.push_back(units[i]);
    return p;
}

// At most two children per node, one condition unit per node, and last(v). Units sit on a chain
// of copy nodes above a unit-free node that carries the children, so no join node holds a unit.
inline NormalizedTd normalize_td(const TreeDecomposition& in, const RAF& g) {
    validate_td(primal_graph(g), in);
    NormalizedTd out;
    out.width = std::max(0, in.width());
    out.units = condition_units(g);
    auto& td = out.td;

    std::function<void(int, int)> build = [&](int t, int par) {
        auto node = [&](int p) {
            out.node_units.push_back({});
            return td.add_node(in.bags[t], p);
        };
        auto units = eligible_units(out.units, in.bags[t]);
        const auto& kids = in.children[t];
        int cur = node(par);
        for (size_t i = 0; i < units.size(); ++i) {
            if (i > 0) cur = node(cur);
            out.node_units[cur].push_back(units[i]);
        }
        if (!units.empty() && !kids.empty()) cur = node(cur);
        for (size_t i = 0; i < kids.size(); ++i) {
            // a copy node carries the remaining children
            if (i > 0 && i + 1 < kids.size()) cur = node(cur);
            build(kids[i], cur);
        }
    };
    build(in.root, -1);
    td.root = 0;
    for (int t = 0; t < td.size(); ++t)
        for (const auto& v : td.bags[t]) {
            int p = td.parent[t];
            if (p < 0 || !td.bags[p].count(v)) out.last[v] = t;
        }
    return out;
}

inline NormalizedTd normalize_td(const TreeDecomposition& in, const AF& f) { return normalize_td(in, make_raf(f)); }

inline BagProjection bag_projection(const RAF& g, const NormalizedTd& n, int node) {
    BagProjection p = bag_projection(make_raf(g.af), n.td, node);
    for (int i : n.node_units[node]) p.conditions.push_back(n.units[i]);
    return p;
}

// ---------------------------------------------------------------- PACE exchange format

inline std::string to_pace(const TreeDecomposition& td, const std::vector<std::string>& vertices) {
    std::map<std::string, int> id;
    for (size_t i = 0; i < vertices.size(); ++i) id[vertices[i]] = static_cast<int>(i) + 1;
    auto order = td.bfs_order();
    std::vector<int> num(td.size(), 0);
    for (size_t i = 0; i < order.size(); ++i) num[order[i]] = static_cast<int>(i) + 1;
    std::ostringstream os;
    for (size_t i = 0; i < vertices.size(); ++i) os << "c vertex " << i + 1 << " " << vertices[i] << "\n";
    os << "s td " << order.size() << " " << td.width() + 1 << " " << vertices.size() << "\n";
    for (int t : order) {
        os << "b " << num[t];
        std::vector<int> vs;
        for (const auto& v : td.bags[t]) {
            auto it = id.find(v);
            if (it == id.end()) throw InputError("bag vertex '" + v + "' missing from the vertex list");
            vs.push_back(it->second);
        }
        std::sort(vs.begin(), vs.end());
        for (int v : vs) os << " " << v;
        os << "\n";
    }
    for (int t : order)
        for (int c : td.children[t]) os << num[t] << " " << num[c] << "\n";
    return os.str();
}

// Reads a PACE decomposition; vertex names come from `c vertex` lines, else from `vertices` (1-based).
// Bag 1 becomes the root.
inline TreeDecomposition parse_pace(const std::string& text, const std::vector<std::string>& vertices = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw InputError("line " + std::to_string(lineno) + ": " + msg);
    };
    std::map<int, std::string> names;
    int nbags = -1, nverts = 0;
    std::map<int, std::vector<int>> bags;
    std::vector<std::pair<int, int>> edges;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "c") {
            std::string kw, name;
            int id;
            if (ls >> kw && kw == "vertex" && ls >> id >> name) names[id] = name;
            continue;
        }
        if (head == "s") {
            std::string td;
            int w;
            if (!(ls >> td >> nbags >> w >> nverts) || td != "td") fail("malformed header, expected 's td <bags> <width+1> <vertices>'");
            continue;
        }
        if (nbags < 0) fail("content before the 's td' header");
        if (head == "b") {
            int id;
            if (!(ls >> id) || id < 1 || id > nbags) fail("bad bag id");
            if (bags.count(id)) fail("bag " + std::to_string(id) + " given twice");
            int v;
            auto& b = bags[id];
            while (ls >> v) {
                if (v < 1 || v > nverts) fail("vertex " + std::to_string(v) + " out of range");
                b.push_back(v);
            }
            continue;
        }
        int a, b;
        std::istringstream es(line);
        if (!(es >> a >> b) || a < 1 || b < 1 || a > nbags || b > nbags) fail("malformed tree edge");
        edges.push_back({a, b});
    }
    if (nbags < 1) throw InputError("missing 's td' header or no bags");
    if (static_cast<int>(edges.size()) != nbags - 1)
        throw InputError("a tree on " + std::to_string(nbags) + " bags needs " + std::to_string(nbags - 1) + " edges");
    auto vname = [&](int v) {
        auto it = names.find(v);
        if (it != names.end()) return it->second;
        if (v <= static_cast<int>(vertices.size())) return vertices[v - 1];
        throw InputError("no name for vertex " + std::to_string(v));
    };
    std::vector<std::vector<int>> nb(nbags + 1);
    for (auto [a, b] : edges) {
        nb[a].push_back(b);
        nb[b].push_back(a);
    }
    TreeDecomposition td;
    std::vector<int> node(nbags + 1, -1);
    std::deque<std::pair<int, int>> q{{1, -1}};
    std::vector<char> queued(nbags + 1, 0);
    queued[1] = 1;
    while (!q.empty()) {
        auto [b, par] = q.front();
        q.pop_front();
        std::set<std::string> bag;
        for (int v : bags[b]) bag.insert(vname(v));
        node[b] = td.add_node(bag, par);
        for (int c : nb[b]) {
            if (par >= 0 && node[c] == par) continue;
            if (queued[c]) throw InputError("tree edges contain a cycle");
            queued[c] = 1;
            q.push_back({c, node[b]});
        }
    }
    for (int b = 1; b <= nbags; ++b)
        if (node[b] < 0) throw InputError("bag " + std::to_string(b) + " is not connected to bag 1");
    td.root = 0;
    return td;
}

} // namespace raf
