#pragma once

#include "core.hpp"
#include "sat.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

namespace raf {

enum class Quant { exists, forall };

struct QBlock {
    Quant q;
    std::vector<int> vars;
};

// Prefix plus matrix (⋀ cnf) ∧ (⋁ dnf); an empty dnf stands for ⊤.
struct Qbf {
    std::vector<std::string> names; // names[v-1]
    std::map<std::string, int> ids;
    std::vector<QBlock> prefix;
    std::vector<Clause> cnf;
    std::vector<Clause> dnf;

    int num_vars() const { return static_cast<int>(names.size()); }

    int var(const std::string& name) {
        auto it = ids.find(name);
        if (it != ids.end()) return it->second;
        names.push_back(name);
        ids[name] = num_vars();
        return num_vars();
    }

    int find(const std::string& name) const {
        auto it = ids.find(name);
        if (it == ids.end()) throw InputError("unknown QBF variable '" + name + "'");
        return it->second;
    }

    int lit(const std::string& name, bool positive) { return positive ? var(name) : -var(name); }

    // Appends a block, merging with the innermost one when the quantifier repeats.
    void add_block(Quant q, const std::vector<int>& vs) {
        if (vs.empty()) return;
        if (!prefix.empty() && prefix.back().q == q) {
            prefix.back().vars.insert(prefix.back().vars.end(), vs.begin(), vs.end());
        } else {
            prefix.push_back({q, vs});
        }
    }

    void add_block(Quant q, const std::vector<std::string>& vs) {
        std::vector<int> ids_;
        for (const auto& v : vs) ids_.push_back(var(v));
        add_block(q, ids_);
    }

    std::string fresh(const std::string& stem) {
        for (int k = 1;; ++k) {
            auto n = stem + std::to_string(k);
            if (!ids.count(n)) return n;
        }
    }
};

inline std::vector<int> quantifier_level(const Qbf& q) {
    std::vector<int> level(q.num_vars() + 1, -1);
    for (size_t b = 0; b < q.prefix.size(); ++b)
        for (int v : q.prefix[b].vars) {
            if (v < 1 || v > q.num_vars()) throw InputError("quantified variable out of range");
            if (level[v] != -1) throw InputError("variable '" + q.names[v - 1] + "' quantified twice");
            level[v] = static_cast<int>(b);
        }
    return level;
}

inline void validate(const Qbf& q) {
    auto level = quantifier_level(q);
    for (size_t b = 0; b < q.prefix.size(); ++b) {
        if (q.prefix[b].vars.empty()) throw ValidationError("prefix block " + std::to_string(b) + " is empty");
        if (b > 0 && q.prefix[b].q == q.prefix[b - 1].q)
            throw ValidationError("prefix blocks " + std::to_string(b - 1) + " and " + std::to_string(b) +
                                  " do not alternate");
    }
    for (const auto* part : {&q.cnf, &q.dnf})
        for (const auto& c : *part)
            for (int l : c) {
                int v = std::abs(l);
                if (v < 1 || v > q.num_vars()) throw ValidationError("literal out of range");
                if (level[v] == -1) throw ValidationError("variable '" + q.names[v - 1] + "' is free");
            }
}

namespace detail {

class QbfSearch {
public:
    explicit QbfSearch(const Qbf& q) : q_(q), level_(quantifier_level(q)), val_(q.num_vars() + 1, 0) {
        memo_.resize(q.prefix.size() + 1);
        // a clause holding x and ~x never constrains anything, but would look falsifiable below
        std::erase_if(q_.cnf, [](const Clause& c) {
            for (int l : c)
                if (std::find(c.begin(), c.end(), -l) != c.end()) return true;
            return false;
        });
    }

    bool run() { return q_.prefix.empty() ? base(-1) : block(0); }

private:
    enum class St { yes, no, open };

    int lv(int l) const {
        int v = val_[std::abs(l)];
        return l > 0 ? v : -v;
    }

    bool clause_sat(const Clause& c) const {
        for (int l : c)
            if (lv(l) > 0) return true;
        return false;
    }

    bool clause_dead(const Clause& c) const {
        for (int l : c)
            if (lv(l) >= 0) return false;
        return true;
    }

    bool term_true(const Clause& t) const {
        for (int l : t)
            if (lv(l) <= 0) return false;
        return true;
    }

    bool term_dead(const Clause& t) const {
        for (int l : t)
            if (lv(l) < 0) return true;
        return false;
    }

    bool dnf_true() const {
        if (q_.dnf.empty()) return true;
        for (const auto& t : q_.dnf)
            if (term_true(t)) return true;
        return false;
    }

    St status() const {
        bool all = true;
        for (const auto& c : q_.cnf) {
            if (clause_dead(c)) return St::no;
            if (!clause_sat(c)) all = false;
        }
        bool dt = q_.dnf.empty(), alive = false;
        for (const auto& t : q_.dnf) {
            if (term_true(t)) dt = true;
            if (!term_dead(t)) alive = true;
        }
        if (!q_.dnf.empty() && !alive) return St::no;
        return all && dt ? St::yes : St::open;
    }

    bool inner(int l, int b) const { return level_[std::abs(l)] > b && val_[std::abs(l)] == 0; }

    // Last block: one SAT call decides the rest.
    bool base(int b) {
        St st = status();
        if (st != St::open) return st == St::yes;
        bool exists = b < 0 || q_.prefix[b].q == Quant::exists;
        std::map<int, int> id;
        Sat s;
        auto map = [&](int l) {
            int v = std::abs(l);
            auto it = id.find(v);
            int x = it == id.end() ? (id[v] = s.new_var()) : it->second;
            return l > 0 ? x : -x;
        };
        bool dt = dnf_true();
        if (exists) {
            for (const auto& c : q_.cnf) {
                if (clause_sat(c)) continue;
                Clause m;
                for (int l : c)
                    if (lv(l) == 0) m.push_back(map(l));
                s.add_clause(m);
            }
            if (!dt) {
                Clause one;
                for (const auto& t : q_.dnf) {
                    if (term_dead(t)) continue;
                    int sel = s.new_var();
                    one.push_back(sel);
                    for (int l : t)
                        if (lv(l) == 0) s.add_clause({-sel, map(l)});
                }
                s.add_clause(one);
            }
            return s.solve();
        }
        for (const auto& c : q_.cnf)
            if (!clause_sat(c)) return false;
        if (dt) return true;
        for (const auto& t : q_.dnf) {
            if (term_dead(t)) continue;
            Clause m;
            for (int l : t)
                if (lv(l) == 0) m.push_back(-map(l));
            s.add_clause(m);
        }
        return !s.solve();
    }

    std::vector<int> signature(int b) const {
        std::vector<int> sig{dnf_true() ? 1 : 0};
        std::vector<char> seen(val_.size(), 0);
        auto scan = [&](const Clause& c) {
            bool reaches = false;
            for (int l : c)
                if (inner(l, b)) reaches = true;
            if (!reaches) return;
            for (int l : c) {
                int v = std::abs(l);
                if (val_[v] != 0 && !seen[v]) {
                    seen[v] = 1;
                    sig.push_back(val_[v] > 0 ? v : -v);
                }
            }
        };
        for (const auto& c : q_.cnf)
            if (!clause_sat(c)) scan(c);
        if (!dnf_true())
            for (const auto& t : q_.dnf)
                if (!term_dead(t)) scan(t);
        std::sort(sig.begin() + 1, sig.end());
        return sig;
    }

    bool block(int b) {
        if (b == static_cast<int>(q_.prefix.size()) - 1) return base(b);
        St st = status();
        if (st != St::open) return st == St::yes;
        bool exists = q_.prefix[b].q == Quant::exists;
        // key variables share an open constraint with inner blocks or occur in an open term
        std::set<int> key;
        for (const auto& c : q_.cnf) {
            if (clause_sat(c)) continue;
            bool reaches = false;
            for (int l : c)
                if (inner(l, b)) reaches = true;
            if (!reaches) continue;
            for (int l : c)
                if (level_[std::abs(l)] == b && val_[std::abs(l)] == 0) key.insert(std::abs(l));
        }
        if (!dnf_true())
            for (const auto& t : q_.dnf) {
                if (term_dead(t)) continue;
                for (int l : t)
                    if (level_[std::abs(l)] == b && val_[std::abs(l)] == 0) key.insert(std::abs(l));
            }
        std::vector<int> order;
        for (int v : q_.prefix[b].vars)
            if (key.count(v)) order.push_back(v);
        return branch(b, exists, order, 0);
    }

    bool branch(int b, bool exists, const std::vector<int>& order, size_t i) {
        St st = status();
        if (st != St::open) return st == St::yes;
        if (i == order.size()) return leaf(b, exists);
        int v = order[i];
        for (int value : {1, -1}) {
            val_[v] = static_cast<signed char>(value);
            bool r = branch(b, exists, order, i + 1);
            val_[v] = 0;
            if (exists && r) return true;
            if (!exists && !r) return false;
        }
        return !exists;
    }

    // Remaining variables of block b occur only in clauses local to b.
    bool leaf(int b, bool exists) {
        std::vector<int> local;
        for (int v : q_.prefix[b].vars)
            if (val_[v] == 0) local.push_back(v);
        std::vector<int> assigned;
        if (!local.empty()) {
            std::map<int, int> id;
            Sat s;
            bool any = false;
            for (const auto& c : q_.cnf) {
                if (clause_sat(c)) continue;
                bool is_local = true, touches = false;
                for (int l : c) {
                    if (val_[std::abs(l)] != 0) continue;
                    if (level_[std::abs(l)] != b) is_local = false;
                    touches = true;
                }
                if (!is_local || !touches) continue;
                if (!exists) return false;
                Clause m;
                for (int l : c) {
                    if (val_[std::abs(l)] != 0) continue;
                    int v = std::abs(l);
                    if (!id.count(v)) id[v] = s.new_var();
                    m.push_back(l > 0 ? id[v] : -id[v]);
                }
                s.add_clause(m);
                any = true;
            }
            if (any && !s.solve()) return false;
            for (int v : local) {
                val_[v] = static_cast<signed char>(any && id.count(v) && s.model_value(id[v]) ? 1 : -1);
                assigned.push_back(v);
            }
        }
        auto sig = signature(b);
        auto& memo = memo_[b + 1];
        bool r;
        auto it = memo.find(sig);
        if (it != memo.end()) {
            r = it->second;
        } else {
            r = block(b + 1);
            memo[sig] = r;
        }
        for (int v : assigned) val_[v] = 0;
        return r;
    }

    Qbf q_;
    std::vector<int> level_;
    std::vector<signed char> val_;
    std::vector<std::map<std::vector<int>, bool>> memo_;
};

} // namespace detail

inline bool evaluate_qbf(const Qbf& q, int cap = 24) {
    validate(q);
    if (q.num_vars() > cap)
        throw CapExceeded("QBF has " + std::to_string(q.num_vars()) + " variables, cap is " + std::to_string(cap));
    return detail::QbfSearch(q).run();
}

// Moves the DNF part into the CNF with one selector per term, defined in a new innermost
// existential block.
inline Qbf prenex_cnf(const Qbf& in) {
    Qbf q = in;
    if (q.dnf.empty()) return q;
    std::vector<int> sels;
    Clause one;
    for (const auto& t : in.dnf) {
        int s = q.var(q.fresh("__sel"));
        sels.push_back(s);
        one.push_back(s);
        Clause back{s};
        for (int l : t) {
            q.cnf.push_back({-s, l});
            back.push_back(-l);
        }
        q.cnf.push_back(back);
    }
    q.cnf.push_back(one);
    q.dnf.clear();
    q.add_block(Quant::exists, sels);
    return q;
}

// ---------------------------------------------------------------- QDIMACS / QCIR

inline std::string to_qdimacs(const Qbf& q, bool comments = true, bool allow_terms = false) {
    if (!q.dnf.empty() && !allow_terms) throw InputError("QDIMACS output requires a CNF matrix; apply prenex_cnf");
    std::ostringstream os;
    if (comments)
        for (int v = 1; v <= q.num_vars(); ++v) os << "c var " << v << " " << q.names[v - 1] << "\n";
    os << "p cnf " << q.num_vars() << " " << q.cnf.size() << "\n";
    for (const auto& b : q.prefix) {
        os << (b.q == Quant::exists ? "e" : "a");
        for (int v : b.vars) os << " " << v;
        os << " 0\n";
    }
    for (const auto& c : q.cnf) {
        for (int l : c) os << l << " ";
        os << "0\n";
    }
    for (const auto& t : q.dnf) {
        os << "t";
        for (int l : t) os << " " << l;
        os << " 0\n";
    }
    return os.str();
}

// Reads QDIMACS plus `t ... 0` lines for DNF terms. Unquantified variables join an outermost
// existential block; `c var <id> <name>` comments restore names.
inline Qbf parse_qdimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0, nv = -1, nc = -1;
    std::map<int, std::string> named;
    std::vector<std::pair<Quant, std::vector<int>>> blocks;
    std::vector<Clause> cnf, dnf;
    auto fail = [&](const std::string& msg) -> void {
        throw InputError("line " + std::to_string(lineno) + ": " + msg);
    };
    auto read_lits = [&](std::istringstream& ls) {
        Clause c;
        long long x;
        bool closed = false;
        while (ls >> x) {
            if (x == 0) {
                closed = true;
                break;
            }
            if (nv < 0) fail("literal before the problem line");
            if (std::llabs(x) > nv) fail("literal " + std::to_string(x) + " exceeds the declared variable count");
            c.push_back(static_cast<int>(x));
        }
        if (!closed) fail("missing terminating 0");
        std::string rest;
        if (ls >> rest) fail("unexpected text after terminating 0");
        return c;
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "c") {
            std::string kw, name;
            int id;
            if (ls >> kw && kw == "var" && ls >> id >> name) named[id] = name;
            continue;
        }
        if (head == "p") {
            std::string fmt;
            if (nv >= 0) fail("duplicate problem line");
            if (!(ls >> fmt >> nv >> nc) || fmt != "cnf" || nv < 0 || nc < 0) fail("malformed problem line");
            continue;
        }
        if (head == "e" || head == "a") {
            if (!cnf.empty() || !dnf.empty()) fail("quantifier line after clauses");
            auto c = read_lits(ls);
            for (int v : c)
                if (v < 0) fail("negative variable in quantifier line");
            blocks.push_back({head == "e" ? Quant::exists : Quant::forall, c});
            continue;
        }
        if (head == "t") {
            dnf.push_back(read_lits(ls));
            continue;
        }
        std::istringstream all(line);
        cnf.push_back(read_lits(all));
    }
    if (nv < 0) throw InputError("missing problem line");
    if (static_cast<int>(cnf.size()) != nc)
        throw InputError("problem line declares " + std::to_string(nc) + " clauses, found " +
                         std::to_string(cnf.size()));
    Qbf q;
    for (int v = 1; v <= nv; ++v) {
        auto it = named.find(v);
        std::string n = it != named.end() ? it->second : "v" + std::to_string(v);
        if (q.ids.count(n)) throw InputError("duplicate variable name '" + n + "'");
        q.var(n);
    }
    std::vector<char> bound(nv + 1, 0);
    for (const auto& [qq, vs] : blocks)
        for (int v : vs) {
            if (bound[v]) throw InputError("variable " + std::to_string(v) + " quantified twice");
            bound[v] = 1;
        }
    std::vector<int> free_vars;
    std::vector<char> used(nv + 1, 0);
    for (const auto* part : {&cnf, &dnf})
        for (const auto& c : *part)
            for (int l : c) used[std::abs(l)] = 1;
    for (int v = 1; v <= nv; ++v)
        if (used[v] && !bound[v]) free_vars.push_back(v);
    q.add_block(Quant::exists, free_vars);
    for (const auto& [qq, vs] : blocks) q.add_block(qq, vs);
    q.cnf = cnf;
    q.dnf = dnf;
    return q;
}

inline std::string to_qcir(const Qbf& q) {
    std::ostringstream os;
    os << "#QCIR-G14\n";
    for (const auto& b : q.prefix) {
        os << (b.q == Quant::exists ? "exists(" : "forall(");
        for (size_t i = 0; i < b.vars.size(); ++i) os << (i ? ", " : "") << b.vars[i];
        os << ")\n";
    }
    int next = q.num_vars();
    std::ostringstream gates;
    auto gate = [&](const char* op, const std::vector<int>& ins) {
        int g = ++next;
        gates << g << " = " << op << "(";
        for (size_t i = 0; i < ins.size(); ++i) gates << (i ? ", " : "") << ins[i];
        gates << ")\n";
        return g;
    };
    std::vector<int> cl, tm;
    for (const auto& c : q.cnf) cl.push_back(gate("or", c));
    int cnf_gate = gate("and", cl);
    std::vector<int> top{cnf_gate};
    if (!q.dnf.empty()) {
        for (const auto& t : q.dnf) tm.push_back(gate("and", t));
        top.push_back(gate("or", tm));
    }
    int out = gate("and", top);
    os << "output(" << out << ")\n" << gates.str();
    return os.str();
}

// Optional cross-check with an external solver named by RAF_QBF_SOLVER (exit 10 true, 20 false).
inline std::optional<bool> external_qbf_verdict(const Qbf& q) {
    const char* solver = std::getenv("RAF_QBF_SOLVER");
    if (!solver || !*solver) return std::nullopt;
    char path[] = "/tmp/raf_qbf_XXXXXX";
    int fd = mkstemp(path);
    if (fd < 0) return std::nullopt;
    {
        std::ofstream out(path);
        out << to_qdimacs(prenex_cnf(q), false);
    }
    close(fd);
    int rc = std::system((std::string(solver) + " " + path + " >/dev/null 2>&1").c_str());
    std::remove(path);
    if (rc == -1 || !WIFEXITED(rc)) return std::nullopt;
    int code = WEXITSTATUS(rc);
    if (code == 10) return true;
    if (code == 20) return false;
    return std::nullopt;
}

} // namespace raf
