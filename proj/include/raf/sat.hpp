#pragma once

// Small DPLL solver with occurrence-list unit propagation. Literals use the DIMACS convention.

#include <cstdlib>
#include <functional>
#include <vector>

namespace raf {

using Clause = std::vector<int>;

class Sat {
public:
    explicit Sat(int nvars = 0) { ensure(nvars); }

    int num_vars() const { return static_cast<int>(value_.size()) - 1; }

    int new_var() {
        ensure(num_vars() + 1);
        return num_vars();
    }

    void add_clause(Clause c) {
        for (int l : c) ensure(std::abs(l));
        int id = static_cast<int>(clauses_.size());
        for (int l : c) occ_[index(l)].push_back(id);
        if (c.empty()) trivially_unsat_ = true;
        clauses_.push_back(std::move(c));
    }

    bool solve() {
        if (trivially_unsat_) return false;
        reset();
        return search();
    }

    // 1 true, -1 false, 0 unassigned (only after solve or inside enumerate callbacks)
    int value(int v) const { return value_[v]; }
    bool model_value(int v) const { return value_[v] > 0; }

    // Calls `visit` once per assignment to `proj` that extends to a model. Stops early when visit returns true.
    bool enumerate(const std::vector<int>& proj, const std::function<bool()>& visit) {
        if (trivially_unsat_) return false;
        reset();
        return enum_rec(proj, 0, visit);
    }

private:
    void ensure(int n) {
        if (n <= num_vars()) return;
        value_.resize(n + 1, 0);
        occ_.resize(2 * (n + 1));
    }

    static int index(int lit) { return lit > 0 ? 2 * lit : 2 * (-lit) + 1; }

    int lit_value(int l) const {
        int v = value_[std::abs(l)];
        return l > 0 ? v : -v;
    }

    void reset() {
        std::fill(value_.begin(), value_.end(), 0);
        trail_.clear();
        queue_head_ = 0;
    }

    bool assign(int l) {
        int cur = lit_value(l);
        if (cur != 0) return cur > 0;
        value_[std::abs(l)] = l > 0 ? 1 : -1;
        trail_.push_back(l);
        return true;
    }

    void undo(size_t mark) {
        while (trail_.size() > mark) {
            value_[std::abs(trail_.back())] = 0;
            trail_.pop_back();
        }
        queue_head_ = std::min(queue_head_, trail_.size());
    }

    // returns false on conflict
    bool check_clause(int id) {
        int unassigned = 0, last = 0;
        for (int l : clauses_[id]) {
            int v = lit_value(l);
            if (v > 0) return true;
            if (v == 0) {
                ++unassigned;
                last = l;
            }
        }
        if (unassigned == 0) return false;
        if (unassigned == 1) return assign(last);
        return true;
    }

    bool propagate(bool full) {
        if (full) {
            for (int id = 0; id < static_cast<int>(clauses_.size()); ++id)
                if (!check_clause(id)) return false;
        }
        while (queue_head_ < trail_.size()) {
            int l = trail_[queue_head_++];
            for (int id : occ_[index(-l)])
                if (!check_clause(id)) return false;
        }
        return true;
    }

    int pick() const {
        for (int v = 1; v <= num_vars(); ++v)
            if (value_[v] == 0) return v;
        return 0;
    }

    bool search() {
        if (!propagate(trail_.empty())) return false;
        int v = pick();
        if (v == 0) return true;
        size_t mark = trail_.size();
        for (int l : {v, -v}) {
            assign(l);
            if (search()) return true;
            undo(mark);
        }
        return false;
    }

    bool enum_rec(const std::vector<int>& proj, size_t i, const std::function<bool()>& visit) {
        if (!propagate(trail_.empty())) return false;
        while (i < proj.size() && value_[proj[i]] != 0) ++i;
        if (i == proj.size()) {
            size_t mark = trail_.size();
            bool sat = search();
            bool stop = sat && visit();
            undo(mark);
            return stop;
        }
        size_t mark = trail_.size();
        for (int l : {proj[i], -proj[i]}) {
            assign(l);
            if (enum_rec(proj, i + 1, visit)) return true;
            undo(mark);
        }
        return false;
    }

    std::vector<Clause> clauses_;
    std::vector<std::vector<int>> occ_;
    std::vector<signed char> value_{0};
    std::vector<int> trail_;
    size_t queue_head_ = 0;
    bool trivially_unsat_ = false;
};

inline bool satisfiable(int nvars, const std::vector<Clause>& clauses) {
    Sat s(nvars);
    for (const auto& c : clauses) s.add_clause(c);
    return s.solve();
}

} // namespace raf
