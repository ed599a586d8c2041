#pragma once

#include "core.hpp"

#include <algorithm>
#include <functional>

namespace raf {

struct Extension {
    ArgSet members = 0;
    ArgSet range = 0;
    bool operator==(const Extension&) const = default;
};

// Attack structure as bit masks, built once per query.
struct AttackIndex {
    int n = 0;
    std::vector<ArgSet> attackers; // attackers[a]: arguments attacking a
    std::vector<ArgSet> targets;   // targets[a]: arguments attacked by a
    ArgSet all = 0;

    explicit AttackIndex(const AF& f) : n(f.size()), attackers(f.size(), 0), targets(f.size(), 0) {
        if (n > 63) throw CapExceeded("framework has more than 63 arguments");
        all = n == 64 ? ~ArgSet{0} : (bit(n) - 1);
        for (auto [a, b] : f.attacks) {
            attackers[b] |= bit(a);
            targets[a] |= bit(b);
        }
    }

    ArgSet out(ArgSet s) const {
        ArgSet r = 0;
        for (int a = 0; a < n; ++a)
            if (has(s, a)) r |= targets[a];
        return r;
    }

    ArgSet range(ArgSet s) const { return s | out(s); }

    bool conflict_free(ArgSet s) const {
        for (int a = 0; a < n; ++a)
            if (has(s, a) && (attackers[a] & s)) return false;
        return true;
    }

    ArgSet defended(ArgSet s) const {
        ArgSet o = out(s), d = 0;
        for (int a = 0; a < n; ++a)
            if ((attackers[a] & ~o) == 0) d |= bit(a);
        return d;
    }

    bool admissible(ArgSet s) const { return conflict_free(s) && (s & ~defended(s)) == 0; }
    bool complete(ArgSet s) const { return conflict_free(s) && defended(s) == s; }
    bool stable(ArgSet s) const { return conflict_free(s) && range(s) == all; }
};

inline void check_subset(const AF& f, ArgSet s) {
    if (f.size() < 64 && (s >> f.size()) != 0) throw InputError("set contains a member outside the framework");
}

inline ArgSet range(const AF& f, ArgSet s) {
    check_subset(f, s);
    return AttackIndex(f).range(s);
}

inline ArgSet defended_set(const AF& f, ArgSet s) {
    check_subset(f, s);
    return AttackIndex(f).defended(s);
}

// Visits every conflict-free set exactly once.
inline void for_each_conflict_free(const AttackIndex& ix, const std::function<void(ArgSet)>& visit) {
    std::function<void(int, ArgSet)> rec = [&](int i, ArgSet s) {
        if (i == ix.n) {
            visit(s);
            return;
        }
        rec(i + 1, s);
        if (!(ix.attackers[i] & (s | bit(i))) && !(ix.targets[i] & s)) rec(i + 1, s | bit(i));
    };
    rec(0, 0);
}

// Keeps the sets whose key is not strictly below another set's key.
inline std::vector<ArgSet> maximal_by(const std::vector<ArgSet>& sets, const std::function<ArgSet(ArgSet)>& key) {
    std::vector<ArgSet> keys;
    for (auto s : sets) keys.push_back(key(s));
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::sort(keys.begin(), keys.end(), [](ArgSet a, ArgSet b) { return popcount(a) > popcount(b); });
    std::vector<ArgSet> top;
    for (auto k : keys) {
        bool dominated = false;
        for (auto t : top)
            if ((k & t) == k && k != t) {
                dominated = true;
                break;
            }
        if (!dominated) top.push_back(k);
    }
    std::vector<ArgSet> out;
    for (auto s : sets)
        if (std::find(top.begin(), top.end(), key(s)) != top.end()) out.push_back(s);
    return out;
}

// Cardinality first, then lexicographic on the sorted member names.
inline void sort_sets(const AF& f, std::vector<ArgSet>& sets) {
    std::sort(sets.begin(), sets.end(), [&](ArgSet a, ArgSet b) {
        if (popcount(a) != popcount(b)) return popcount(a) < popcount(b);
        return f.names(a) < f.names(b);
    });
}

inline std::vector<ArgSet> enumerate_sets(const AF& f, Semantics sem, const Caps& caps = {}) {
    if (f.size() > caps.af)
        throw CapExceeded("framework has " + std::to_string(f.size()) + " arguments, cap is " +
                          std::to_string(caps.af));
    AttackIndex ix(f);
    std::vector<ArgSet> conf, out;
    for_each_conflict_free(ix, [&](ArgSet s) { conf.push_back(s); });
    auto filter = [&](const std::function<bool(ArgSet)>& p) {
        std::vector<ArgSet> r;
        for (auto s : conf)
            if (p(s)) r.push_back(s);
        return r;
    };
    auto rng = [&](ArgSet s) { return ix.range(s); };
    switch (sem) {
    case Semantics::conf: out = conf; break;
    case Semantics::adm: out = filter([&](ArgSet s) { return ix.admissible(s); }); break;
    case Semantics::comp: out = filter([&](ArgSet s) { return ix.complete(s); }); break;
    case Semantics::stab: out = filter([&](ArgSet s) { return ix.stable(s); }); break;
    case Semantics::pref:
        out = maximal_by(filter([&](ArgSet s) { return ix.admissible(s); }), [](ArgSet s) { return s; });
        break;
    case Semantics::semiSt: out = maximal_by(filter([&](ArgSet s) { return ix.admissible(s); }), rng); break;
    case Semantics::stag: out = maximal_by(conf, rng); break;
    }
    sort_sets(f, out);
    return out;
}

inline std::vector<Extension> enumerate(const AF& f, Semantics sem, const Caps& caps = {}) {
    AttackIndex ix(f);
    std::vector<Extension> out;
    for (auto s : enumerate_sets(f, sem, caps)) out.push_back({s, ix.range(s)});
    return out;
}

inline bool satisfies(const AF& f, ArgSet s, Semantics sem, const Caps& caps = {}) {
    check_subset(f, s);
    AttackIndex ix(f);
    switch (sem) {
    case Semantics::conf: return ix.conflict_free(s);
    case Semantics::adm: return ix.admissible(s);
    case Semantics::comp: return ix.complete(s);
    case Semantics::stab: return ix.stable(s);
    default: break;
    }
    bool base = sem == Semantics::stag ? ix.conflict_free(s) : ix.admissible(s);
    if (!base) return false;
    auto all = enumerate_sets(f, sem, caps);
    return std::find(all.begin(), all.end(), s) != all.end();
}

} // namespace raf
