#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace raf;
using namespace raf::testing;

namespace {

std::vector<std::string> atom_list(const std::set<std::string>& s) { return {s.begin(), s.end()}; }

Assignment assignment(const std::vector<std::string>& vs, uint64_t m) {
    Assignment nu;
    for (size_t i = 0; i < vs.size(); ++i) nu[vs[i]] = (m >> i) & 1;
    return nu;
}

bool brute_sat(const FormulaPtr& f) {
    auto vs = atom_list(vars(f));
    for (uint64_t m = 0; m < (uint64_t{1} << vs.size()); ++m)
        if (evaluate(f, assignment(vs, m))) return true;
    return false;
}

bool brute_cnf(int n, const std::vector<Clause>& cnf) {
    for (uint64_t m = 0; m < (uint64_t{1} << n); ++m) {
        bool ok = true;
        for (const auto& c : cnf) {
            bool sat = false;
            for (int l : c)
                if (((m >> (std::abs(l) - 1)) & 1) == (l > 0)) sat = true;
            if (!sat) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

// M is an answer set iff it is a minimal model of the reduct (checked over all subsets).
bool brute_answer_set(const Program& p, const AtomSet& m) {
    auto red = gl_reduct(p, m);
    auto model = [&](const AtomSet& x) {
        for (const auto& r : red) {
            bool body = true;
            for (const auto& b : r.pos)
                if (!x.count(b)) body = false;
            if (!body) continue;
            bool head = false;
            for (const auto& h : r.head)
                if (x.count(h)) head = true;
            if (!head) return false;
        }
        return true;
    };
    if (!model(m)) return false;
    std::vector<std::string> in(m.begin(), m.end());
    for (uint64_t s = 0; s + 1 < (uint64_t{1} << in.size()); ++s) {
        AtomSet x;
        for (size_t i = 0; i < in.size(); ++i)
            if ((s >> i) & 1) x.insert(in[i]);
        if (model(x)) return false;
    }
    return true;
}

std::vector<AtomSet> brute_answer_sets(const Program& p) {
    auto at = atom_list(atoms(p));
    std::vector<AtomSet> out;
    for (uint64_t m = 0; m < (uint64_t{1} << at.size()); ++m) {
        AtomSet x;
        for (size_t i = 0; i < at.size(); ++i)
            if ((m >> i) & 1) x.insert(at[i]);
        if (brute_answer_set(p, x)) out.push_back(x);
    }
    return out;
}

Program random_program(Rng& rng, ProgramKind kind, int n_atoms) {
    auto r = random_asp_raf(rng, 1, n_atoms, kind, 1.0);
    for (int i = 0; i < 2; ++i) {
        auto more = random_asp_raf(rng, 1, n_atoms, kind, 1.0);
        r.rules[0].insert(r.rules[0].end(), more.rules[0].begin(), more.rules[0].end());
    }
    return r.rules[0];
}

} // namespace

TEST_CASE("sat solver agrees with exhaustive search", "[property]") {
    Rng rng(21);
    for (int i = 0; i < 500; ++i) {
        int n = uniform(rng, 1, 8);
        std::vector<Clause> cnf;
        int m = uniform(rng, 0, 4 * n);
        for (int j = 0; j < m; ++j) {
            Clause c;
            int w = uniform(rng, 0, 3);
            for (int k = 0; k < w; ++k) c.push_back(uniform(rng, 1, n) * (chance(rng, 0.5) ? 1 : -1));
            cnf.push_back(c);
        }
        Sat s(n);
        for (auto c : cnf) s.add_clause(c);
        bool sat = s.solve();
        REQUIRE(sat == brute_cnf(n, cnf));
        if (sat)
            for (const auto& c : cnf) {
                bool ok = false;
                for (int l : c)
                    if (s.model_value(std::abs(l)) == (l > 0)) ok = true;
                CHECK(ok);
            }
    }
}

TEST_CASE("sat enumeration visits each projected model once") {
    Sat s(3);
    s.add_clause({1, 2});
    std::set<std::pair<bool, bool>> seen;
    int visits = 0;
    s.enumerate({1, 2}, [&] {
        ++visits;
        seen.insert({s.model_value(1), s.model_value(2)});
        return false;
    });
    CHECK(visits == 3);
    CHECK(seen.size() == 3);
}

TEST_CASE("tseitin and classical consistency", "[property]") {
    Rng rng(22);
    std::vector<std::string> atoms{"a", "b", "c", "d"};
    for (int i = 0; i < 400; ++i) {
        auto f = random_formula(rng, atoms, 4);
        auto cnf = tseitin(f);
        Sat s(cnf.num_vars());
        for (auto c : cnf.clauses) s.add_clause(c);
        s.add_clause({cnf.output});
        CHECK(s.solve() == brute_sat(f));

        auto g = random_formula(rng, atoms, 3);
        Assignment fixed{{"a", chance(rng, 0.5)}};
        bool want = false;
        auto vs = atom_list(vars(f_and({f, g, f_atom("a")})));
        for (uint64_t m = 0; m < (uint64_t{1} << vs.size()); ++m) {
            auto nu = assignment(vs, m);
            if (nu["a"] != fixed["a"]) continue;
            if (evaluate(f, nu) && evaluate(g, nu)) want = true;
        }
        CHECK(classical_consistent({f, g}, fixed) == want);
    }
    CHECK(classical_consistent({}, {}));
    CHECK_FALSE(classical_consistent({f_false()}, {}));
    CHECK_THROWS_AS(classical_consistent({f_and({f_atom("a"), f_atom("b")})}, {}, 1), CapExceeded);
}

TEST_CASE("simplify is sound", "[property]") {
    Rng rng(23);
    std::vector<std::string> atoms{"a", "b", "c"};
    for (int i = 0; i < 300; ++i) {
        auto f = random_formula(rng, atoms, 4);
        Assignment fixed{{"b", chance(rng, 0.5)}};
        auto g = simplify(f, fixed);
        CHECK_FALSE(vars(g).count("b"));
        for (int m = 0; m < 4; ++m) {
            Assignment nu{{"a", (m & 1) != 0}, {"b", fixed["b"]}, {"c", (m & 2) != 0}};
            CHECK(evaluate(f, nu) == evaluate(g, nu));
        }
    }
}

TEST_CASE("truth-table clausification is equivalent", "[property]") {
    Rng rng(24);
    std::vector<std::string> atoms{"a", "b", "c", "d"};
    for (int i = 0; i < 300; ++i) {
        auto f = random_formula(rng, atoms, 3);
        auto cls = truth_table_cnf(f);
        auto vs = atom_list(vars(f));
        for (uint64_t m = 0; m < (uint64_t{1} << vs.size()); ++m) {
            auto nu = assignment(vs, m);
            bool all = true;
            for (const auto& c : cls) {
                bool sat = false;
                for (auto [v, pos] : c) {
                    CHECK(vars(f).count(v));
                    if (nu[v] == pos) sat = true;
                }
                if (!sat) all = false;
            }
            CHECK(all == evaluate(f, nu));
        }
    }
    auto c = truth_table_cnf(f_implies(f_atom("a"), f_or({f_atom("b"), f_not(f_atom("c"))})));
    CHECK(c.size() == 1);
    CHECK(c[0].size() == 3);
    CHECK(truth_table_cnf(f_true()).empty());
    CHECK(truth_table_cnf(f_or({f_atom("a"), f_not(f_atom("a"))})).empty());
}

TEST_CASE("answer sets of small programs") {
    auto p = parse_raf("#mode asp. arg(z). rc(z): p :- not q. rc(z): q :- not p.").rules[0];
    CHECK(is_answer_set(p, {"p"}));
    CHECK(is_answer_set(p, {"q"}));
    CHECK_FALSE(is_answer_set(p, {"p", "q"}));
    CHECK_FALSE(is_answer_set(p, {}));

    auto odd = parse_raf("#mode asp. arg(z). rc(z): p :- not p.").rules[0];
    CHECK_FALSE(asp_consistent(odd));

    auto loop = parse_raf("#mode asp. arg(z). rc(z): p :- q. rc(z): q :- p.").rules[0];
    CHECK(is_answer_set(loop, {}));
    CHECK_FALSE(is_answer_set(loop, {"p", "q"}));

    auto disj = parse_raf("#mode asp. arg(z). rc(z): p | q. rc(z): p :- q. rc(z): q :- p.").rules[0];
    CHECK(is_answer_set(disj, {"p", "q"}));
    CHECK_FALSE(is_answer_set(disj, {"p"}));
}

TEST_CASE("answer-set search matches the minimal-model oracle", "[property]") {
    Rng rng(25);
    for (auto kind : {ProgramKind::tight, ProgramKind::normal, ProgramKind::disjunctive}) {
        for (int i = 0; i < 250; ++i) {
            auto p = random_program(rng, kind, uniform(rng, 1, 4));
            auto want = brute_answer_sets(p);
            INFO(render_raf([&] {
                RAF g = make_raf(make_af({"z"}, {}), Mode::asp);
                g.rules[0] = p;
                return g;
            }()));
            for (const auto& m : want) CHECK(is_answer_set(p, m));
            auto found = find_answer_set(p);
            CHECK(found.has_value() == !want.empty());
            if (found) CHECK(std::find(want.begin(), want.end(), *found) != want.end());
            if (kind == ProgramKind::tight) {
                REQUIRE(is_tight(p));
                auto at = atom_list(atoms(p));
                for (uint64_t m = 0; m < (uint64_t{1} << at.size()); ++m) {
                    AtomSet x;
                    for (size_t j = 0; j < at.size(); ++j)
                        if ((m >> j) & 1) x.insert(at[j]);
                    CHECK(justified_model_check(p, x) == brute_answer_set(p, x));
                }
            }
        }
    }
}

TEST_CASE("tightness") {
    CHECK(is_tight(parse_raf("#mode asp. arg(z). rc(z): p :- not p.").rules[0]));
    CHECK_FALSE(is_tight(parse_raf("#mode asp. arg(z). rc(z): p :- p.").rules[0]));
    CHECK_THROWS_AS(justified_model_check(parse_raf("#mode asp. arg(z). rc(z): p :- p.").rules[0], {}), InputError);
}
