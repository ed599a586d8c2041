#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace raf;
using namespace raf::testing;
using Catch::Matchers::ContainsSubstring;

namespace {

// Expands every quantifier in order; the matrix is evaluated at the leaves.
bool naive(const Qbf& q) {
    std::vector<int> order;
    std::vector<Quant> kind;
    for (const auto& b : q.prefix)
        for (int v : b.vars) {
            order.push_back(v);
            kind.push_back(b.q);
        }
    std::vector<char> val(q.num_vars() + 1, 0);
    auto lit = [&](int l) { return static_cast<bool>(val[std::abs(l)]) == (l > 0); };
    auto matrix = [&] {
        for (const auto& c : q.cnf)
            if (std::none_of(c.begin(), c.end(), lit)) return false;
        if (q.dnf.empty()) return true;
        for (const auto& t : q.dnf)
            if (std::all_of(t.begin(), t.end(), lit)) return true;
        return false;
    };
    std::function<bool(size_t)> rec = [&](size_t i) {
        if (i == order.size()) return matrix();
        val[order[i]] = 0;
        bool a = rec(i + 1);
        if (kind[i] == Quant::exists ? a : !a) return a;
        val[order[i]] = 1;
        return rec(i + 1);
    };
    return rec(0);
}

Qbf random_shape(Rng& rng) {
    QbfShape s;
    int blocks = uniform(rng, 1, 4);
    Quant q = chance(rng, 0.5) ? Quant::exists : Quant::forall;
    for (int b = 0; b < blocks; ++b) {
        s.blocks.push_back({q, uniform(rng, 1, 3)});
        q = q == Quant::exists ? Quant::forall : Quant::exists;
    }
    s.dnf = chance(rng, 0.5);
    s.parts = uniform(rng, 1, 6);
    s.width = uniform(rng, 1, 3);
    return random_qbf(rng, s);
}

// Negation with dual prefix: a CNF matrix becomes the DNF of negated clauses and vice versa.
Qbf negated(const Qbf& q) {
    Qbf n = q;
    for (auto& b : n.prefix) b.q = b.q == Quant::exists ? Quant::forall : Quant::exists;
    auto flip = [](std::vector<Clause> xs) {
        for (auto& c : xs)
            for (auto& l : c) l = -l;
        return xs;
    };
    n.cnf = flip(q.dnf);
    n.dnf = flip(q.cnf);
    if (q.cnf.empty() && q.dnf.empty()) n.cnf.push_back({}); // ¬⊤
    return n;
}

} // namespace

TEST_CASE("worked QBF") {
    auto q = exists_forall_qbf();
    CHECK(evaluate_qbf(q));
    CHECK(naive(q));
    q.dnf.pop_back();
    CHECK_FALSE(evaluate_qbf(q));
}

TEST_CASE("search agrees with naive expansion", "[property]") {
    Rng rng(41);
    int valid = 0;
    for (int i = 0; i < 600; ++i) {
        auto q = random_shape(rng);
        INFO(to_qdimacs(q, true, true));
        bool v = naive(q);
        REQUIRE(evaluate_qbf(q) == v);
        valid += v;
        CHECK(evaluate_qbf(prenex_cnf(q)) == v);
        CHECK(prenex_cnf(q).dnf.empty());
        if (q.cnf.empty() || q.dnf.empty()) CHECK(evaluate_qbf(negated(q)) == !v);
    }
    CHECK(valid > 100);
    CHECK(valid < 500);
}

TEST_CASE("mixed matrices", "[property]") {
    Rng rng(42);
    for (int i = 0; i < 300; ++i) {
        auto q = random_shape(rng);
        // add a few clauses over the same variables to a DNF formula, or terms to a CNF one
        int n = q.num_vars();
        for (int k = 0; k < 2; ++k) {
            Clause c{uniform(rng, 1, n) * (chance(rng, 0.5) ? 1 : -1), uniform(rng, 1, n) * (chance(rng, 0.5) ? 1 : -1)};
            (q.dnf.empty() ? q.dnf : q.cnf).push_back(c);
        }
        INFO(to_qdimacs(q, true, true));
        CHECK(evaluate_qbf(q) == naive(q));
        CHECK(evaluate_qbf(prenex_cnf(q)) == naive(q));
    }
}

TEST_CASE("QDIMACS round trip, including term lines", "[property]") {
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        auto q = random_shape(rng);
        auto text = to_qdimacs(q, true, true);
        auto back = parse_qdimacs(text);
        CHECK(back.names == q.names);
        CHECK(back.cnf == q.cnf);
        CHECK(back.dnf == q.dnf);
        CHECK(to_qdimacs(back, true, true) == text);
        CHECK(evaluate_qbf(back) == naive(q));
    }
    CHECK_THROWS_AS(to_qdimacs(exists_forall_qbf()), InputError);
    CHECK_NOTHROW(to_qdimacs(prenex_cnf(exists_forall_qbf())));
}

TEST_CASE("QDIMACS parsing details") {
    auto q = parse_qdimacs("c plain comment\np cnf 3 1\na 2 0\n1 -2 3 0\n");
    REQUIRE(q.prefix.size() == 2);
    CHECK(q.prefix[0].q == Quant::exists); // free 1 and 3 go outermost
    CHECK(q.prefix[0].vars == std::vector<int>{1, 3});
    CHECK(q.names == std::vector<std::string>{"v1", "v2", "v3"});
    CHECK(evaluate_qbf(q));

    auto err = [](const std::string& text) {
        try {
            parse_qdimacs(text);
        } catch (const InputError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK_THAT(err("p cnf 1 1\n1\n"), ContainsSubstring("line 2") && ContainsSubstring("terminating 0"));
    CHECK_THAT(err("p cnf 1 1\n2 0\n"), ContainsSubstring("exceeds"));
    CHECK_THAT(err("p cnf 1 2\n1 0\n"), ContainsSubstring("declares 2 clauses"));
    CHECK_THAT(err("1 0\n"), ContainsSubstring("problem line"));
    CHECK_THAT(err("p cnf 2 1\n1 0\ne 2 0\n"), ContainsSubstring("after clauses"));
    CHECK_THAT(err("p cnf 2 0\ne 1 0\na 1 0\n"), ContainsSubstring("quantified twice"));
    CHECK_THAT(err("p cnf 1 0\ne -1 0\n"), ContainsSubstring("negative"));
    CHECK_THAT(err("p dnf 1 0\n"), ContainsSubstring("malformed"));
}

TEST_CASE("validation of hand-built formulas") {
    Qbf q;
    q.add_block(Quant::exists, std::vector<std::string>{"x"});
    q.add_block(Quant::exists, std::vector<std::string>{"y"}); // merged into the first block
    CHECK(q.prefix.size() == 1);
    q.cnf.push_back({q.lit("z", true)});
    CHECK_THROWS_WITH(validate(q), ContainsSubstring("'z' is free"));
    q.prefix.push_back({Quant::exists, {3}});
    CHECK_THROWS_WITH(validate(q), ContainsSubstring("do not alternate"));
    CHECK_THROWS_AS(evaluate_qbf(exists_forall_qbf(), 2), CapExceeded);
    CHECK(q.fresh("x") == "x1");
}

TEST_CASE("QCIR output") {
    auto text = to_qcir(exists_forall_qbf());
    CHECK_THAT(text, ContainsSubstring("#QCIR-G14"));
    CHECK_THAT(text, ContainsSubstring("exists(1, 2)"));
    CHECK_THAT(text, ContainsSubstring("forall(3)"));
    CHECK_THAT(text, ContainsSubstring("output("));
    CHECK_THAT(text, ContainsSubstring("= and(1, -2, 3)"));
}

TEST_CASE("external solver is optional") {
    if (!std::getenv("RAF_QBF_SOLVER")) {
        CHECK_FALSE(external_qbf_verdict(exists_forall_qbf()).has_value());
    } else {
        CHECK(external_qbf_verdict(exists_forall_qbf()) == std::optional<bool>(true));
    }
}
