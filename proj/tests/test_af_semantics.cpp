#include <catch_amalgamated.hpp>

#include "support.hpp"

using namespace raf;
using namespace raf::testing;

namespace {

// Textbook definitions over explicit subsets, no bit tricks shared with the library.
struct Oracle {
    const AF& f;
    int n;
    explicit Oracle(const AF& f_) : f(f_), n(f_.size()) {}

    bool att(int a, int b) const {
        for (auto [x, y] : f.attacks)
            if (x == a && y == b) return true;
        return false;
    }
    bool in(ArgSet s, int a) const { return (s >> a) & 1; }
    bool cf(ArgSet s) const {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (in(s, a) && in(s, b) && att(a, b)) return false;
        return true;
    }
    bool defends(ArgSet s, int c) const {
        for (int b = 0; b < n; ++b) {
            if (!att(b, c)) continue;
            bool countered = false;
            for (int a = 0; a < n; ++a)
                if (in(s, a) && att(a, b)) countered = true;
            if (!countered) return false;
        }
        return true;
    }
    ArgSet range(ArgSet s) const {
        ArgSet r = s;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (in(s, a) && att(a, b)) r |= ArgSet{1} << b;
        return r;
    }
    bool adm(ArgSet s) const {
        if (!cf(s)) return false;
        for (int a = 0; a < n; ++a)
            if (in(s, a) && !defends(s, a)) return false;
        return true;
    }
    bool comp(ArgSet s) const {
        if (!adm(s)) return false;
        for (int a = 0; a < n; ++a)
            if (!in(s, a) && defends(s, a)) return false;
        return true;
    }
    bool stab(ArgSet s) const { return cf(s) && range(s) == (ArgSet{1} << n) - 1; }

    static bool subset(ArgSet a, ArgSet b) { return (a & ~b) == 0; }

    std::vector<ArgSet> sets(Semantics sem) const {
        std::vector<ArgSet> all;
        ArgSet top = ArgSet{1} << n;
        for (ArgSet s = 0; s < top; ++s) {
            bool ok = false;
            switch (sem) {
            case Semantics::conf: ok = cf(s); break;
            case Semantics::adm: ok = adm(s); break;
            case Semantics::comp: ok = comp(s); break;
            case Semantics::stab: ok = stab(s); break;
            case Semantics::pref:
                ok = adm(s);
                for (ArgSet t = 0; ok && t < top; ++t)
                    if (t != s && subset(s, t) && adm(t)) ok = false;
                break;
            case Semantics::semiSt:
                ok = adm(s);
                for (ArgSet t = 0; ok && t < top; ++t)
                    if (adm(t) && range(s) != range(t) && subset(range(s), range(t))) ok = false;
                break;
            case Semantics::stag:
                ok = cf(s);
                for (ArgSet t = 0; ok && t < top; ++t)
                    if (cf(t) && range(s) != range(t) && subset(range(s), range(t))) ok = false;
                break;
            }
            if (ok) all.push_back(s);
        }
        sort_sets(f, all);
        return all;
    }
};

} // namespace

TEST_CASE("grill party framework") {
    auto f = grill_base().af;
    using V = std::set<std::vector<std::string>>;
    CHECK(name_sets(f, enumerate_sets(f, Semantics::stab)) == V{{"P", "T", "W"}});
    CHECK(name_sets(f, enumerate_sets(f, Semantics::pref)) == V{{"P", "T", "W"}});
    CHECK(name_sets(f, enumerate_sets(f, Semantics::comp)) == V{{"P", "T", "W"}});
    CHECK(name_sets(f, enumerate_sets(f, Semantics::adm)).count({}) == 1);
}

TEST_CASE("hybrid framework") {
    auto f = hybrid_af();
    using V = std::set<std::vector<std::string>>;
    CHECK(enumerate_sets(f, Semantics::stab).empty());
    CHECK(name_sets(f, enumerate_sets(f, Semantics::pref)) == V{{"a"}, {"b"}});
    CHECK(name_sets(f, enumerate_sets(f, Semantics::comp)) == V{{}, {"a"}, {"b"}});
    CHECK(name_sets(f, enumerate_sets(f, Semantics::semiSt)) == V{{"a"}, {"b"}});
    CHECK(name_sets(f, enumerate_sets(f, Semantics::stag)) == V{{"a", "d"}, {"b", "d"}});
}

TEST_CASE("enumeration agrees with the definitional oracle", "[property]") {
    Rng rng(1);
    for (int i = 0; i < 400; ++i) {
        auto f = random_af(rng, uniform(rng, 1, 7), i % 2 ? 0.2 : 0.35);
        Oracle o(f);
        for (auto sem : all_semantics()) {
            INFO(render_af_lines(f) << to_string(sem));
            auto got = enumerate_sets(f, sem);
            REQUIRE(got == o.sets(sem));
            for (auto s : got) CHECK(satisfies(f, s, sem));
        }
        for (ArgSet s = 0; s < (ArgSet{1} << f.size()); ++s) {
            CHECK(range(f, s) == o.range(s));
            CHECK(satisfies(f, s, Semantics::conf) == o.cf(s));
            CHECK(satisfies(f, s, Semantics::adm) == o.adm(s));
            CHECK(satisfies(f, s, Semantics::comp) == o.comp(s));
            CHECK(satisfies(f, s, Semantics::stab) == o.stab(s));
        }
    }
}

TEST_CASE("classical inclusions between semantics", "[property]") {
    Rng rng(2);
    auto sub = [](const std::vector<ArgSet>& a, const std::vector<ArgSet>& b) {
        for (auto x : a)
            if (std::find(b.begin(), b.end(), x) == b.end()) return false;
        return true;
    };
    for (int i = 0; i < 300; ++i) {
        auto f = random_af(rng, uniform(rng, 1, 8));
        auto ex = [&](Semantics s) { return enumerate_sets(f, s); };
        CHECK(sub(ex(Semantics::stab), ex(Semantics::semiSt)));
        CHECK(sub(ex(Semantics::stab), ex(Semantics::stag)));
        CHECK(sub(ex(Semantics::semiSt), ex(Semantics::pref)));
        CHECK(sub(ex(Semantics::pref), ex(Semantics::comp)));
        CHECK(sub(ex(Semantics::comp), ex(Semantics::adm)));
        CHECK(sub(ex(Semantics::adm), ex(Semantics::conf)));
        CHECK_FALSE(ex(Semantics::pref).empty());
        if (!ex(Semantics::stab).empty()) {
            CHECK(ex(Semantics::stab) == ex(Semantics::semiSt));
            CHECK(ex(Semantics::stab) == ex(Semantics::stag));
        }
    }
}

TEST_CASE("caps and subset checks") {
    Rng rng(3);
    auto f = random_af(rng, 9);
    CHECK_THROWS_AS(enumerate_sets(f, Semantics::adm, Caps{8, 22, 24}), CapExceeded);
    CHECK_THROWS(satisfies(make_af({"a"}, {}), ArgSet{2}, Semantics::conf));
    auto ext = enumerate(hybrid_af(), Semantics::stag);
    REQUIRE(ext.size() == 2);
    CHECK(hybrid_af().names(ext[0].range) == std::vector<std::string>{"a", "b", "c", "d"});
}
