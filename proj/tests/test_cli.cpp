#include <catch_amalgamated.hpp>

#include "support.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

using namespace raf;
using namespace raf::testing;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(RAF_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(RAF_EXAMPLES) + "/" + name; }

fs::path scratch() {
    auto d = fs::temp_directory_path() / ("raf_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string read(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("solve") {
    auto r = run("solve " + data("grill.raf") + " --sem stab --task cons");
    CHECK(r.code == 10);
    CHECK(r.out == "YES\n");
    CHECK(run("solve " + data("grill.raf") + " --sem stab --format text").out == "{P,Re,T,W}\n");
    CHECK(run("solve " + data("grill.af") + " --sem conf --task cons").code == 20);

    CHECK(run("solve " + data("asp.raf") + " --sem adm --task cred --arg c").code == 20);
    CHECK(run("solve " + data("asp.raf") + " --sem adm --task cred --arg a").code == 10);
    auto lines = run("solve " + data("asp.raf") + " --sem adm --format json").out;
    std::istringstream in(lines);
    std::set<std::vector<std::string>> got;
    for (std::string line; std::getline(in, line);) {
        auto j = nlohmann::json::parse(line);
        got.insert(j["extension"].get<std::vector<std::string>>());
        CHECK(j.contains("range"));
    }
    CHECK(got == std::set<std::vector<std::string>>{{"a", "b"}, {"d"}});
    CHECK(run("solve " + data("asp.raf") + " --sem pref --scope raf --task cons").code == 10);
}

TEST_CASE("usage and input errors") {
    CHECK(run("").code == 1);
    CHECK(run("solve " + data("grill.raf") + " --sem nonsense").code == 1);
    CHECK(run("solve " + data("asp.raf") + " --sem adm --task cred").code == 1);
    auto missing = run("solve /nonexistent/x.raf --sem stab");
    CHECK(missing.code == 2);
    CHECK_THAT(missing.out, ContainsSubstring("cannot read"));
    auto bad = scratch() / "bad.raf";
    std::ofstream(bad) << "arg(a).\natt(a,b).\n";
    auto r = run("solve " + bad.string() + " --sem stab");
    CHECK(r.code == 2);
    CHECK_THAT(r.out, ContainsSubstring("line 2"));
    CHECK(run("solve " + data("asp.raf") + " --sem adm --task cred --arg zz").code == 2);
    CHECK(run("qbf-eval " + data("exists_forall.qdimacs") + " --cap-qbf 1").code == 3);
}

TEST_CASE("encode and evaluate") {
    auto dir = scratch();
    auto out = (dir / "grill_raf.qdimacs").string();
    auto r = run("encode " + data("grill.raf") + " --fragment prop --td " + data("grill.td") + " -o " + out);
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("source=3"));
    auto prov = nlohmann::json::parse(read(out + ".prov.json"));
    CHECK(prov["source_width"] == 3);
    CHECK(prov["fragment"] == "prop");
    auto q = parse_qdimacs(read(out));
    CHECK(prov["vars"].size() == static_cast<size_t>(q.num_vars()));
    CHECK(run("qbf-eval " + out + " --cap-qbf 1000").code == 10);

    auto e4 = (dir / "asp_raf.qcir").string();
    CHECK(run("encode " + data("asp.raf") + " --fragment disj --format qcir -o " + e4).code == 0);
    CHECK_THAT(read(e4), ContainsSubstring("#QCIR-G14"));
    CHECK(run("encode " + data("grill.raf") + " --fragment tight -o " + (dir / "x").string()).code == 2);

    auto ef = run("qbf-eval " + data("exists_forall.qdimacs"));
    CHECK(ef.code == 10);
    CHECK(ef.out == "TRUE\n");
}

TEST_CASE("decompose") {
    auto r = run("decompose " + data("grill.raf"));
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("c width 3"));
    auto g = parse_raf(read(data("grill.raf")));
    auto pg = primal_graph(g);
    auto body = r.out.substr(r.out.find('\n') + 1);
    CHECK(validate_td(pg, parse_pace(body, pg.names)) == 3);
    CHECK(run("decompose " + data("exists_forall.qdimacs") + " --heuristic min-degree").code == 0);
}

TEST_CASE("translate") {
    auto af = run("translate --from af " + data("grill.af"));
    REQUIRE(af.code == 0);
    auto g = parse_raf(af.out);
    CHECK(name_sets(g.af, enumerate_extension_sets(g, Semantics::stab)) ==
          std::set<std::vector<std::string>>{{"P", "T", "W"}});

    auto caf = run("translate --from caf --sem pref " + data("hybrid.caf"));
    REQUIRE(caf.code == 0);
    CHECK_THAT(caf.out, ContainsSubstring("% extensions correspond under adm"));
    auto c = parse_caf(read(data("hybrid.caf")));
    auto cg = parse_raf(caf.out);
    CHECK(enumerate_extension_sets(cg, Semantics::adm).size() >= caf_oracle(c, Semantics::pref).size());

    auto tw = run("translate --from twofold --shrink noS,W " + data("grill.af"));
    REQUIRE(tw.code == 0);
    CHECK_NOTHROW(parse_raf(tw.out));
    CHECK(run("translate --from af " + data("grill.raf")).code == 2);
}

TEST_CASE("generate") {
    auto dir = scratch();
    for (std::string kind : {"sat-simple", "qsat2-prop", "qsat2-tight", "qsat3-disj"}) {
        auto src = (dir / (kind + ".qdimacs")).string();
        auto r = run("generate --kind " + kind + " --seed 5 --source-out " + src);
        INFO(kind << "\n" << r.out);
        REQUIRE(r.code == 0);
        auto g = parse_raf(r.out);
        bool valid = evaluate_qbf(parse_qdimacs(read(src)), 40);
        CHECK(cons(g, Semantics::conf, Caps{20, 40, 40}) == valid);
    }
    auto cr = run("generate --kind dw-cred --class prop --seed 3");
    REQUIRE(cr.code == 0);
    CHECK_THAT(cr.out, ContainsSubstring("% query"));
    CHECK_NOTHROW(parse_raf(cr.out));
    CHECK(run("generate --kind ef --qbf " + data("exists_forall.qdimacs")).code == 1);
}
