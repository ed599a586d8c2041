// raf: command-line front end.
//   exit 10 yes / 20 no, 0 done, 1 usage, 2 input, 3 cap exceeded

#include "raf/raf.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstring>
#include <fstream>
#include <iostream>
#include <random>

using namespace raf;
using json = nlohmann::json;

namespace {

constexpr int kYes = 10, kNo = 20, kDone = 0, kUsage = 1, kInput = 2, kCap = 3;

std::string slurp(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in) throw InputError("cannot read '" + path + "'");
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
}

Semantics semantics_arg(const std::string& s) {
    auto sem = parse_semantics(s);
    if (!sem) throw CLI::ValidationError("--sem", "unknown semantics '" + s + "'");
    return *sem;
}

bool is_qbf_path(const std::string& p) {
    for (const char* ext : {".qdimacs", ".cnf", ".qdnf"})
        if (p.size() >= std::strlen(ext) && p.compare(p.size() - std::strlen(ext), std::string::npos, ext) == 0) return true;
    return false;
}

std::string set_text(const std::vector<std::string>& s) {
    std::string out = "{";
    for (size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + s[i];
    return out + "}";
}

struct Options {
    int cap_af = Caps{}.af, cap_logic = Caps{}.logic, cap_qbf = Caps{}.qbf;
    Caps caps() const { return {cap_af, cap_logic, cap_qbf}; }
};

void add_caps(CLI::App* app, Options& o) {
    app->add_option("--cap-af", o.cap_af, "largest argument count for brute-force enumeration")->check(CLI::PositiveNumber);
    app->add_option("--cap-logic", o.cap_logic, "largest free-variable count for consistency checks")->check(CLI::PositiveNumber);
    app->add_option("--cap-qbf", o.cap_qbf, "largest variable count for QBF evaluation")->check(CLI::PositiveNumber);
}

RcClass class_arg(const std::string& s) {
    if (s == "simple") return RcClass::simple;
    if (s == "prop" || s == "propositional") return RcClass::propositional;
    if (s == "tight") return RcClass::tight;
    if (s == "disj" || s == "disjunctive") return RcClass::disjunctive;
    throw CLI::ValidationError("--class", "unknown class '" + s + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rejection-augmented argumentation frameworks"};
    app.require_subcommand(1);
    Options opt;

    // solve
    auto* solve = app.add_subcommand("solve", "decide or enumerate extensions of a RAF");
    std::string solve_in, sem_name = "stab", task = "enum", query, scope_name = "base", fmt = "json";
    solve->add_option("file", solve_in, "RAF document")->required();
    solve->add_option("--sem", sem_name, "conf, adm, comp, pref, stab, semiSt or stag");
    solve->add_option("--task", task, "cons, enum or cred")->check(CLI::IsMember({"cons", "enum", "cred"}));
    solve->add_option("--arg", query, "argument queried by --task cred");
    solve->add_option("--scope", scope_name, "maximality among base sets (base) or RAF extensions (raf)")
        ->check(CLI::IsMember({"base", "raf"}));
    solve->add_option("--format", fmt, "json or text")->check(CLI::IsMember({"json", "text"}));
    add_caps(solve, opt);

    // encode
    auto* enc = app.add_subcommand("encode", "decomposition-guided QBF encoding of stable-extension existence");
    std::string enc_in, frag_name = "stab", enc_fmt = "qdimacs", td_in, enc_out, heur_name = "min-fill";
    enc->add_option("file", enc_in, "RAF document")->required();
    enc->add_option("--fragment", frag_name, "stab, simple, prop, tight or disj")
        ->check(CLI::IsMember({"stab", "simple", "prop", "tight", "disj"}));
    enc->add_option("--format", enc_fmt, "qdimacs or qcir")->check(CLI::IsMember({"qdimacs", "qcir"}));
    enc->add_option("--td", td_in, "PACE decomposition of the primal graph (default: heuristic)");
    enc->add_option("--heuristic", heur_name, "min-fill or min-degree")->check(CLI::IsMember({"min-fill", "min-degree"}));
    enc->add_option("-o,--out", enc_out, "output path (default: input path plus format suffix)");

    // decompose
    auto* dec = app.add_subcommand("decompose", "tree decomposition of a primal graph in PACE format");
    std::string dec_in, dec_heur = "min-fill";
    dec->add_option("file", dec_in, "RAF document, or QDIMACS (.qdimacs/.cnf/.qdnf) for a matrix")->required();
    dec->add_option("--heuristic", dec_heur, "min-fill or min-degree")->check(CLI::IsMember({"min-fill", "min-degree"}));

    // translate
    auto* tr = app.add_subcommand("translate", "simulate AFs, CAFs or twofold extensions by RAFs");
    std::string tr_from = "af", tr_in, tr_sem = "adm";
    std::vector<std::string> shrink;
    tr->add_option("--from", tr_from, "af, caf or twofold")->check(CLI::IsMember({"af", "caf", "twofold"}))->required();
    tr->add_option("file", tr_in, "AF or CAF document")->required();
    tr->add_option("--sem", tr_sem, "CAF semantics to simulate");
    tr->add_option("--shrink", shrink, "shrinking set S for twofold extensions")->delimiter(',');

    // generate
    auto* gen = app.add_subcommand("generate", "hardness instances from QBFs");
    std::string kind, gen_qbf, gen_src, gen_class = "simple";
    uint64_t seed = 0;
    int size = 2;
    gen->add_option("--kind", kind, "sat-simple, qsat2-prop, qsat2-tight, qsat3-disj or dw-cred")
        ->check(CLI::IsMember({"sat-simple", "qsat2-prop", "qsat2-tight", "qsat3-disj", "dw-cred"}))
        ->required();
    gen->add_option("--qbf", gen_qbf, "input QBF (default: random)");
    gen->add_option("--seed", seed, "seed for random inputs");
    gen->add_option("--size", size, "spread of random block sizes")->check(CLI::NonNegativeNumber);
    gen->add_option("--class", gen_class, "dw-cred variant: simple, prop or disj")
        ->check(CLI::IsMember({"simple", "prop", "propositional", "disj", "disjunctive"}));
    gen->add_option("--source-out", gen_src, "write the input QBF here");

    // qbf-eval
    auto* qe = app.add_subcommand("qbf-eval", "evaluate a QBF by expansion");
    std::string qe_in;
    bool external = false;
    qe->add_option("file", qe_in, "QDIMACS, with optional t lines for DNF terms")->required();
    qe->add_flag("--external", external, "use the solver named by RAF_QBF_SOLVER");
    add_caps(qe, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kDone : kUsage;
    }

    try {
        if (*solve) {
            RAF g = parse_raf(slurp(solve_in));
            Semantics sem = semantics_arg(sem_name);
            auto scope = scope_name == "raf" ? MaximalityScope::raf : MaximalityScope::base;
            Caps caps = opt.caps();
            if (task == "cons") {
                bool yes = cons(g, sem, caps, scope);
                std::cout << (yes ? "YES" : "NO") << "\n";
                return yes ? kYes : kNo;
            }
            if (task == "cred") {
                if (query.empty()) throw CLI::RequiredError("--arg");
                g.af.id(query);
                bool yes = cred(g, sem, query, caps, scope);
                std::cout << (yes ? "YES" : "NO") << "\n";
                return yes ? kYes : kNo;
            }
            for (const auto& e : enumerate_extensions(g, sem, caps, scope)) {
                if (fmt == "json") {
                    std::cout << json{{"extension", g.af.names(e.members)}, {"range", g.af.names(e.range)}}.dump() << "\n";
                } else {
                    std::cout << set_text(g.af.names(e.members)) << "\n";
                }
            }
            return kDone;
        }
        if (*enc) {
            RAF g = parse_raf(slurp(enc_in));
            Fragment frag = *parse_fragment(frag_name);
            Graph primal = frag == Fragment::stab ? primal_graph(g.af) : primal_graph(g);
            TreeDecomposition td = td_in.empty()
                                       ? heuristic_td(primal, heur_name == "min-degree" ? Heuristic::min_degree : Heuristic::min_fill)
                                       : parse_pace(slurp(td_in), primal.names);
            Encoding e = encode(frag, g, td);
            std::string out = enc_out.empty() ? enc_in + "." + enc_fmt : enc_out;
            Qbf written = enc_fmt == "qdimacs" ? prenex_cnf(e.qbf) : e.qbf;
            spit(out, enc_fmt == "qdimacs" ? to_qdimacs(written) : to_qcir(written));
            json prov;
            prov["fragment"] = frag_name;
            prov["source_width"] = e.source_width;
            prov["induced_width"] = e.induced_width();
            prov["induced_method"] = e.induced_method;
            prov["construction_width"] = e.construction_width;
            prov["heuristic_width"] = e.heuristic_width;
            json vars = json::array();
            for (int v = 1; v <= e.qbf.num_vars(); ++v) {
                const auto& p = e.provenance[v - 1];
                vars.push_back({{"id", v}, {"name", e.qbf.names[v - 1]}, {"family", p.family}, {"element", p.element},
                                {"node", p.node}});
            }
            // selectors added when the term part is folded into clauses
            for (int v = e.qbf.num_vars() + 1; v <= written.num_vars(); ++v)
                vars.push_back({{"id", v}, {"name", written.names[v - 1]}, {"family", "prenex"}, {"element", ""}, {"node", -1}});
            prov["vars"] = vars;
            spit(out + ".prov.json", prov.dump(1) + "\n");
            std::cout << "c width source=" << e.source_width << " induced=" << e.induced_width() << "\n";
            std::cout << "c formula " << out << "\n";
            std::cout << "c provenance " << out << ".prov.json\n";
            return kDone;
        }
        if (*dec) {
            Graph gr;
            if (is_qbf_path(dec_in)) {
                gr = primal_graph(parse_qdimacs(slurp(dec_in)));
            } else {
                gr = primal_graph(parse_raf(slurp(dec_in)));
            }
            auto td = heuristic_td(gr, dec_heur == "min-degree" ? Heuristic::min_degree : Heuristic::min_fill);
            std::cout << "c width " << validate_td(gr, td) << "\n" << to_pace(td, gr.names);
            return kDone;
        }
        if (*tr) {
            std::string text = slurp(tr_in);
            if (tr_from == "caf") {
                Semantics sem = semantics_arg(tr_sem);
                RAF g = caf_to_raf(parse_caf(text), sem);
                std::cout << "% extensions correspond under " << to_string(caf_target_semantics(sem)) << "\n"
                          << render_raf(g);
                return kDone;
            }
            RAF src = parse_raf(text);
            for (const auto& v : src.formulas)
                if (!v.empty()) throw InputError("expected an AF document without rc lines");
            for (const auto& v : src.rules)
                if (!v.empty()) throw InputError("expected an AF document without rc lines");
            if (tr_from == "af") {
                std::cout << render_raf(af_to_raf(src.af));
            } else {
                std::cout << render_raf(twofold_to_raf(src.af, src.af.to_set(shrink)));
            }
            return kDone;
        }
        if (*gen) {
            std::mt19937_64 rng(seed);
            RcClass cls = kind == "sat-simple"    ? RcClass::simple
                          : kind == "qsat2-prop"  ? RcClass::propositional
                          : kind == "qsat2-tight" ? RcClass::tight
                          : kind == "qsat3-disj"  ? RcClass::disjunctive
                                                  : class_arg(gen_class);
            bool dw = kind == "dw-cred";
            Qbf q;
            if (!gen_qbf.empty()) {
                q = parse_qdimacs(slurp(gen_qbf));
            } else {
                q = dw ? random_cred_input(rng, cls, size) : random_hardness_input(rng, cls, size);
            }
            if (!gen_src.empty()) spit(gen_src, to_qdimacs(q, true, true));
            if (dw) {
                auto ci = cred_hardness_instance(q, cls);
                std::cout << "% query " << ci.query << " scope "
                          << (ci.scope == MaximalityScope::raf ? "raf" : "base") << "\n"
                          << render_raf(ci.raf);
            } else {
                std::cout << render_raf(hardness_instance(q, cls));
            }
            return kDone;
        }
        if (*qe) {
            Qbf q = parse_qdimacs(slurp(qe_in));
            bool v;
            if (external) {
                auto r = external_qbf_verdict(q);
                if (!r) throw InputError("RAF_QBF_SOLVER is unset or gave no verdict");
                v = *r;
            } else {
                v = evaluate_qbf(q, opt.cap_qbf);
            }
            std::cout << (v ? "TRUE" : "FALSE") << "\n";
            return v ? kYes : kNo;
        }
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CapExceeded& e) {
        std::cerr << "cap exceeded: " << e.what() << "\n";
        return kCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kUsage;
}
