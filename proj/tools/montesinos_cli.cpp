#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "montesinos/contfrac.hpp"
#include "montesinos/embed.hpp"
#include "montesinos/families.hpp"
#include "montesinos/harness.hpp"
#include "montesinos/kirby.hpp"
#include "montesinos/plumbing.hpp"

using namespace montesinos;

namespace {

enum Exit { ok = 0, negative = 1, input_error = 2, budget = 3 };

void kv(const std::string& k, const std::string& v) { std::cout << k << " = " << v << "\n"; }
void kv(const std::string& k, Int v) { kv(k, std::to_string(v)); }
std::string yesno(bool b) { return b ? "yes" : "no"; }

int analyze(const std::string& text) {
    auto g = parse_graph(text);
    kv("graph", format_graph(g));
    kv("n", static_cast<Int>(g.vertex_count()));
    kv("I", quantity_I(g));
    Int det = determinant(g);
    kv("det", det);
    kv("h1", iabs(det));
    if (g.is_star()) kv("seifert", format_seifert(seifert_invariants(g)));
    kv("negative_definite", yesno(is_negative_definite(g)));
    kv("in_wp", yesno(is_in_wp(g)));
    kv("link_components", link_component_count(g));
    return ok;
}

int embed(const std::string& text, Int max_coord, std::uint64_t nodes, bool parallel) {
    auto g = parse_graph(text);
    SearchLimits lim;
    lim.max_abs_coordinate = max_coord;
    if (nodes) lim.node_budget = nodes;
    lim.deterministic = !parallel;
    auto res = find_embedding(g, lim);
    kv("graph", format_graph(g));
    kv("mode", res.parallel ? "parallel" : "deterministic");
    kv("nodes", static_cast<Int>(res.nodes));
    if (res.verdict == Verdict::found) {
        kv("result", "EMBEDDABLE");
        const auto& vs = res.certificate->assignment;
        for (std::size_t i = 0; i < vs.size(); ++i) kv("v" + std::to_string(i), join(vs[i], ","));
        return ok;
    }
    if (res.verdict == Verdict::not_found) {
        kv("result", "NOT-EMBEDDABLE");
        return negative;
    }
    kv("result", "BUDGET");
    return budget;
}

int classify_cmd(const std::string& text) {
    auto g = parse_graph(text);
    auto fams = classify(g);
    kv("graph", format_graph(g));
    kv("matches", static_cast<Int>(fams.size()));
    for (const auto& d : fams) kv("family", format_descriptor(d));
    return fams.empty() ? negative : ok;
}

int collapse_cmd(const std::string& a, const std::string& b) {
    auto tr = complementary_collapse(parse_string(a), parse_string(b));
    std::cout << format_trace(tr);
    kv("steps", static_cast<Int>(tr.step_count()));
    kv("collapsed", yesno(tr.collapsed));
    if (!tr.collapsed) kv("terminal", "(" + join(tr.terminal.first, ",") + "),(" + join(tr.terminal.second, ",") + ")");
    return tr.collapsed ? ok : negative;
}

int ribbon_cmd(const std::string& text) {
    auto g = parse_graph(text);
    auto r = ribbon_reduction_cl(g);
    kv("graph", format_graph(g));
    kv("lens_string", join(r.lens_string, ","));
    kv("in_lisca_list", yesno(r.in_lisca_list));
    for (const auto& d : r.matches) kv("match", format_descriptor(d));
    kv("link_components", r.euler.components);
    kv("surface", r.euler.surface);
    return r.in_lisca_list ? ok : negative;
}

int enumerate_cmd(std::size_t n) {
    auto gs = enumerate_wp_graphs(n);
    kv("n", static_cast<Int>(n));
    kv("count", static_cast<Int>(gs.size()));
    for (const auto& g : gs) kv("graph", format_graph(g));
    return ok;
}

int verify_cmd(std::size_t n_max, bool parallel) {
    ClassificationOptions opt;
    opt.limits.deterministic = !parallel;
    int status = ok;
    for (std::size_t n = 4; n <= n_max; ++n) {
        auto rep = verify_classification(n, opt);
        for (const auto& v : rep.graphs) {
            if (v.verdict == Verdict::budget_exhausted) status = budget;
            if (v.verdict == Verdict::found) std::cout << report_line(v) << "\n";
        }
        kv("n", static_cast<Int>(n));
        kv("graphs", static_cast<Int>(rep.graphs.size()));
        kv("embeddable", static_cast<Int>(rep.embeddable));
        for (const auto& c : rep.good_classes) kv("good_class", c.graph + " | I = " + std::to_string(c.I));
        kv("p_violations", static_cast<Int>(rep.p_violations));
        kv("seconds", std::to_string(rep.seconds));
        for (const auto& f : rep.failures) std::cerr << "FAIL " << f << "\n";
        if (!rep.ok() && status == ok) status = negative;
    }
    return status;
}

int families_cmd(std::size_t max_n) {
    auto rep = verify_families(max_n);
    for (const auto& c : rep.checks)
        std::cout << "family = " << format_descriptor(c.descriptor) << " | graph = " << format_graph(c.graph)
                  << " | I = " << quantity_I(c.graph) << " | embeddable = " << yesno(c.verdict == Verdict::found)
                  << " | ok = " << yesno(c.ok()) << "\n";
    kv("instances", static_cast<Int>(rep.checks.size()));
    kv("failures", static_cast<Int>(rep.failures.size()));
    kv("seconds", std::to_string(rep.seconds));
    for (const auto& f : rep.failures) std::cerr << "FAIL " << f << "\n";
    return rep.ok() ? ok : negative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice embeddings of Montesinos plumbing graphs"};
    app.require_subcommand(1);

    std::string graph, s1, s2;
    Int max_coord = 0;
    std::uint64_t nodes = 0;
    std::size_t n = 4;
    bool parallel = false;

    auto* an = app.add_subcommand("analyze", "invariants of a plumbing graph");
    an->add_option("graph", graph)->required();
    auto* em = app.add_subcommand("embed", "search for a lattice embedding");
    em->add_option("graph", graph)->required();
    em->add_option("--max-coord", max_coord, "bound on |coordinate|");
    em->add_option("--nodes", nodes, "node budget");
    em->add_flag("--parallel", parallel, "worker-pool search");
    auto* co = app.add_subcommand("complement", "point-rule complement");
    co->add_option("string", s1)->required();
    auto* cl = app.add_subcommand("classify", "matching family descriptors");
    cl->add_option("graph", graph)->required();
    auto* cp = app.add_subcommand("collapse", "complementary collapse trace");
    cp->add_option("s1", s1)->required();
    cp->add_option("s2", s2)->required();
    auto* rb = app.add_subcommand("ribbon-check", "lens-space reduction for complementary legs");
    rb->add_option("graph", graph)->required();
    auto* en = app.add_subcommand("enumerate", "wp graphs with n vertices");
    en->add_option("--n", n)->required();
    auto* ve = app.add_subcommand("verify", "classification sweep");
    ve->add_option("--n-max", n)->required();
    ve->add_flag("--parallel", parallel);
    auto* fa = app.add_subcommand("families", "family soundness sweep");
    fa->add_option("--max-n", n)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return input_error;
    }

    try {
        if (*an) return analyze(graph);
        if (*em) return embed(graph, max_coord, nodes, parallel);
        if (*co) {
            kv("complement", format_string(point_rule_complement(parse_string(s1))));
            return ok;
        }
        if (*cl) return classify_cmd(graph);
        if (*cp) return collapse_cmd(s1, s2);
        if (*rb) return ribbon_cmd(graph);
        if (*en) return enumerate_cmd(n);
        if (*ve) return verify_cmd(n, parallel);
        if (*fa) return families_cmd(n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return input_error;
    }
    return input_error;
}
