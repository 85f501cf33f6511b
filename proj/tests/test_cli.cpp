#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include "montesinos/contfrac.hpp"
#include "montesinos/families.hpp"
#include "montesinos/harness.hpp"
#include "montesinos/plumbing.hpp"

using namespace montesinos;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args) {
    std::string cmd = std::string(CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), got);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

}  // namespace

TEST(Cli, AnalyzeMatchesLibrary) {
    auto r = run("analyze \"3; 2,2; 2; 2\"");
    ASSERT_EQ(r.status, 0);
    auto g = parse_graph("3; 2,2; 2; 2");
    std::string want = "graph = 3; 2,2; 2; 2\nn = 5\nI = -4\ndet = " + std::to_string(determinant(g)) +
                       "\nh1 = 16\nseifert = " + format_seifert(seifert_invariants(g)) +
                       "\nnegative_definite = yes\nin_wp = yes\nlink_components = " +
                       std::to_string(link_component_count(g)) + "\n";
    EXPECT_EQ(r.out, want);
}

TEST(Cli, AnalyzeLinear) {
    auto r = run("analyze 2,2,2");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("in_wp = no\n"), std::string::npos);
    EXPECT_EQ(r.out.find("seifert"), std::string::npos);
}

TEST(Cli, Complement) {
    auto r = run("complement 3,2,4");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "complement = 2,4,2,2\n");
    EXPECT_EQ(run("complement 3,1").status, 2);
}

TEST(Cli, EmbedVerdicts) {
    auto no = run("embed 2");
    EXPECT_EQ(no.status, 1);
    EXPECT_NE(no.out.find("result = NOT-EMBEDDABLE\n"), std::string::npos);

    auto yes = run("embed \"3; 2,2; 2; 2\"");
    EXPECT_EQ(yes.status, 0);
    EXPECT_NE(yes.out.find("mode = deterministic\n"), std::string::npos);
    EXPECT_NE(yes.out.find("result = EMBEDDABLE\n"), std::string::npos);
    EXPECT_NE(yes.out.find("v4 = "), std::string::npos);
    EXPECT_EQ(yes.out, run("embed \"3; 2,2; 2; 2\"").out);

    auto par = run("embed \"3; 2,2; 2; 2\" --parallel");
    EXPECT_EQ(par.status, 0);
    EXPECT_NE(par.out.find("mode = parallel\n"), std::string::npos);

    auto bud = run("embed \"4; 3,2; 3,3,2,4; 2,2\" --nodes 1");
    EXPECT_EQ(bud.status, 3);
    EXPECT_NE(bud.out.find("result = BUDGET\n"), std::string::npos);

    EXPECT_EQ(run("embed \"3; 2,2; 2; 2\" --max-coord 1").status, 0);
}

TEST(Cli, InputErrors) {
    EXPECT_EQ(run("analyze \"3; 2; x; 2\"").status, 2);
    EXPECT_EQ(run("analyze").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    EXPECT_EQ(run("embed 2 --bogus").status, 2);
    EXPECT_EQ(run("enumerate --n 3").status, 2);
    EXPECT_EQ(run("").status, 2);
}

TEST(Cli, Classify) {
    auto r = run("classify \"3; 2,2; 2; 2\"");
    EXPECT_EQ(r.status, 0);
    std::string want = "graph = 3; 2,2; 2; 2\nmatches = " + std::to_string(classify(parse_graph("3; 2,2; 2; 2")).size()) + "\n";
    EXPECT_EQ(r.out.substr(0, want.size()), want);
    EXPECT_NE(r.out.find("family = thm_cl:1:-4:b=2,c=2,L2=2,L3=2\n"), std::string::npos);
    EXPECT_EQ(run("classify \"3; 2; 2; 2\"").status, 1);
}

TEST(Cli, Collapse) {
    auto r = run("collapse 2 2");
    EXPECT_EQ(r.status, 0);
    EXPECT_EQ(r.out, "L : ((2),(2)) -> ((),(1))\nR : ((),(1)) -> ((),())\nsteps = 2\ncollapsed = yes\n");
    auto s = run("collapse 3 3");
    EXPECT_EQ(s.status, 1);
    EXPECT_EQ(s.out, "steps = 0\ncollapsed = no\nterminal = (3),(3)\n");
}

TEST(Cli, RibbonCheck) {
    auto r = run("ribbon-check \"3; 2,2; 2; 2\"");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("lens_string = 2,2,2\n"), std::string::npos);
    EXPECT_NE(r.out.find("in_lisca_list = yes\n"), std::string::npos);
    EXPECT_EQ(run("ribbon-check \"3; 2; 3; 3\"").status, 2);
}

TEST(Cli, Enumerate) {
    auto r = run("enumerate --n 4");
    EXPECT_EQ(r.status, 0);
    std::string want = "n = 4\ncount = 3\n";
    for (const auto& g : enumerate_wp_graphs(4)) want += "graph = " + format_graph(g) + "\n";
    EXPECT_EQ(r.out, want);
}

TEST(Cli, Verify) {
    auto r = run("verify --n-max 5");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("n = 4\ngraphs = 3\nembeddable = 0\n"), std::string::npos);
    EXPECT_NE(r.out.find("graph = 3; 2; 2; 2,2 | I = -4 | det = "), std::string::npos);
    EXPECT_NE(r.out.find("p_violations = 0\n"), std::string::npos);
}

TEST(Cli, Families) {
    auto r = run("families --max-n 6");
    EXPECT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("family = thm_cl:1:-4:b=2,c=2,L2=2,L3=2 | graph = 3; 2,2; 2; 2 | I = -4 | embeddable = yes | ok = yes\n"),
              std::string::npos);
    EXPECT_NE(r.out.find("failures = 0\n"), std::string::npos);
}
