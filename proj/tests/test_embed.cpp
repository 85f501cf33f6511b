#include <gtest/gtest.h>

#include "montesinos/embed.hpp"
#include "montesinos/harness.hpp"

using namespace montesinos;

namespace {

LatticeVector vec(std::size_t n, std::initializer_list<std::pair<std::size_t, Int>> entries) {
    LatticeVector v(n, 0);
    for (auto [i, c] : entries) v[i - 1] = c;
    return v;
}

// family (a), t = 1, s = 2, b = (2,2)
std::vector<LatticeVector> z9_vectors() {
    return {
        vec(9, {{1, 1}, {2, -1}, {6, -1}, {7, 1}}), vec(9, {{2, 1}, {3, -1}, {5, 1}}), vec(9, {{3, -1}, {5, -1}}),
        vec(9, {{1, 1}, {6, 1}}),                   vec(9, {{6, -1}, {7, -1}, {8, -1}, {9, -1}}),
        vec(9, {{8, -1}, {9, 1}}),                  vec(9, {{7, -1}, {8, 1}}),
        vec(9, {{2, -1}, {1, -1}, {4, 1}}),         vec(9, {{2, 1}, {3, 1}, {4, 1}}),
    };
}

EmbeddingCertificate ordered(const std::vector<LatticeVector>& vs, const std::vector<std::size_t>& perm) {
    EmbeddingCertificate c;
    for (std::size_t i : perm) c.assignment.push_back(vs[i]);
    return c;
}

}  // namespace

TEST(Embed, SingleVertices) {
    auto r2 = find_embedding(parse_graph("2"));
    EXPECT_EQ(r2.verdict, Verdict::not_found);
    EXPECT_FALSE(r2.certificate);
    auto r1 = find_embedding(parse_graph("1"));
    ASSERT_EQ(r1.verdict, Verdict::found);
    EXPECT_EQ(r1.certificate->assignment, (std::vector<LatticeVector>{{1}}));
    EXPECT_FALSE(r1.parallel);
}

TEST(Embed, StandardStar) {
    auto g = parse_graph("3; 2,2; 2; 2");
    auto r = find_embedding(g);
    ASSERT_EQ(r.verdict, Verdict::found);
    EXPECT_TRUE(verify_certificate(g, *r.certificate));
    EXPECT_GT(r.nodes, 0u);
    EXPECT_EQ(find_embedding(parse_graph("3; 2; 2; 2")).verdict, Verdict::not_found);
}

TEST(Embed, ReferenceZ9Certificate) {
    auto g = parse_graph("4; 3,2; 3,3,2,4; 2,2");
    auto vs = z9_vectors();
    auto perm = match_certificate(g, vs);
    ASSERT_TRUE(perm);
    EXPECT_TRUE(verify_certificate(g, ordered(vs, *perm)));

    for (std::size_t i = 0; i < vs.size(); ++i) {
        auto broken = vs;
        for (auto& x : broken[i])
            if (x != 0) {
                x = -x;
                break;
            }
        EXPECT_FALSE(match_certificate(g, broken)) << "flipped vector " << i;
    }
    auto r = find_embedding(g);
    ASSERT_EQ(r.verdict, Verdict::found);
    EXPECT_TRUE(verify_certificate(g, *r.certificate));
}

TEST(Embed, CertificateShapeErrors) {
    EmbeddingCertificate empty;
    EXPECT_TRUE(gram_of(empty).empty());
    EXPECT_THROW(verify_certificate(parse_graph("2"), empty), std::invalid_argument);
    EmbeddingCertificate mixed{{{1, 0}, {1}}};
    EXPECT_THROW(verify_certificate(parse_graph("2,2"), mixed), std::invalid_argument);
}

TEST(Embed, BudgetVerdict) {
    SearchLimits lim;
    lim.node_budget = 1;
    auto r = find_embedding(parse_graph("4; 3,2; 3,3,2,4; 2,2"), lim);
    EXPECT_EQ(r.verdict, Verdict::budget_exhausted);
}

TEST(Embed, ParallelModeAgrees) {
    SearchLimits lim;
    lim.deterministic = false;
    lim.workers = 2;
    for (const char* s : {"3; 2,2; 2; 2", "3; 2; 2; 2", "4; 3,2; 3,3,2,4; 2,2", "4; 3; 3; 3"}) {
        auto g = parse_graph(s);
        auto seq = find_embedding(g);
        auto par = find_embedding(g, lim);
        EXPECT_TRUE(par.parallel) << s;
        EXPECT_EQ(seq.verdict, par.verdict) << s;
        if (par.certificate) {
            EXPECT_TRUE(verify_certificate(g, *par.certificate)) << s;
        }
    }
}

TEST(Embed, DeterministicModeIsStable) {
    auto g = parse_graph("4; 3,2; 3,3,2,4; 2,2");
    auto a = find_embedding(g);
    auto b = find_embedding(g);
    ASSERT_TRUE(a.certificate && b.certificate);
    EXPECT_EQ(a.certificate->assignment, b.certificate->assignment);
    EXPECT_EQ(a.nodes, b.nodes);
}

TEST(Embed, NaiveOracleAgreesUpToSix) {
    for (std::size_t n = 4; n <= 6; ++n)
        for (const auto& g : enumerate_wp_graphs(n)) {
            bool fast = find_embedding(g).verdict == Verdict::found;
            EXPECT_EQ(fast, naive_embeds(g)) << format_graph(g);
        }
}

TEST(Embed, NaiveOracleOnLinearChains) {
    for (const char* s : {"2,2,2", "3,2,2,2", "2", "1", "2,5", "5,2", "4", "2,2"}) {
        auto g = parse_graph(s);
        EXPECT_EQ(find_embedding(g).verdict == Verdict::found, naive_embeds(g)) << s;
    }
}

TEST(Embed, CertificateFormatting) {
    auto g = parse_graph("3; 2,2; 2; 2");
    auto r = find_embedding(g);
    ASSERT_TRUE(r.certificate);
    auto text = format_certificate(g, *r.certificate);
    EXPECT_EQ(text.rfind("graph = 3; 2,2; 2; 2\nn = 5 | shape = star3", 0), 0u);
}
