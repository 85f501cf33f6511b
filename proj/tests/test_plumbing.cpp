#include <gtest/gtest.h>

#include <random>

#include "montesinos/plumbing.hpp"

using namespace montesinos;

TEST(Plumbing, ParseFormat) {
    auto g = parse_graph("3; 2,2; 2; 2");
    EXPECT_TRUE(g.is_star());
    EXPECT_EQ(g.vertex_count(), 5u);
    EXPECT_EQ(format_graph(g), "3; 2,2; 2; 2");
    EXPECT_EQ(parse_graph(" 3 ;2 , 2;2 ; 2 "), g);
    auto l = parse_graph("2,1,2");
    EXPECT_FALSE(l.is_star());
    EXPECT_EQ(format_graph(l), "2,1,2");
    EXPECT_THROW(parse_graph("3; 2; 2"), std::invalid_argument);
    EXPECT_THROW(parse_graph("3; ; 2; 2"), std::invalid_argument);
    EXPECT_THROW(parse_graph("3; 2; 2; x"), std::invalid_argument);
}

TEST(Plumbing, IntersectionMatrix) {
    auto q = intersection_matrix(parse_graph("3; 2,2; 2; 2"));
    IntMatrix want = {{-3, 1, 0, 1, 1}, {1, -2, 1, 0, 0}, {0, 1, -2, 0, 0}, {1, 0, 0, -2, 0}, {1, 0, 0, 0, -2}};
    EXPECT_EQ(q, want);
}

TEST(Plumbing, DeterminantExamples) {
    EXPECT_EQ(iabs(determinant(parse_graph("4; 3; 3; 3"))), 81);
    EXPECT_EQ(h1_order(parse_graph("3; 2; 2; 2")), 12);
    EXPECT_EQ(h1_order(parse_graph("3; 2,2; 2; 2")), 16);
    EXPECT_EQ(iabs(determinant(parse_graph("3; 2,2; 2; 2"))), 16);
}

TEST(Plumbing, Definiteness) {
    auto l = parse_graph("2,1,2");
    auto minors = leading_minors(intersection_matrix(l));
    EXPECT_EQ(minors, (std::vector<Int>{-2, 1, 0}));
    EXPECT_FALSE(is_negative_definite(l));
    EXPECT_TRUE(is_negative_definite(parse_graph("3; 2,2; 2; 2")));
    EXPECT_TRUE(is_negative_definite(parse_graph("2,2,2")));
}

TEST(Plumbing, Seifert) {
    auto s = seifert_invariants(parse_graph("3; 2,2; 2; 2"));
    SeifertInvariants want{-3, {{3, 2}, {2, 1}, {2, 1}}};
    EXPECT_EQ(s, want);
    EXPECT_EQ(format_seifert(s), "(-3; (3,2); (2,1); (2,1))");
    EXPECT_THROW(seifert_invariants(parse_graph("2,2")), std::invalid_argument);
}

TEST(Plumbing, QuantityIAndWp) {
    EXPECT_EQ(quantity_I(parse_graph("3; 2,2; 2; 2")), -4);
    EXPECT_EQ(quantity_I(parse_graph("3; 2; 2; 2")), -3);
    EXPECT_TRUE(is_in_wp(parse_graph("3; 2; 2; 2")));
    EXPECT_FALSE(is_in_wp(parse_graph("2; 2; 2; 2")));
    EXPECT_FALSE(is_in_wp(parse_graph("3; 3; 3; 2")));
    EXPECT_FALSE(is_in_wp(parse_graph("3; 1; 2; 2")));
    EXPECT_FALSE(is_in_wp(parse_graph("2,2,2")));
}

TEST(Plumbing, Isomorphism) {
    EXPECT_TRUE(isomorphic(parse_graph("3; 2; 2,2; 3"), parse_graph("3; 3; 2; 2,2")));
    EXPECT_FALSE(isomorphic(parse_graph("3; 2; 2,3; 3"), parse_graph("3; 2; 3,2; 3")));
    EXPECT_TRUE(isomorphic(parse_graph("2,3,4"), parse_graph("4,3,2")));
    EXPECT_EQ(format_graph(normalized(parse_graph("4,3,2"))), "2,3,4");
}

TEST(PlumbingProperty, DeterminantMatchesSeifertFormula) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Int> weight(2, 7);
    std::uniform_int_distribution<int> len(1, 4);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::vector<Int>> legs(3);
        for (auto& l : legs) {
            l.resize(static_cast<std::size_t>(len(rng)));
            for (auto& a : l) a = weight(rng);
        }
        auto g = PlumbingGraph::star(weight(rng), legs[0], legs[1], legs[2]);
        ASSERT_LE(g.vertex_count(), 14u);
        Int d = determinant(g);
        EXPECT_EQ(d, tree_determinant(g));
        EXPECT_EQ(iabs(d), h1_order(g));
    }
}

TEST(PlumbingProperty, LinearDeterminantIsContinuant) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<Int> weight(2, 8);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<Int> s(1 + trial % 10);
        for (auto& a : s) a = weight(rng);
        auto g = PlumbingGraph::linear(s);
        EXPECT_EQ(iabs(determinant(g)), continuant(s).first);
        EXPECT_TRUE(is_negative_definite(g));
    }
}
