#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "montesinos/lattice.hpp"

using namespace montesinos;

namespace {

LatticeVector vec(std::size_t n, std::initializer_list<std::pair<std::size_t, Int>> entries) {
    LatticeVector v(n, 0);
    for (auto [i, c] : entries) v[i - 1] = c;
    return v;
}

// 3; 2,2; 2; 2 in Z^5, vertex order center, leg 1 root to leaf, leg 2, leg 3
ConfiguredSet standard5() {
    return make_set(parse_graph("3; 2,2; 2; 2"), {vec(5, {{2, 1}, {3, 1}, {4, 1}}), vec(5, {{1, 1}, {2, -1}}),
                                                   vec(5, {{2, 1}, {3, -1}}), vec(5, {{4, -1}, {5, 1}}),
                                                   vec(5, {{4, -1}, {5, -1}})});
}

ConfiguredSet signed_permutation(const ConfiguredSet& p, std::mt19937& rng) {
    std::vector<std::size_t> perm(p.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Int> sign(p.n);
    for (auto& s : sign) s = rng() % 2 ? 1 : -1;
    auto q = p;
    for (auto& v : q.vectors) {
        LatticeVector w(p.n);
        for (std::size_t i = 0; i < p.n; ++i) w[perm[i]] = sign[i] * v[i];
        v = w;
    }
    return q;
}

}  // namespace

TEST(Lattice, Pairing) {
    auto a = vec(3, {{1, 1}, {2, -1}});
    auto b = vec(3, {{2, 1}, {3, -1}});
    EXPECT_EQ(pairing(a, b), 1);
    EXPECT_EQ(norm(a), 2);
    EXPECT_EQ(norm(vec(3, {{1, 1}, {2, 1}, {3, 1}})), 3);
}

TEST(Lattice, StandardSetRealizesGraph) {
    auto p = standard5();
    auto g = parse_graph("3; 2,2; 2; 2");
    IntMatrix q = intersection_matrix(g);
    IntMatrix gm = gram(p.vectors);
    EXPECT_EQ(gm, q);
    EXPECT_EQ(graph_of(p), g);
    EXPECT_EQ(quantity_I(p), -4);
}

TEST(Lattice, Stats) {
    auto p = standard5();
    auto st = stats(p);
    ASSERT_EQ(st.E.size(), 5u);
    EXPECT_EQ(st.E[0], (std::vector<std::size_t>{1}));
    EXPECT_EQ(st.E[4], (std::vector<std::size_t>{3, 4}));
    EXPECT_EQ(p.roles[3], (Role{2, 1}));
    EXPECT_EQ(p.roles[4], (Role{3, 1}));
    EXPECT_EQ(st.p[1], 1u);
    EXPECT_EQ(st.p[2], 2u);
    EXPECT_EQ(st.p[3], 2u);
    EXPECT_EQ(st.components, 1u);
    EXPECT_TRUE(p_inequality_holds(p));
}

TEST(Lattice, GoodAndStandard) {
    auto p = standard5();
    EXPECT_TRUE(is_irreducible(p));
    EXPECT_TRUE(is_good(p));
    EXPECT_TRUE(is_standard(p));
    auto bad = p;
    bad.vectors[2] = vec(5, {{3, 1}, {1, -1}});
    EXPECT_FALSE(is_standard(bad));
}

TEST(Lattice, FormatParseRoundTrip) {
    auto p = standard5();
    auto text = format_set(p);
    EXPECT_EQ(text.substr(0, text.find('\n')), "n = 5 | shape = star3 | roles = 0:0,1:1,1:2,2:1,3:1");
    EXPECT_EQ(parse_set(text), p);
    EXPECT_THROW(parse_set(""), std::invalid_argument);
    EXPECT_THROW(parse_set("n = 2 | shape = linear\n1,0\n"), std::invalid_argument);
}

TEST(Lattice, PlainContraction) {
    auto p = standard5();
    auto q = contract(p, 4, 3);
    EXPECT_EQ(q.n, 4u);
    EXPECT_EQ(q.size(), 4u);
    EXPECT_EQ(q.shape, SetShape::linear);
    auto g = normalized(graph_of(q));
    EXPECT_EQ(format_graph(g), "1,3,2,2");
    EXPECT_THROW(contract(p, 0, 1), std::invalid_argument);
    EXPECT_THROW(contract(p, 4, 0), std::invalid_argument);
}

TEST(Lattice, ContractionKeepsUntouchedPairings) {
    auto p = standard5();
    for (std::size_t h = 0; h < p.n; ++h) {
        auto eh = E_of(p, h);
        if (eh.size() != 2) continue;
        auto q = contract(p, h, eh[0]);
        std::vector<LatticeVector> before, after;
        for (std::size_t v = 0; v < p.size(); ++v)
            if (v != eh[0] && v != eh[1]) before.push_back(p.vectors[v]);
        for (const auto& v : before) {
            auto w = project_out(v, h);
            EXPECT_NE(std::find(q.vectors.begin(), q.vectors.end(), w), q.vectors.end());
            after.push_back(w);
        }
        EXPECT_EQ(gram(before), gram(after));
    }
}

TEST(Lattice, ComplementaryContraction) {
    // d; b, c, a; f; g with E_4 = {d, a} and v_0 sharing e_5 with f
    std::size_t n = 6;
    auto d = vec(n, {{1, -1}, {2, -1}, {4, 1}, {5, 1}});
    auto b = vec(n, {{2, 1}, {3, -1}});
    auto c = vec(n, {{1, 1}, {2, -1}});
    auto a = vec(n, {{2, 1}, {3, 1}, {4, 1}});
    auto f = vec(n, {{5, -1}, {6, -1}});
    auto g = vec(n, {{5, -1}, {6, 1}});
    auto p = make_set(parse_graph("4; 2,2,3; 2; 2"), {d, b, c, a, f, g});
    IntMatrix gm = gram(p.vectors);
    ASSERT_EQ(gm, intersection_matrix(graph_of(p)));
    ASSERT_TRUE(has_complementary_legs(p));
    EXPECT_EQ(quantity_I(p), -3);

    auto q = contract_complementary(p, 3, 1);
    EXPECT_EQ(q.n, 5u);
    ASSERT_EQ(q.shape, SetShape::star3);
    EXPECT_EQ(normalized(graph_of(q)), normalized(parse_graph("3; 2,2; 2; 2")));
    EXPECT_TRUE(is_standard(q));
    EXPECT_EQ(quantity_I(q), -4);

    EXPECT_THROW(contract_complementary(p, 1, 1), std::invalid_argument);
    EXPECT_THROW(contract_complementary(p, 3, 2), std::invalid_argument);
    EXPECT_THROW(contract_complementary(standard5(), 4, 1), std::invalid_argument);
}

TEST(Lattice, ComplementaryLegsSupport) {
    auto p = standard5();
    ASSERT_TRUE(has_complementary_legs(p));
    auto g = graph_of(p);
    std::vector<std::size_t> legs23;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (p.roles[v].leg == 2 || p.roles[v].leg == 3) legs23.push_back(v);
    EXPECT_EQ(support(p, legs23).size(), g.legs[1].size() + g.legs[2].size());
    Int I23 = 0;
    for (std::size_t v : legs23) I23 += norm(p.vectors[v]) - 3;
    EXPECT_EQ(I23, -2);
}

TEST(Lattice, FinalExpansionGrowsLiscaChain) {
    auto p = make_set(parse_graph("2,2,2"), {vec(3, {{1, 1}, {2, -1}}), vec(3, {{2, 1}, {3, -1}}), vec(3, {{1, -1}, {2, -1}})});
    auto q = expand_final_minus2(p, Side::right);
    EXPECT_EQ(q.n, 4u);
    EXPECT_EQ(q.shape, SetShape::linear);
    EXPECT_EQ(format_graph(normalized(graph_of(q))), "2,2,2,3");
    IntMatrix gm = gram(q.vectors);
    EXPECT_EQ(gm, intersection_matrix(graph_of(q)));
    EXPECT_EQ(quantity_I(q), quantity_I(p));

    auto r = expand_final_minus2(p, Side::left);
    EXPECT_EQ(format_graph(normalized(graph_of(r))), "2,2,2,3");
    EXPECT_THROW(expand_final_minus2(standard5(), Side::right), std::invalid_argument);
}

TEST(Lattice, ExpansionThenContractionRestores) {
    auto p = make_set(parse_graph("2,2,2"), {vec(3, {{1, 1}, {2, -1}}), vec(3, {{2, 1}, {3, -1}}), vec(3, {{1, -1}, {2, -1}})});
    auto q = expand_final_minus2(p, Side::right);
    auto ek = E_of(q, 3);
    ASSERT_EQ(ek.size(), 2u);
    std::size_t old_final = norm(q.vectors[ek[0]]) == 3 ? ek[0] : ek[1];
    auto back = contract(q, 3, old_final);
    EXPECT_EQ(canonicalize(back), canonicalize(derive_roles(3, p.vectors)));
}

TEST(Lattice, LinearBadComponent) {
    // h k l i j, then two private coordinates for v*
    std::size_t n = 7;
    const std::size_t h = 1, k = 2, l = 3, i = 4, j = 5;
    std::vector<LatticeVector> vs = {
        vec(n, {{h, -1}, {k, 1}, {l, -1}}), vec(n, {{i, 1}, {j, -1}, {h, 1}}), vec(n, {{j, 1}, {6, 1}, {7, 1}}),
        vec(n, {{i, -1}, {j, -1}}),         vec(n, {{i, 1}, {h, -1}, {k, -1}}), vec(n, {{k, 1}, {l, 1}}),
    };
    auto p = derive_roles(n, vs);
    ASSERT_EQ(p.shape, SetShape::linear);
    auto bad = find_bad_components(p);
    ASSERT_EQ(bad.size(), 1u);
    EXPECT_EQ(bad[0].kind, BadKind::linear);
    EXPECT_EQ(bad[0].members.size(), 6u);
    EXPECT_EQ(p.vectors[bad[0].v_star], vs[2]);
    EXPECT_EQ(linear_bad_count(p), 1u);

    std::vector<LatticeVector> seed = {vec(4, {{1, 1}, {2, -1}}), vec(4, {{2, 1}, {3, 1}, {4, 1}}), vec(4, {{1, -1}, {2, -1}})};
    auto s = derive_roles(4, seed);
    ASSERT_EQ(linear_bad_count(s), 1u);
    EXPECT_EQ(s.vectors[find_bad_components(s)[0].v_star], seed[1]);

    EXPECT_TRUE(find_bad_components(standard5()).empty());
}

TEST(Lattice, DeriveRolesRecoversShape) {
    auto p = standard5();
    std::vector<LatticeVector> shuffled = p.vectors;
    std::reverse(shuffled.begin(), shuffled.end());
    auto q = derive_roles(5, shuffled);
    EXPECT_EQ(q.shape, SetShape::star3);
    EXPECT_EQ(normalized(graph_of(q)), normalized(graph_of(p)));
    EXPECT_EQ(canonicalize(q), canonicalize(p));
}

TEST(Lattice, CanonicalizeInvariantUnderSignedPermutations) {
    std::mt19937 rng(7);
    auto p = standard5();
    auto c = canonicalize(p);
    for (int it = 0; it < 200; ++it) {
        auto q = signed_permutation(p, rng);
        EXPECT_EQ(gram(q.vectors), gram(p.vectors));
        EXPECT_EQ(canonicalize(q), c);
    }
    auto twisted = p;
    twisted.vectors[2] = vec(5, {{2, 1}, {1, -1}});
    EXPECT_NE(canonicalize(twisted), c);
}

TEST(Lattice, ChainContractionStaysLinear) {
    // random chains e_1 - e_2, e_2 - e_3, ...: every interior coordinate contracts
    std::mt19937 rng(11);
    for (int it = 0; it < 100; ++it) {
        std::size_t m = 3 + rng() % 6;
        std::vector<LatticeVector> vs;
        for (std::size_t s = 0; s < m; ++s) vs.push_back(vec(m + 1, {{s + 1, 1}, {s + 2, -1}}));
        auto p = derive_roles(m + 1, vs);
        auto q = signed_permutation(p, rng);
        for (std::size_t h = 0; h < q.n; ++h) {
            auto eh = E_of(q, h);
            if (eh.size() != 2) continue;
            auto r = contract(q, h, eh[1]);
            EXPECT_EQ(r.size(), q.size() - 1);
            EXPECT_EQ(r.shape, SetShape::linear);
        }
    }
}
