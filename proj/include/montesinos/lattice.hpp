#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "arith.hpp"
#include "plumbing.hpp"

namespace montesinos {

using LatticeVector = std::vector<Int>;

// Pairing of the standard negative diagonal lattice: e_i . e_j = -delta_ij.
inline Int pairing(const LatticeVector& v, const LatticeVector& w) {
    if (v.size() != w.size()) throw std::invalid_argument("pairing of vectors of different length");
    Int s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) s = checked_add(s, checked_mul(v[i], w[i]));
    return -s;
}

inline Int norm(const LatticeVector& v) { return -pairing(v, v); }

inline LatticeVector basis_vector(std::size_t n, std::size_t i, Int c = 1) {
    LatticeVector v(n, 0);
    v.at(i) = c;
    return v;
}

enum class SetShape { linear, star3, unstructured };

// leg 0 is the center; legs 1..3 count positions from 1 at the root.
struct Role {
    int leg = 1;
    int pos = 1;
    friend bool operator==(const Role&, const Role&) = default;
    friend auto operator<=>(const Role&, const Role&) = default;
};

struct ConfiguredSet {
    std::size_t n = 0;
    std::vector<LatticeVector> vectors;
    SetShape shape = SetShape::unstructured;
    std::vector<Role> roles;

    std::size_t size() const { return vectors.size(); }

    std::optional<std::size_t> index_of(Role r) const {
        for (std::size_t i = 0; i < roles.size(); ++i)
            if (roles[i] == r) return i;
        return std::nullopt;
    }

    std::size_t leg_length(int leg) const {
        std::size_t c = 0;
        for (const auto& r : roles)
            if (r.leg == leg) ++c;
        return c;
    }

    friend bool operator==(const ConfiguredSet&, const ConfiguredSet&) = default;
};

inline std::vector<Role> roles_for(const PlumbingGraph& g) {
    std::vector<Role> roles;
    if (g.is_star()) roles.push_back({0, 0});
    for (std::size_t l = 0; l < g.legs.size(); ++l)
        for (std::size_t s = 0; s < g.legs[l].size(); ++s)
            roles.push_back({static_cast<int>(l) + 1, static_cast<int>(s) + 1});
    return roles;
}

// Vectors listed in the plumbing vertex order (center, leg 1, leg 2, leg 3).
inline ConfiguredSet make_set(const PlumbingGraph& g, std::vector<LatticeVector> vectors) {
    if (vectors.size() != g.vertex_count()) throw std::invalid_argument("vector count differs from vertex count");
    ConfiguredSet p;
    p.n = vectors.empty() ? 0 : vectors[0].size();
    for (const auto& v : vectors)
        if (v.size() != p.n) throw std::invalid_argument("vectors of mixed dimension");
    p.vectors = std::move(vectors);
    p.shape = g.is_star() ? SetShape::star3 : SetShape::linear;
    p.roles = roles_for(g);
    return p;
}

inline IntMatrix gram(const std::vector<LatticeVector>& vs) {
    IntMatrix g(vs.size(), std::vector<Int>(vs.size()));
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j) g[i][j] = pairing(vs[i], vs[j]);
    return g;
}

inline bool roles_adjacent(Role a, Role b) {
    if (a.leg == 0 && b.leg != 0) return b.pos == 1;
    if (b.leg == 0 && a.leg != 0) return a.pos == 1;
    return a.leg == b.leg && (a.pos - b.pos == 1 || b.pos - a.pos == 1);
}

// Weighted graph read off the roles (every role-adjacent pair joined).
inline PlumbingGraph graph_of(const ConfiguredSet& p) {
    if (p.shape == SetShape::unstructured) throw std::invalid_argument("set has no plumbing shape");
    std::vector<std::vector<Int>> legs(p.shape == SetShape::star3 ? 3 : 1);
    Int central = 0;
    std::vector<std::pair<Role, Int>> items;
    for (std::size_t i = 0; i < p.size(); ++i) items.emplace_back(p.roles[i], norm(p.vectors[i]));
    std::sort(items.begin(), items.end());
    for (auto& [r, a] : items) {
        if (r.leg == 0)
            central = a;
        else
            legs.at(static_cast<std::size_t>(r.leg - 1)).push_back(a);
    }
    if (p.shape == SetShape::star3) return PlumbingGraph::star(central, legs[0], legs[1], legs[2]);
    return PlumbingGraph::linear(legs[0]);
}

inline Int quantity_I(const ConfiguredSet& p) {
    Int s = 0;
    for (const auto& v : p.vectors) s = checked_add(s, norm(v) - 3);
    return s;
}

struct SetStats {
    std::vector<std::vector<std::size_t>> E;  // E[i]: vectors with nonzero i-th coordinate
    std::vector<std::size_t> p;               // p[j] = #{i : |E_i| = j}
    std::size_t components = 0;               // c(P)
};

inline std::vector<std::size_t> component_labels(const std::vector<LatticeVector>& vs) {
    std::size_t m = vs.size();
    std::vector<std::size_t> label(m, m);
    std::size_t next = 0;
    for (std::size_t s = 0; s < m; ++s) {
        if (label[s] != m) continue;
        std::vector<std::size_t> stack{s};
        label[s] = next;
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w = 0; w < m; ++w)
                if (label[w] == m && pairing(vs[v], vs[w]) != 0) {
                    label[w] = next;
                    stack.push_back(w);
                }
        }
        ++next;
    }
    return label;
}

inline SetStats stats(const ConfiguredSet& p) {
    SetStats st;
    st.E.assign(p.n, {});
    for (std::size_t v = 0; v < p.size(); ++v)
        for (std::size_t i = 0; i < p.n; ++i)
            if (p.vectors[v][i] != 0) st.E[i].push_back(v);
    st.p.assign(p.size() + 1, 0);
    for (const auto& e : st.E) ++st.p[e.size()];
    auto labels = component_labels(p.vectors);
    st.components = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    return st;
}

inline std::vector<std::size_t> support(const ConfiguredSet& p, const std::vector<std::size_t>& subset) {
    std::set<std::size_t> s;
    for (std::size_t v : subset)
        for (std::size_t i = 0; i < p.n; ++i)
            if (p.vectors.at(v)[i] != 0) s.insert(i);
    return {s.begin(), s.end()};
}

inline bool p_inequality_holds(const ConfiguredSet& p) {
    auto st = stats(p);
    auto at = [&](std::size_t j) -> Int { return j < st.p.size() ? static_cast<Int>(st.p[j]) : 0; };
    Int lhs = 2 * at(1) + at(2);
    Int rhs = 0;
    for (std::size_t j = 4; j < st.p.size(); ++j) rhs += static_cast<Int>(j - 3) * at(j);
    return lhs > rhs;
}

inline bool linked(const LatticeVector& v, const LatticeVector& w) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0 && w[i] != 0) return true;
    return false;
}

inline bool is_irreducible(const ConfiguredSet& p) {
    std::size_t m = p.size();
    if (m == 0) return true;
    std::vector<bool> seen(m, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w = 0; w < m; ++w)
            if (!seen[w] && linked(p.vectors[v], p.vectors[w])) {
                seen[w] = true;
                ++count;
                stack.push_back(w);
            }
    }
    return count == m;
}

// Products allowed by the incidence shapes: 0 or 1 on role edges, 0 elsewhere.
inline bool matches_shape(const ConfiguredSet& p) {
    if (p.shape == SetShape::unstructured) return false;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            Int x = pairing(p.vectors[i], p.vectors[j]);
            if (roles_adjacent(p.roles[i], p.roles[j])) {
                if (x != 0 && x != 1) return false;
            } else if (x != 0) {
                return false;
            }
        }
    return true;
}

inline bool weight_bounds_hold(const ConfiguredSet& p) {
    for (std::size_t i = 0; i < p.size(); ++i) {
        Int a = norm(p.vectors[i]);
        if (a < (p.roles[i].leg == 0 ? 3 : 2)) return false;
    }
    return true;
}

inline bool is_good(const ConfiguredSet& p) {
    return p.size() == p.n && p.shape != SetShape::unstructured && is_irreducible(p) && matches_shape(p) &&
           weight_bounds_hold(p);
}

inline bool all_gammas_one(const ConfiguredSet& p) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (roles_adjacent(p.roles[i], p.roles[j]) && pairing(p.vectors[i], p.vectors[j]) != 1) return false;
    return true;
}

inline bool is_standard(const ConfiguredSet& p) { return is_good(p) && all_gammas_one(p); }

namespace detail {

inline std::vector<std::vector<std::size_t>> incidence_adjacency(const std::vector<LatticeVector>& vs) {
    std::vector<std::vector<std::size_t>> adj(vs.size());
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            if (pairing(vs[i], vs[j]) != 0) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    return adj;
}

// Walk a path starting at `start` away from `from`.
inline std::vector<std::size_t> walk(const std::vector<std::vector<std::size_t>>& adj, std::size_t start, std::size_t from) {
    std::vector<std::size_t> out{start};
    std::size_t prev = from, cur = start;
    while (true) {
        std::size_t nxt = adj.size();
        for (std::size_t w : adj[cur])
            if (w != prev) nxt = w;
        if (nxt == adj.size() || adj[cur].size() > 2) break;
        out.push_back(nxt);
        prev = cur;
        cur = nxt;
    }
    return out;
}

inline std::vector<Int> weights_along(const std::vector<LatticeVector>& vs, const std::vector<std::size_t>& idx) {
    std::vector<Int> w;
    for (std::size_t i : idx) w.push_back(norm(vs[i]));
    return w;
}

inline std::vector<Int> flatten(const std::vector<LatticeVector>& vs, const std::vector<std::size_t>& idx) {
    std::vector<Int> out;
    for (std::size_t i : idx) out.insert(out.end(), vs[i].begin(), vs[i].end());
    return out;
}

// Orders a path so that its weight sequence (then coordinates) is lexicographically smaller.
inline std::vector<std::size_t> oriented(const std::vector<LatticeVector>& vs, std::vector<std::size_t> path) {
    auto rev = path;
    std::reverse(rev.begin(), rev.end());
    auto key = [&](const std::vector<std::size_t>& p) { return std::make_pair(weights_along(vs, p), flatten(vs, p)); };
    return key(rev) < key(path) ? rev : path;
}

}  // namespace detail

// Rebuilds roles from the incidence graph (pairings != 0). A single
// trivalent vertex becomes the center; legs are ordered by weight string.
// Extra path components are appended to the end of the first leg (γ = 0 joint).
inline ConfiguredSet derive_roles(std::size_t n, std::vector<LatticeVector> vs) {
    ConfiguredSet out;
    out.n = n;
    auto adj = detail::incidence_adjacency(vs);
    std::size_t m = vs.size();
    auto labels = component_labels(vs);
    std::size_t ncomp = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;

    std::vector<std::size_t> trivalent;
    bool tree_like = true;
    std::size_t edge_count = 0;
    for (std::size_t v = 0; v < m; ++v) {
        edge_count += adj[v].size();
        if (adj[v].size() == 3) trivalent.push_back(v);
        if (adj[v].size() > 3) tree_like = false;
    }
    edge_count /= 2;
    if (edge_count + ncomp != m) tree_like = false;  // a cycle somewhere
    if (!tree_like || trivalent.size() > 1) {
        out.vectors = std::move(vs);
        out.shape = SetShape::unstructured;
        for (std::size_t i = 0; i < out.vectors.size(); ++i) out.roles.push_back({1, static_cast<int>(i) + 1});
        return out;
    }

    // path components other than the trivalent one, each oriented and sorted
    std::vector<std::vector<std::size_t>> paths;
    std::vector<bool> used(m, false);
    if (!trivalent.empty()) {
        for (std::size_t v = 0; v < m; ++v)
            if (labels[v] == labels[trivalent[0]]) used[v] = true;
    }
    for (std::size_t v = 0; v < m; ++v) {
        if (used[v] || adj[v].size() > 1) continue;
        auto path = detail::walk(adj, v, m);
        for (std::size_t w : path) used[w] = true;
        paths.push_back(detail::oriented(vs, path));
    }
    std::sort(paths.begin(), paths.end(), [&](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return std::make_pair(detail::weights_along(vs, a), detail::flatten(vs, a)) <
               std::make_pair(detail::weights_along(vs, b), detail::flatten(vs, b));
    });

    std::vector<std::size_t> order;
    if (trivalent.empty()) {
        out.shape = SetShape::linear;
        for (const auto& p : paths) order.insert(order.end(), p.begin(), p.end());
        for (std::size_t i = 0; i < order.size(); ++i) out.roles.push_back({1, static_cast<int>(i) + 1});
    } else {
        out.shape = SetShape::star3;
        std::size_t c = trivalent[0];
        std::vector<std::vector<std::size_t>> legs;
        for (std::size_t w : adj[c]) legs.push_back(detail::walk(adj, w, c));
        std::sort(legs.begin(), legs.end(), [&](const auto& a, const auto& b) {
            return std::make_pair(detail::weights_along(vs, a), detail::flatten(vs, a)) <
                   std::make_pair(detail::weights_along(vs, b), detail::flatten(vs, b));
        });
        for (const auto& p : paths) legs[0].insert(legs[0].end(), p.begin(), p.end());
        order.push_back(c);
        out.roles.push_back({0, 0});
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t s = 0; s < legs[l].size(); ++s) {
                order.push_back(legs[l][s]);
                out.roles.push_back({static_cast<int>(l) + 1, static_cast<int>(s) + 1});
            }
    }
    for (std::size_t i : order) out.vectors.push_back(vs[i]);
    return out;
}

inline LatticeVector project_out(const LatticeVector& v, std::size_t h) {
    // pi_e(v) = v + (v.e) e with e = e_h, then the h-th coordinate is dropped
    LatticeVector w;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (i != h) w.push_back(v[i]);
    return w;
}

inline std::vector<std::size_t> E_of(const ConfiguredSet& p, std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (p.vectors[v].at(i) != 0) out.push_back(v);
    return out;
}

// P' = (P \ {v, w}) ∪ {π_{e_h}(keep)} where E_h(P) = {v, w} and keep is one of them.
inline ConfiguredSet contract(const ConfiguredSet& p, std::size_t h, std::size_t keep) {
    if (h >= p.n) throw std::invalid_argument("coordinate out of range");
    auto eh = E_of(p, h);
    if (eh.size() != 2) throw std::invalid_argument("contraction needs |E_h| = 2");
    if (keep != eh[0] && keep != eh[1]) throw std::invalid_argument("kept vector must lie in E_h");
    std::vector<LatticeVector> vs;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (v != eh[0] && v != eh[1]) vs.push_back(project_out(p.vectors[v], h));
    vs.push_back(project_out(p.vectors[keep], h));
    return derive_roles(p.n - 1, std::move(vs));
}

inline bool has_complementary_legs(const ConfiguredSet& p) {
    if (p.shape != SetShape::star3) return false;
    auto g = graph_of(p);
    for (const auto& l : {g.legs[1], g.legs[2]})
        for (Int a : l)
            if (a < 2) return false;
    return is_complementary(g.legs[1], g.legs[2]);
}

// Extended contraction for sets whose legs 2 and 3 are complementary:
// (P \ {v_0, v_{s,1}, v_{t,1}}) ∪ {π_{e_i}(v_{s,1})} ∪ {v_{t,1} ± e_k}, with
// E_i(P) = {0, (s,1)}, v_{t,1} final in L_1 and v_0 = ṽ_0 ± e_k, k ∈ V_{v_0} ∩ V_{v_{1,2}}.
inline ConfiguredSet contract_complementary(const ConfiguredSet& p, std::size_t i, int t) {
    if (!has_complementary_legs(p)) throw std::invalid_argument("set has no complementary legs 2 and 3");
    if (i >= p.n) throw std::invalid_argument("coordinate out of range");
    std::size_t c = *p.index_of({0, 0});
    auto ei = E_of(p, i);
    if (ei.size() != 2 || (ei[0] != c && ei[1] != c)) throw std::invalid_argument("E_i must be {0, (s,1)}");
    std::size_t vs1 = ei[0] == c ? ei[1] : ei[0];
    if (p.roles[vs1].leg != 1) throw std::invalid_argument("E_i must meet leg 1");
    int n1 = static_cast<int>(p.leg_length(1));
    if (t != 1 && t != n1) throw std::invalid_argument("v_{t,1} must be final in L_1");
    std::size_t vt1 = *p.index_of({1, t});
    if (vt1 == vs1) throw std::invalid_argument("v_{t,1} must differ from v_{s,1}");
    std::size_t v12 = *p.index_of({2, 1});
    std::optional<std::size_t> k;
    for (std::size_t j = 0; j < p.n; ++j)
        if (j != i && iabs(p.vectors[c][j]) == 1 && p.vectors[v12][j] != 0) {
            k = j;
            break;
        }
    if (!k) throw std::invalid_argument("no coordinate k with v_0 = ṽ_0 ± e_k shared with v_{1,2}");
    std::vector<LatticeVector> vs;
    for (std::size_t v = 0; v < p.size(); ++v)
        if (v != c && v != vs1 && v != vt1) vs.push_back(project_out(p.vectors[v], i));
    vs.push_back(project_out(p.vectors[vs1], i));
    LatticeVector moved = p.vectors[vt1];
    moved[*k] = checked_add(moved[*k], p.vectors[c][*k]);
    vs.push_back(project_out(moved, i));
    return derive_roles(p.n - 1, std::move(vs));
}

// New (-2)-vector -σ e_i + e_k attached to `attach`; `other` gains σσ' e_k,
// where E_i = {attach, other}, σ, σ' their e_i coefficients, e_k a new coordinate.
inline ConfiguredSet expand_final_minus2(const ConfiguredSet& p, std::size_t i, std::size_t attach, std::size_t other) {
    if (i >= p.n) throw std::invalid_argument("coordinate out of range");
    auto ei = E_of(p, i);
    std::vector<std::size_t> want{std::min(attach, other), std::max(attach, other)};
    if (attach == other || ei != want) throw std::invalid_argument("E_i must consist of the two chosen final vectors");
    auto adj = detail::incidence_adjacency(p.vectors);
    if (adj[attach].size() > 1 || adj[other].size() > 1) throw std::invalid_argument("expansion needs final vectors");
    Int sa = p.vectors[attach][i], so = p.vectors[other][i];
    if (iabs(sa) != 1 || iabs(so) != 1) throw std::invalid_argument("expansion needs unit coefficients on e_i");
    std::vector<LatticeVector> vs;
    for (std::size_t v = 0; v < p.size(); ++v) {
        LatticeVector w = p.vectors[v];
        w.push_back(v == other ? sa * so : 0);
        vs.push_back(std::move(w));
    }
    LatticeVector x(p.n + 1, 0);
    x[i] = -sa;
    x[p.n] = 1;
    vs.push_back(std::move(x));
    return derive_roles(p.n + 1, std::move(vs));
}

enum class Side { left, right };

// Linear connected set whose two final vectors are exactly E_i for some i;
// right attaches the new vector at the last vector, left at the first.
inline ConfiguredSet expand_final_minus2(const ConfiguredSet& p, Side side) {
    if (p.shape != SetShape::linear || p.size() < 2) throw std::invalid_argument("expansion needs a linear set");
    auto first = *p.index_of({1, 1});
    auto last = *p.index_of({1, static_cast<int>(p.size())});
    for (std::size_t i = 0; i < p.n; ++i) {
        auto ei = E_of(p, i);
        std::vector<std::size_t> want{std::min(first, last), std::max(first, last)};
        if (ei == want && iabs(p.vectors[first][i]) == 1 && iabs(p.vectors[last][i]) == 1)
            return side == Side::right ? expand_final_minus2(p, i, last, first) : expand_final_minus2(p, i, first, last);
    }
    throw std::invalid_argument("no coordinate meets exactly the two final vectors");
}

enum class BadKind { linear, three_legged };

struct BadComponent {
    BadKind kind = BadKind::linear;
    std::vector<std::size_t> members;  // indices into the set
    std::size_t v_star = 0;
};

namespace detail {

inline std::vector<std::size_t> coords_of(const LatticeVector& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) out.push_back(i);
    return out;
}

inline std::vector<std::size_t> E_within(const std::vector<LatticeVector>& vs, std::size_t i) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < vs.size(); ++v)
        if (vs[v][i] != 0) out.push_back(v);
    return out;
}

// The three-vector seed {e_i - e_j, e_j + ..., -e_i - e_j} up to signs.
inline bool is_linear_seed(const std::vector<LatticeVector>& chain) {
    if (chain.size() != 3) return false;
    const auto &a = chain[0], &m = chain[1], &b = chain[2];
    if (norm(a) != 2 || norm(b) != 2 || norm(m) <= 2) return false;
    if (pairing(a, m) != 1 || pairing(m, b) != 1 || pairing(a, b) != 0) return false;
    auto sa = coords_of(a), sb = coords_of(b);
    if (sa != sb || sa.size() != 2) return false;
    for (std::size_t j : sa)
        if (E_within(chain, j).size() == 3) return true;
    return false;
}

// Undo final (-2)-vector expansions on a chain until the seed appears.
// `ids` tracks original indices; returns the index of v_* on success.
inline std::optional<std::size_t> reduce_linear(std::vector<LatticeVector> chain, std::vector<std::size_t> ids) {
    if (chain.size() < 3) return std::nullopt;
    if (chain.size() == 3) {
        if (is_linear_seed(chain)) return ids[1];
        return std::nullopt;
    }
    for (int end = 0; end < 2; ++end) {
        std::size_t xi = end == 0 ? 0 : chain.size() - 1;
        std::size_t oi = end == 0 ? chain.size() - 1 : 0;
        const auto& x = chain[xi];
        if (norm(x) != 2) continue;
        auto sx = coords_of(x);
        if (sx.size() != 2) continue;
        for (int pick = 0; pick < 2; ++pick) {
            std::size_t k = sx[static_cast<std::size_t>(pick)], a = sx[static_cast<std::size_t>(1 - pick)];
            auto ek = E_within(chain, k);
            std::vector<std::size_t> want{std::min(xi, oi), std::max(xi, oi)};
            if (ek != want || iabs(chain[oi][k]) != 1) continue;
            auto next = chain;
            auto next_ids = ids;
            next[oi][k] = 0;
            next.erase(next.begin() + static_cast<long>(xi));
            next_ids.erase(next_ids.begin() + static_cast<long>(xi));
            std::size_t ni = end == 0 ? 0 : next.size() - 1;
            std::size_t no = end == 0 ? next.size() - 1 : 0;
            auto ea = E_within(next, a);
            std::vector<std::size_t> want2{std::min(ni, no), std::max(ni, no)};
            if (ea != want2) continue;
            if (auto r = reduce_linear(next, next_ids)) return r;
        }
    }
    return std::nullopt;
}

struct StarPiece {
    LatticeVector center;
    std::size_t center_id;
    std::array<std::vector<LatticeVector>, 3> legs;
    std::array<std::vector<std::size_t>, 3> leg_ids;
};

inline std::vector<LatticeVector> all_vectors(const StarPiece& s) {
    std::vector<LatticeVector> out{s.center};
    for (const auto& l : s.legs) out.insert(out.end(), l.begin(), l.end());
    return out;
}

// Undo expansions on legs b and c (finals share a coordinate), then strip the
// seed pair and e_k from the center; the remaining chain must be a linear bad component.
inline std::optional<std::size_t> reduce_three_legged(StarPiece s, int b, int c) {
    auto& lb = s.legs[static_cast<std::size_t>(b)];
    auto& lc = s.legs[static_cast<std::size_t>(c)];
    if (lb.size() == 1 && lc.size() == 1) {
        const auto &y = lb[0], &z = lc[0];
        if (norm(y) != 2 || norm(z) != 2) return std::nullopt;
        auto sy = coords_of(y), sz = coords_of(z);
        if (sy != sz || sy.size() != 2) return std::nullopt;
        auto everything = all_vectors(s);
        for (int pick = 0; pick < 2; ++pick) {
            std::size_t k = sy[static_cast<std::size_t>(pick)], h = sy[static_cast<std::size_t>(1 - pick)];
            if (iabs(s.center[k]) != 1) continue;
            if (E_within(everything, k).size() != 3 || E_within(everything, h).size() != 2) continue;
            int a = 3 - b - c;
            std::vector<LatticeVector> chain;
            std::vector<std::size_t> ids;
            const auto& la = s.legs[static_cast<std::size_t>(a)];
            for (std::size_t q = la.size(); q-- > 0;) {
                chain.push_back(la[q]);
                ids.push_back(s.leg_ids[static_cast<std::size_t>(a)][q]);
            }
            LatticeVector stripped = s.center;
            stripped[k] = 0;
            chain.push_back(stripped);
            ids.push_back(s.center_id);
            if (auto r = reduce_linear(chain, ids)) return r;
        }
        return std::nullopt;
    }
    for (int which = 0; which < 2; ++which) {
        auto& lx = which == 0 ? lb : lc;
        auto& lo = which == 0 ? lc : lb;
        if (lx.size() < 2) continue;
        const auto& x = lx.back();
        if (norm(x) != 2) continue;
        auto sx = coords_of(x);
        if (sx.size() != 2) continue;
        auto everything = all_vectors(s);
        for (int pick = 0; pick < 2; ++pick) {
            std::size_t k = sx[static_cast<std::size_t>(pick)], a = sx[static_cast<std::size_t>(1 - pick)];
            auto ek = E_within(everything, k);
            if (ek.size() != 2 || iabs(lo.back()[k]) != 1) continue;
            StarPiece next = s;
            auto& nx = next.legs[static_cast<std::size_t>(which == 0 ? b : c)];
            auto& no = next.legs[static_cast<std::size_t>(which == 0 ? c : b)];
            no.back()[k] = 0;
            nx.pop_back();
            next.leg_ids[static_cast<std::size_t>(which == 0 ? b : c)].pop_back();
            if (E_within(all_vectors(next), a).size() != 2 || nx.back()[a] == 0 || no.back()[a] == 0) continue;
            if (auto r = reduce_three_legged(next, b, c)) return r;
        }
    }
    return std::nullopt;
}

}  // namespace detail

inline std::vector<BadComponent> find_bad_components(const ConfiguredSet& p) {
    std::vector<BadComponent> out;
    auto labels = component_labels(p.vectors);
    auto adj = detail::incidence_adjacency(p.vectors);
    std::size_t ncomp = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    for (std::size_t comp = 0; comp < ncomp; ++comp) {
        std::vector<std::size_t> members;
        for (std::size_t v = 0; v < p.size(); ++v)
            if (labels[v] == comp) members.push_back(v);
        std::vector<std::size_t> tri;
        bool ok = true;
        std::size_t edges = 0;
        for (std::size_t v : members) {
            edges += adj[v].size();
            if (adj[v].size() == 3) tri.push_back(v);
            if (adj[v].size() > 3) ok = false;
        }
        if (!ok || edges / 2 + 1 != members.size() || tri.size() > 1) continue;
        if (tri.empty()) {
            std::size_t start = members[0];
            for (std::size_t v : members)
                if (adj[v].size() <= 1) {
                    start = v;
                    break;
                }
            auto path = detail::walk(adj, start, p.size());
            std::vector<LatticeVector> chain;
            for (std::size_t v : path) chain.push_back(p.vectors[v]);
            if (auto r = detail::reduce_linear(chain, path)) out.push_back({BadKind::linear, members, *r});
            continue;
        }
        detail::StarPiece s;
        s.center = p.vectors[tri[0]];
        s.center_id = tri[0];
        for (std::size_t l = 0; l < 3; ++l) {
            auto path = detail::walk(adj, adj[tri[0]][l], tri[0]);
            for (std::size_t v : path) {
                s.legs[l].push_back(p.vectors[v]);
                s.leg_ids[l].push_back(v);
            }
        }
        std::optional<std::size_t> found;
        for (auto [b, c] : {std::pair{1, 2}, std::pair{0, 2}, std::pair{0, 1}}) {
            if ((found = detail::reduce_three_legged(s, b, c))) break;
        }
        if (found) out.push_back({BadKind::three_legged, members, *found});
    }
    return out;
}

inline std::size_t linear_bad_count(const ConfiguredSet& p) {
    std::size_t b = 0;
    for (const auto& c : find_bad_components(p))
        if (c.kind == BadKind::linear) ++b;
    return b;
}

namespace detail {

// Least row-major matrix over signed column permutations: each column takes
// its lexicographically smaller sign, then columns are sorted.
inline std::vector<LatticeVector> canonical_columns(const std::vector<LatticeVector>& rows, std::size_t n) {
    std::vector<std::vector<Int>> cols(n, std::vector<Int>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < n; ++c) cols[c][r] = rows[r][c];
    for (auto& col : cols) {
        auto neg = col;
        for (auto& x : neg) x = -x;
        if (neg < col) col = neg;
    }
    std::sort(cols.begin(), cols.end());
    std::vector<LatticeVector> out(rows.size(), LatticeVector(n));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < n; ++c) out[r][c] = cols[c][r];
    return out;
}

}  // namespace detail

// Least representative under signed coordinate permutations composed with
// leg relabelings (and reversal of linear sets).
inline ConfiguredSet canonicalize(const ConfiguredSet& p) {
    std::vector<std::vector<std::size_t>> orders;
    std::vector<std::vector<Role>> role_lists;
    if (p.shape == SetShape::star3) {
        std::array<int, 3> perm{1, 2, 3};
        do {
            std::vector<std::size_t> order{*p.index_of({0, 0})};
            std::vector<Role> roles{{0, 0}};
            for (int slot = 0; slot < 3; ++slot) {
                int leg = perm[static_cast<std::size_t>(slot)];
                int len = static_cast<int>(p.leg_length(leg));
                for (int s = 1; s <= len; ++s) {
                    order.push_back(*p.index_of({leg, s}));
                    roles.push_back({slot + 1, s});
                }
            }
            orders.push_back(order);
            role_lists.push_back(roles);
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else if (p.shape == SetShape::linear) {
        std::vector<std::size_t> fwd;
        std::vector<Role> roles;
        for (int s = 1; s <= static_cast<int>(p.size()); ++s) {
            fwd.push_back(*p.index_of({1, s}));
            roles.push_back({1, s});
        }
        auto rev = fwd;
        std::reverse(rev.begin(), rev.end());
        orders = {fwd, rev};
        role_lists = {roles, roles};
    } else {
        std::vector<std::size_t> idx(p.size());
        std::iota(idx.begin(), idx.end(), 0);
        orders = {idx};
        role_lists = {p.roles};
    }
    std::optional<std::pair<IntMatrix, std::vector<LatticeVector>>> best;
    std::size_t best_i = 0;
    for (std::size_t o = 0; o < orders.size(); ++o) {
        std::vector<LatticeVector> rows;
        for (std::size_t i : orders[o]) rows.push_back(p.vectors[i]);
        auto key = std::make_pair(gram(rows), detail::canonical_columns(rows, p.n));
        if (!best || key < *best) {
            best = key;
            best_i = o;
        }
    }
    ConfiguredSet out;
    out.n = p.n;
    out.shape = p.shape;
    out.roles = role_lists[best_i];
    out.vectors = best->second;
    return out;
}

inline std::string format_set(const ConfiguredSet& p) {
    std::ostringstream os;
    os << "n = " << p.n << " | shape = "
       << (p.shape == SetShape::star3 ? "star3" : p.shape == SetShape::linear ? "linear" : "unstructured") << " | roles = ";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p.roles[i].leg << ":" << p.roles[i].pos;
    os << "\n";
    for (const auto& v : p.vectors) os << join(v, ",") << "\n";
    return os.str();
}

inline ConfiguredSet parse_set(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header)) throw std::invalid_argument("empty vector set");
    ConfiguredSet p;
    auto fields = detail::split(header, '|');
    if (fields.size() != 3) throw std::invalid_argument("bad vector set header");
    auto value = [](const std::string& f) {
        auto pos = f.find('=');
        if (pos == std::string::npos) throw std::invalid_argument("bad header field");
        return detail::trim(f.substr(pos + 1));
    };
    p.n = static_cast<std::size_t>(detail::parse_int(value(fields[0])));
    std::string shape = value(fields[1]);
    p.shape = shape == "star3" ? SetShape::star3 : shape == "linear" ? SetShape::linear : SetShape::unstructured;
    std::string roles = value(fields[2]);
    if (!roles.empty())
        for (const auto& r : detail::split(roles, ',')) {
            auto lp = detail::split(r, ':');
            if (lp.size() != 2) throw std::invalid_argument("bad role entry");
            p.roles.push_back({static_cast<int>(detail::parse_int(lp[0])), static_cast<int>(detail::parse_int(lp[1]))});
        }
    std::string line;
    while (std::getline(is, line)) {
        if (detail::trim(line).empty()) continue;
        auto v = parse_int_list(line);
        if (v.size() != p.n) throw std::invalid_argument("vector length differs from n");
        p.vectors.push_back(std::move(v));
    }
    if (p.vectors.size() != p.roles.size()) throw std::invalid_argument("role count differs from vector count");
    return p;
}

}  // namespace montesinos
