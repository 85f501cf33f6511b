#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "contfrac.hpp"
#include "families.hpp"
#include "plumbing.hpp"

namespace montesinos {

enum class CollapseSide { left, right };

struct CollapseStep {
    CollapseSide side;
    std::pair<CFString, CFString> before, after;
};

struct CollapseTrace {
    std::vector<CollapseStep> steps;
    std::pair<CFString, CFString> terminal;
    bool collapsed = false;  // terminal is the empty pair

    std::size_t step_count() const { return steps.size(); }
};

// Rule L: head(s1) = 2 < head(s2): drop head(s1), decrement head(s2); rule R
// mirrors it. The pair ((2),(2)) is reduced with rule L to ((),(1)), and the
// lone 1 is then blown down.
inline CollapseTrace complementary_collapse(const CFString& s1, const CFString& s2) {
    CollapseTrace tr;
    CFString a = s1, b = s2;
    auto step = [&](CollapseSide side, CFString na, CFString nb) {
        tr.steps.push_back({side, {a, b}, {na, nb}});
        a = std::move(na);
        b = std::move(nb);
    };
    while (true) {
        if (a.empty() && b.size() == 1 && b[0] == 1) {
            step(CollapseSide::right, {}, {});
            continue;
        }
        if (a.empty() || b.empty()) break;
        if (a.size() == 1 && b.size() == 1 && a[0] == 2 && b[0] == 2) {
            step(CollapseSide::left, {}, {1});
            continue;
        }
        if (a[0] == 2 && b[0] > 2) {
            CFString na(a.begin() + 1, a.end()), nb = b;
            nb[0] -= 1;
            step(CollapseSide::left, std::move(na), std::move(nb));
        } else if (b[0] == 2 && a[0] > 2) {
            CFString nb(b.begin() + 1, b.end()), na = a;
            na[0] -= 1;
            step(CollapseSide::right, std::move(na), std::move(nb));
        } else {
            break;
        }
    }
    tr.terminal = {a, b};
    tr.collapsed = a.empty() && b.empty();
    return tr;
}

inline std::string format_trace(const CollapseTrace& tr) {
    auto paren = [](const CFString& s) { return "(" + join(s, ",") + ")"; };
    std::string out;
    for (const auto& st : tr.steps) {
        out += st.side == CollapseSide::left ? "L" : "R";
        out += " : (" + paren(st.before.first) + "," + paren(st.before.second) + ") -> (" + paren(st.after.first) + "," +
               paren(st.after.second) + ")\n";
    }
    return out;
}

struct EulerBookkeeping {
    Int components = 0;
    std::string surface;
};

struct RibbonReduction {
    CFString lens_string;
    bool in_lisca_list = false;
    std::vector<FamilyDescriptor> matches;
    EulerBookkeeping euler;
};

inline EulerBookkeeping euler_bookkeeping(const PlumbingGraph& g) {
    EulerBookkeeping e;
    e.components = link_component_count(g);
    switch (e.components) {
        case 1: e.surface = "ribbon disc"; break;
        case 2: e.surface = "disc + Moebius band"; break;
        case 3: e.surface = "disc + annulus, or disc + two Moebius bands"; break;
        default: e.surface = "no chi = 1 surface with this many components"; break;
    }
    return e;
}

// Legs 2 and 3 must be complementary. The string is leg 1 leaf to root, then
// a0 - 1.
inline RibbonReduction ribbon_reduction_cl(const PlumbingGraph& g) {
    if (!g.is_star()) throw std::invalid_argument("ribbon reduction needs a star graph");
    for (const auto& l : g.legs)
        for (Int a : l)
            if (a < 2) throw std::invalid_argument("leg weights must be >= 2");
    if (!is_complementary(g.legs[1], g.legs[2])) throw std::invalid_argument("legs 2 and 3 are not complementary");
    RibbonReduction r;
    r.lens_string = concat({reversed(g.legs[0]), {g.central - 1}});
    r.euler = euler_bookkeeping(g);
    if (std::any_of(r.lens_string.begin(), r.lens_string.end(), [](Int a) { return a < 2; })) return r;
    for (auto& d : lisca_matches(r.lens_string))
        if (d.I_value >= -3 && d.I_value <= -1) r.matches.push_back(std::move(d));
    r.in_lisca_list = !r.matches.empty();
    return r;
}

// Put a complementary pair into legs 2 and 3 if there is one.
inline std::optional<PlumbingGraph> with_complementary_last(const PlumbingGraph& g) {
    if (!g.is_star()) return std::nullopt;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& x = g.legs[(i + 1) % 3];
        const auto& y = g.legs[(i + 2) % 3];
        bool ok = true;
        for (Int a : x) ok = ok && a >= 2;
        for (Int a : y) ok = ok && a >= 2;
        if (ok && is_complementary(x, y)) return PlumbingGraph::star(g.central, g.legs[i], x, y);
    }
    return std::nullopt;
}

// Weighted tree with negated weights (a = 1 is a -1 vertex).
struct WeightedTree {
    std::vector<Int> a;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    static WeightedTree from(const PlumbingGraph& g) { return {g.weights(), g.edges()}; }

    std::vector<std::size_t> neighbors(std::size_t v) const {
        std::vector<std::size_t> out;
        for (auto [x, y] : edges) {
            if (x == v) out.push_back(y);
            if (y == v) out.push_back(x);
        }
        return out;
    }

    friend bool operator==(const WeightedTree&, const WeightedTree&) = default;
};

inline IntMatrix intersection_matrix(const WeightedTree& t) {
    std::size_t n = t.a.size();
    IntMatrix q(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) q[i][i] = -t.a[i];
    for (auto [x, y] : t.edges) q[x][y] = q[y][x] = 1;
    return q;
}

inline WeightedTree blow_down(const WeightedTree& t, std::size_t v) {
    if (v >= t.a.size()) throw std::invalid_argument("no such vertex");
    if (t.a[v] != 1) throw std::invalid_argument("only a -1 vertex can be blown down");
    auto nb = t.neighbors(v);
    if (nb.size() >= 3) throw std::invalid_argument("blow-down of a vertex of valence >= 3 is not supported");
    WeightedTree out;
    std::vector<std::size_t> remap(t.a.size());
    for (std::size_t i = 0, j = 0; i < t.a.size(); ++i) {
        if (i == v) continue;
        remap[i] = j++;
        out.a.push_back(t.a[i]);
    }
    for (std::size_t u : nb) out.a[remap[u]] -= 1;
    for (auto [x, y] : t.edges)
        if (x != v && y != v) out.edges.emplace_back(remap[x], remap[y]);
    if (nb.size() == 2) out.edges.emplace_back(remap[nb[0]], remap[nb[1]]);
    return out;
}

}  // namespace montesinos
