#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "contfrac.hpp"

namespace montesinos {

enum class Shape { linear, star3 };

// Weights are stored negated: a entry of 3 is a vertex of weight -3.
struct PlumbingGraph {
    Shape shape = Shape::linear;
    Int central = 0;
    std::vector<std::vector<Int>> legs;

    static PlumbingGraph linear(std::vector<Int> chain) {
        PlumbingGraph g;
        g.shape = Shape::linear;
        g.legs = {std::move(chain)};
        return g;
    }

    static PlumbingGraph star(Int a0, std::vector<Int> l1, std::vector<Int> l2, std::vector<Int> l3) {
        PlumbingGraph g;
        g.shape = Shape::star3;
        g.central = a0;
        g.legs = {std::move(l1), std::move(l2), std::move(l3)};
        g.validate();
        return g;
    }

    void validate() const {
        if (shape == Shape::star3) {
            if (legs.size() != 3) throw std::invalid_argument("star graph needs three legs");
            for (const auto& l : legs)
                if (l.empty()) throw std::invalid_argument("star graph legs must be nonempty");
        } else if (legs.size() != 1) {
            throw std::invalid_argument("linear graph stores exactly one chain");
        }
    }

    bool is_star() const { return shape == Shape::star3; }

    std::size_t vertex_count() const {
        std::size_t n = is_star() ? 1 : 0;
        for (const auto& l : legs) n += l.size();
        return n;
    }

    // center, leg 1 root to leaf, leg 2, leg 3
    std::vector<Int> weights() const {
        std::vector<Int> w;
        if (is_star()) w.push_back(central);
        for (const auto& l : legs) w.insert(w.end(), l.begin(), l.end());
        return w;
    }

    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> e;
        if (!is_star()) {
            for (std::size_t i = 1; i < legs[0].size(); ++i) e.emplace_back(i - 1, i);
            return e;
        }
        std::size_t base = 1;
        for (const auto& l : legs) {
            e.emplace_back(0, base);
            for (std::size_t i = 1; i < l.size(); ++i) e.emplace_back(base + i - 1, base + i);
            base += l.size();
        }
        return e;
    }

    friend bool operator==(const PlumbingGraph&, const PlumbingGraph&) = default;
};

// Legs sorted so that isomorphic star graphs compare equal.
inline PlumbingGraph normalized(PlumbingGraph g) {
    if (g.is_star())
        std::sort(g.legs.begin(), g.legs.end());
    else
        g.legs[0] = std::min(g.legs[0], reversed(g.legs[0]));
    return g;
}

inline bool isomorphic(const PlumbingGraph& a, const PlumbingGraph& b) {
    if (a.shape != b.shape) return false;
    if (a.is_star()) return normalized(a) == normalized(b);
    return a.legs[0] == b.legs[0] || a.legs[0] == reversed(b.legs[0]);
}

inline PlumbingGraph parse_graph(const std::string& text) {
    if (text.find(';') == std::string::npos) return PlumbingGraph::linear(parse_int_list(text));
    auto parts = detail::split(text, ';');
    if (parts.size() != 4) throw std::invalid_argument("star graph format is 'a0; leg1; leg2; leg3'");
    Int a0 = detail::parse_int(parts[0]);
    std::vector<std::vector<Int>> legs;
    for (int i = 1; i < 4; ++i) {
        auto l = parse_int_list(parts[static_cast<std::size_t>(i)]);
        if (l.empty()) throw std::invalid_argument("star graph legs must be nonempty");
        legs.push_back(std::move(l));
    }
    return PlumbingGraph::star(a0, legs[0], legs[1], legs[2]);
}

inline std::string format_graph(const PlumbingGraph& g) {
    if (!g.is_star()) return join(g.legs[0], ",");
    std::string s = std::to_string(g.central);
    for (const auto& l : g.legs) s += "; " + join(l, ",");
    return s;
}

inline IntMatrix intersection_matrix(const PlumbingGraph& g) {
    auto w = g.weights();
    std::size_t n = w.size();
    IntMatrix q(n, std::vector<Int>(n, 0));
    for (std::size_t i = 0; i < n; ++i) q[i][i] = -w[i];
    for (auto [a, b] : g.edges()) q[a][b] = q[b][a] = 1;
    return q;
}

inline Int quantity_I(const PlumbingGraph& g) {
    Int s = 0;
    for (Int a : g.weights()) s = checked_add(s, a - 3);
    return s;
}

inline bool is_in_wp(const PlumbingGraph& g) {
    if (!g.is_star()) return false;
    if (g.central < 3) return false;
    for (const auto& l : g.legs)
        for (Int a : l)
            if (a < 2) return false;
    return quantity_I(g) < -1;
}

// Fraction-free elimination with row pivoting; intermediates in 128 bits.
template <class T>
T bareiss_determinant(std::vector<std::vector<T>> m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    T sign = 1;
    T prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && m[r][k] == 0) ++r;
            if (r == n) return 0;
            std::swap(m[k], m[r]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                __int128 v = static_cast<__int128>(m[i][j]) * m[k][k] - static_cast<__int128>(m[i][k]) * m[k][j];
                m[i][j] = narrow(v / prev);
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

// Cofactor recursion on a forest: for each rooted subtree track det(T) and
// det(T minus root); adjacent entries are 1 so det(T_v) = d_v * prod det(T_c)
// - sum_c det(T_c - c) * prod_{c' != c} det(T_c').
inline Int tree_determinant(const std::vector<Int>& diag, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::size_t n = diag.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<bool> seen(n, false);
    std::function<std::pair<Int, Int>(std::size_t, std::size_t)> rec = [&](std::size_t v, std::size_t parent) {
        seen[v] = true;
        std::vector<std::pair<Int, Int>> kids;
        for (std::size_t c : adj[v])
            if (c != parent) kids.push_back(rec(c, v));
        Int without_root = 1;
        for (auto& k : kids) without_root = checked_mul(without_root, k.first);
        Int full = checked_mul(diag[v], without_root);
        for (std::size_t i = 0; i < kids.size(); ++i) {
            Int term = kids[i].second;
            for (std::size_t j = 0; j < kids.size(); ++j)
                if (j != i) term = checked_mul(term, kids[j].first);
            full = checked_sub(full, term);
        }
        return std::pair<Int, Int>{full, without_root};
    };
    Int det = 1;
    for (std::size_t v = 0; v < n; ++v)
        if (!seen[v]) det = checked_mul(det, rec(v, n).first);
    return det;
}

inline Int determinant(const PlumbingGraph& g) { return bareiss_determinant(intersection_matrix(g)); }

inline Int tree_determinant(const PlumbingGraph& g) {
    auto w = g.weights();
    for (auto& a : w) a = -a;
    return tree_determinant(w, g.edges());
}

inline std::vector<Int> leading_minors(const IntMatrix& q) {
    std::vector<Int> out;
    for (std::size_t k = 1; k <= q.size(); ++k) {
        IntMatrix sub(k, std::vector<Int>(k));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) sub[i][j] = q[i][j];
        out.push_back(bareiss_determinant(sub));
    }
    return out;
}

inline bool is_negative_definite(const IntMatrix& q) {
    auto minors = leading_minors(q);
    for (std::size_t k = 0; k < minors.size(); ++k) {
        Int d = minors[k];
        bool odd = (k + 1) % 2 == 1;
        if (odd ? d >= 0 : d <= 0) return false;
    }
    return true;
}

inline bool is_negative_definite(const PlumbingGraph& g) { return is_negative_definite(intersection_matrix(g)); }

struct SeifertInvariants {
    Int b = 0;
    std::vector<std::pair<Int, Int>> pairs;  // (alpha, beta)
    friend bool operator==(const SeifertInvariants&, const SeifertInvariants&) = default;
};

inline SeifertInvariants seifert_invariants(const PlumbingGraph& g) {
    if (!g.is_star()) throw std::invalid_argument("Seifert invariants need a star graph");
    SeifertInvariants s;
    s.b = -g.central;
    for (const auto& l : g.legs) {
        auto [alpha, beta] = continuant(l);
        if (alpha < 1) throw std::invalid_argument("leg does not define a valid Seifert pair");
        Int d = std::gcd(alpha, beta);
        s.pairs.emplace_back(alpha / d, beta / d);
    }
    return s;
}

inline std::string format_seifert(const SeifertInvariants& s) {
    std::string out = "(" + std::to_string(s.b);
    for (auto [a, b] : s.pairs) out += "; (" + std::to_string(a) + "," + std::to_string(b) + ")";
    return out + ")";
}

// |alpha_1 alpha_2 alpha_3 (sum beta_i/alpha_i + b)| with denominators cleared
inline Int h1_order(const PlumbingGraph& g) {
    auto s = seifert_invariants(g);
    Int prod = 1;
    for (auto [a, b] : s.pairs) prod = checked_mul(prod, a);
    Int total = checked_mul(prod, s.b);
    for (std::size_t i = 0; i < s.pairs.size(); ++i) {
        Int term = s.pairs[i].second;
        for (std::size_t j = 0; j < s.pairs.size(); ++j)
            if (j != i) term = checked_mul(term, s.pairs[j].first);
        total = checked_add(total, term);
    }
    return iabs(total);
}

}  // namespace montesinos
