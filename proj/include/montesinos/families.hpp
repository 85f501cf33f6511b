#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "arith.hpp"
#include "contfrac.hpp"
#include "plumbing.hpp"

namespace montesinos {

enum class Source { thm_cl, thm_ncl, lisca_linear };

inline std::string to_string(Source s) {
    switch (s) {
        case Source::thm_cl: return "thm_cl";
        case Source::thm_ncl: return "thm_ncl";
        case Source::lisca_linear: return "lisca_linear";
    }
    return "?";
}

// Integer parameters (s, t, ...) plus optional strings: b with c = complement(b),
// and for thm_cl the complementary legs L2, L3.
struct FamilyDescriptor {
    Source source = Source::thm_cl;
    std::string row;
    Int I_value = 0;
    std::map<std::string, Int> params;
    CFString b, c;
    CFString leg2, leg3;

    Int param(const std::string& k) const {
        auto it = params.find(k);
        if (it == params.end()) throw std::invalid_argument("descriptor is missing parameter " + k);
        return it->second;
    }

    friend bool operator==(const FamilyDescriptor&, const FamilyDescriptor&) = default;
};

namespace detail {

struct RowSpec {
    Source source;
    std::string row;
    Int I;
    std::vector<std::pair<std::string, Int>> mins;  // parameter and its lower bound
    bool uses_b;
};

inline const std::vector<RowSpec>& row_table() {
    static const std::vector<RowSpec> rows = {
        {Source::thm_cl, "1", -4, {}, true},
        {Source::thm_cl, "1", -3, {{"s", 1}, {"t", 0}}, false},
        {Source::thm_cl, "2", -3, {{"t", 0}}, false},
        {Source::thm_cl, "3", -3, {{"s", 1}, {"t", 0}}, false},
        {Source::thm_cl, "4", -3, {{"s", 0}, {"t", 1}}, false},
        {Source::thm_cl, "5", -3, {{"s", 0}}, false},
        {Source::thm_cl, "6", -3, {}, true},
        {Source::thm_cl, "1", -2, {{"s", 1}, {"t", 0}}, false},
        {Source::thm_cl, "2", -2, {{"t", 0}}, false},
        {Source::thm_cl, "3", -2, {{"s", 0}, {"t", 0}}, false},
        {Source::thm_cl, "4", -2, {{"s", 1}, {"t", 0}}, false},
        {Source::thm_cl, "5", -2, {{"s", 0}, {"t", 0}}, false},
        {Source::thm_cl, "6", -2, {{"s", 1}, {"t", 0}}, false},
        {Source::thm_cl, "7", -2, {{"t", 0}}, false},
        {Source::thm_cl, "8", -2, {{"s", 0}, {"t", 0}}, false},
        {Source::thm_ncl, "a", -2, {{"s", 1}, {"t", 0}}, true},
        {Source::thm_ncl, "b", -2, {{"s", 1}, {"t", 1}}, true},
        {Source::thm_ncl, "c", -2, {{"t", 1}}, true},
        {Source::thm_ncl, "d", -2, {{"s", 1}, {"t", 0}}, true},
        {Source::thm_ncl, "e", -2, {{"s", 1}, {"t", 0}}, false},
        {Source::thm_ncl, "f", -2, {{"s", 1}, {"t", 0}}, false},
        {Source::lisca_linear, "I", -3, {}, true},
        {Source::lisca_linear, "II.1", -2, {{"s", 0}, {"t", 0}}, false},
        {Source::lisca_linear, "II.2", -2, {{"s", 0}, {"t", 0}}, false},
        {Source::lisca_linear, "II.3", -2, {}, true},
        {Source::lisca_linear, "III.1", -1, {{"s", 0}, {"t", 0}}, false},
        {Source::lisca_linear, "III.2", -1, {{"s", 0}, {"t", 0}}, false},
        {Source::lisca_linear, "III.3", -1, {{"s", 0}, {"t", 0}}, false},
    };
    return rows;
}

inline const RowSpec* find_row(Source src, const std::string& row, Int I) {
    for (const auto& r : row_table())
        if (r.source == src && r.row == row && r.I == I) return &r;
    return nullptr;
}

inline CFString parse_dotted(const std::string& text) {
    CFString out;
    for (const auto& tok : split(text, '.')) out.push_back(parse_int(tok));
    validate_string(out);
    return out;
}

// c_1..c_{l-1}, c_l + 1 and friends
inline CFString bump_last(CFString s, Int by = 1) {
    s.back() = checked_add(s.back(), by);
    return s;
}

inline CFString bump_first(CFString s, Int by = 1) {
    s.front() = checked_add(s.front(), by);
    return s;
}

inline CFString tail(const CFString& s) { return CFString(s.begin() + 1, s.end()); }

}  // namespace detail

inline void validate_descriptor(const FamilyDescriptor& d) {
    const auto* spec = detail::find_row(d.source, d.row, d.I_value);
    if (!spec) throw std::invalid_argument("unknown family row " + to_string(d.source) + ":" + d.row + ":" + std::to_string(d.I_value));
    for (const auto& [name, lo] : spec->mins) {
        Int v = d.param(name);
        if (v < lo) throw std::invalid_argument("parameter " + name + " out of range");
    }
    for (const auto& [name, v] : d.params) {
        if (name == "k" || name == "l") continue;
        bool known = std::any_of(spec->mins.begin(), spec->mins.end(), [&](const auto& m) { return m.first == name; });
        if (!known) throw std::invalid_argument("unexpected parameter " + name);
    }
    if (spec->uses_b) {
        validate_string(d.b);
        if (d.c != point_rule_complement(d.b)) throw std::invalid_argument("c is not the complement of b");
        if (d.params.count("k") && d.params.at("k") != static_cast<Int>(d.b.size())) throw std::invalid_argument("k does not match b");
        if (d.params.count("l") && d.params.at("l") != static_cast<Int>(d.c.size())) throw std::invalid_argument("l does not match c");
    } else if (!d.b.empty() || !d.c.empty()) {
        throw std::invalid_argument("row takes no b string");
    }
    if (d.source == Source::thm_cl) {
        validate_string(d.leg2);
        validate_string(d.leg3);
        if (!is_complementary(d.leg2, d.leg3)) throw std::invalid_argument("L2 and L3 are not complementary");
    } else if (!d.leg2.empty() || !d.leg3.empty()) {
        throw std::invalid_argument("only thm_cl rows carry L2/L3");
    }
}

inline std::string format_descriptor(const FamilyDescriptor& d) {
    std::string out = to_string(d.source) + ":" + d.row + ":" + std::to_string(d.I_value) + ":";
    std::vector<std::string> kv;
    for (const auto& [k, v] : d.params) kv.push_back(k + "=" + std::to_string(v));
    auto dotted = [](const CFString& s) { return join(s, "."); };
    if (!d.b.empty()) kv.push_back("b=" + dotted(d.b));
    if (!d.c.empty()) kv.push_back("c=" + dotted(d.c));
    if (!d.leg2.empty()) kv.push_back("L2=" + dotted(d.leg2));
    if (!d.leg3.empty()) kv.push_back("L3=" + dotted(d.leg3));
    for (std::size_t i = 0; i < kv.size(); ++i) out += (i ? "," : "") + kv[i];
    return out;
}

inline FamilyDescriptor parse_descriptor(const std::string& text) {
    auto parts = detail::split(text, ':');
    if (parts.size() != 4) throw std::invalid_argument("descriptor format is source:row:I:params");
    FamilyDescriptor d;
    std::string src = detail::trim(parts[0]);
    if (src == "thm_cl") d.source = Source::thm_cl;
    else if (src == "thm_ncl") d.source = Source::thm_ncl;
    else if (src == "lisca_linear") d.source = Source::lisca_linear;
    else throw std::invalid_argument("unknown descriptor source '" + src + "'");
    d.row = detail::trim(parts[1]);
    d.I_value = detail::parse_int(parts[2]);
    if (!detail::trim(parts[3]).empty()) {
        for (const auto& item : detail::split(parts[3], ',')) {
            auto kv = detail::split(item, '=');
            if (kv.size() != 2) throw std::invalid_argument("bad descriptor parameter '" + item + "'");
            std::string k = detail::trim(kv[0]);
            if (k == "b") d.b = detail::parse_dotted(kv[1]);
            else if (k == "c") d.c = detail::parse_dotted(kv[1]);
            else if (k == "L2") d.leg2 = detail::parse_dotted(kv[1]);
            else if (k == "L3") d.leg3 = detail::parse_dotted(kv[1]);
            else if (d.params.count(k)) throw std::invalid_argument("duplicate parameter " + k);
            else d.params[k] = detail::parse_int(kv[1]);
        }
    }
    if (!d.b.empty() && d.c.empty()) d.c = point_rule_complement(d.b);
    validate_descriptor(d);
    return d;
}

// Leaf-to-root-plus-center string of a thm_cl row.
inline CFString cl_tuple(const FamilyDescriptor& d) {
    using detail::bump_first;
    using detail::bump_last;
    auto p = [&](const char* k) { return d.param(k); };
    const CFString& b = d.b;
    const CFString& c = d.c;
    if (d.I_value == -4) return concat({reversed(b), {2}, bump_last(c)});
    if (d.I_value == -3) {
        if (d.row == "1") return concat({twos(p("t")), {3, 2 + p("s"), 2 + p("t"), 3}, twos(p("s") - 1), {3}});
        if (d.row == "2") return concat({twos(p("t")), {3, 2, 2 + p("t"), 4}});
        if (d.row == "3") return concat({twos(p("t")), {3 + p("s"), 2, 2 + p("t"), 3}, twos(p("s") - 1), {3}});
        if (d.row == "4") return concat({twos(p("s")), {3, 2 + p("t"), 2, 3 + p("s")}, twos(p("t") - 1), {3}});
        if (d.row == "5") return concat({twos(p("s")), {3, 2, 2, 4 + p("s")}});
        if (d.row == "6") return concat({bump_last(reversed(b)), {2, 2}, bump_last(bump_first(c))});
    }
    if (d.I_value == -2) {
        Int s = d.params.count("s") ? p("s") : 0, t = p("t");
        if (d.row == "1") return concat({{t + 2, s + 2, 3}, twos(t), {4}, twos(s - 1), {3}});
        if (d.row == "2") return concat({{t + 2, 2, 3}, twos(t), {5}});
        if (d.row == "3") return concat({twos(s), {4}, twos(t), {3, s + 2, t + 3}});
        if (d.row == "4") return concat({{t + 2, 2, 3 + s}, twos(t), {4}, twos(s - 1), {3}});
        if (d.row == "5") return concat({twos(s), {4}, twos(t), {3 + s, 2, t + 3}});
        if (d.row == "6") return concat({{t + 3, 2, 3 + s, 3}, twos(t), {3}, twos(s - 1), {3}});
        if (d.row == "7") return concat({{t + 3, 2, 3, 3}, twos(t), {4}});
        if (d.row == "8") return concat({twos(s), {3}, twos(t), {3, 3 + s, 2, t + 4}});
    }
    throw std::invalid_argument("unknown thm_cl row");
}

inline CFString lisca_string(const FamilyDescriptor& d) {
    using detail::bump_first;
    using detail::bump_last;
    const CFString& b = d.b;
    const CFString& c = d.c;
    if (d.row == "I") return concat({reversed(b), {2}, c});
    if (d.row == "II.3") return concat({bump_last(reversed(b)), {2, 2}, bump_first(c)});
    Int s = d.param("s"), t = d.param("t");
    if (d.row == "II.1") return concat({twos(t), {3, 2 + s, 2 + t, 3}, twos(s)});
    if (d.row == "II.2") return concat({twos(t), {3 + s, 2, 2 + t, 3}, twos(s)});
    if (d.row == "III.1") return concat({{t + 2, s + 2, 3}, twos(t), {4}, twos(s)});
    if (d.row == "III.2") return concat({{t + 2, 2, 3 + s}, twos(t), {4}, twos(s)});
    if (d.row == "III.3") return concat({{t + 3, 2, 3 + s, 3}, twos(t), {3}, twos(s)});
    throw std::invalid_argument("unknown lisca_linear row");
}

inline PlumbingGraph ncl_graph(const FamilyDescriptor& d) {
    Int s = d.params.count("s") ? d.param("s") : 0, t = d.param("t");
    const CFString& b = d.b;
    CFString ctail = d.c.empty() ? CFString{} : detail::tail(d.c);
    Int c1 = d.c.empty() ? 0 : d.c.front();
    if (d.row == "a")
        return PlumbingGraph::star(2 + s, concat({{3}, twos(t)}), concat({{2 + t, 3}, twos(s - 1), {c1 + 1}, ctail}), b);
    if (d.row == "b")
        return PlumbingGraph::star(3 + s, twos(t), concat({{2, 2 + t, 3}, twos(s - 1), {c1 + 1}, ctail}), b);
    if (d.row == "c") return PlumbingGraph::star(3, twos(t), concat({{2, 2 + t, c1 + 2}, ctail}), b);
    if (d.row == "d")
        return PlumbingGraph::star(2 + s, concat({{2, 3 + t}, twos(s - 1), {c1 + 1}, ctail}), concat({{3}, twos(t)}), b);
    if (d.row == "e") return PlumbingGraph::star(3, {2}, twos(s), concat({{2 + t, 3, 3 + s}, twos(t)}));
    if (d.row == "f") return PlumbingGraph::star(3, {2}, twos(s), concat({{2 + t, 2 + s, 4}, twos(t)}));
    throw std::invalid_argument("unknown thm_ncl row");
}

inline PlumbingGraph generate_graph(const FamilyDescriptor& d) {
    validate_descriptor(d);
    if (d.source == Source::thm_ncl) return ncl_graph(d);
    if (d.source != Source::thm_cl) throw std::invalid_argument("lisca_linear rows generate strings");
    CFString tup = cl_tuple(d);
    Int a0 = tup.back();
    tup.pop_back();
    return PlumbingGraph::star(a0, reversed(tup), d.leg2, d.leg3);
}

inline CFString generate_string(const FamilyDescriptor& d) {
    validate_descriptor(d);
    if (d.source != Source::lisca_linear) throw std::invalid_argument("only lisca_linear rows generate strings");
    return lisca_string(d);
}

inline std::variant<PlumbingGraph, CFString> generate(const FamilyDescriptor& d) {
    if (d.source == Source::lisca_linear) return generate_string(d);
    return generate_graph(d);
}

// All complementary pairs (b, c) with |b| + |c| <= max_len, grown from ((2),(2)).
inline std::vector<std::pair<CFString, CFString>> complementary_pairs(std::size_t max_len) {
    std::vector<std::pair<CFString, CFString>> out;
    if (max_len < 2) return out;
    std::vector<std::pair<CFString, CFString>> frontier = {{{2}, {2}}};
    while (!frontier.empty()) {
        std::vector<std::pair<CFString, CFString>> next;
        for (auto& p : frontier) {
            out.push_back(p);
            if (p.first.size() + p.second.size() + 1 > max_len) continue;
            next.push_back(grow_complementary_pair(p.first, p.second, 1));
            next.push_back(grow_complementary_pair(p.first, p.second, 2));
        }
        frontier = std::move(next);
    }
    return out;
}

namespace detail {

// Calls f on every valid descriptor of the row whose parameters are bounded by
// `bound` (integers) and whose b-pairs have total length <= bound.
inline void for_each_in_row(const RowSpec& r, Int bound, const std::function<void(FamilyDescriptor)>& f) {
    FamilyDescriptor base;
    base.source = r.source;
    base.row = r.row;
    base.I_value = r.I;
    std::vector<std::pair<CFString, CFString>> pairs;
    if (r.uses_b) pairs = complementary_pairs(static_cast<std::size_t>(std::max<Int>(bound, 0)));
    else pairs.push_back({});
    std::vector<std::string> names;
    for (const auto& m : r.mins) names.push_back(m.first);
    std::function<void(std::size_t, FamilyDescriptor&)> rec = [&](std::size_t i, FamilyDescriptor& d) {
        if (i == names.size()) {
            for (const auto& [b, c] : pairs) {
                FamilyDescriptor e = d;
                e.b = b;
                e.c = c;
                f(e);
            }
            return;
        }
        for (Int v = r.mins[i].second; v <= bound; ++v) {
            d.params[names[i]] = v;
            rec(i + 1, d);
        }
        d.params.erase(names[i]);
    };
    rec(0, base);
}

}  // namespace detail

// Every star-graph instance (thm_cl with all complementary L2/L3, thm_ncl) with
// at most max_n vertices.
inline std::vector<FamilyDescriptor> family_instances(std::size_t max_n) {
    std::vector<FamilyDescriptor> out;
    Int bound = static_cast<Int>(max_n);
    auto legs = complementary_pairs(max_n);
    for (const auto& r : detail::row_table()) {
        if (r.source == Source::lisca_linear) continue;
        detail::for_each_in_row(r, bound, [&](FamilyDescriptor d) {
            if (d.source == Source::thm_ncl) {
                if (ncl_graph(d).vertex_count() <= max_n) out.push_back(std::move(d));
                return;
            }
            std::size_t tl = cl_tuple(d).size();
            for (const auto& [l2, l3] : legs) {
                if (tl + l2.size() + l3.size() > max_n) continue;
                FamilyDescriptor e = d;
                e.leg2 = l2;
                e.leg3 = l3;
                out.push_back(std::move(e));
            }
        });
    }
    return out;
}

// Lisca strings of a given length, either orientation, matching s.
inline std::vector<FamilyDescriptor> lisca_matches(const CFString& s) {
    std::vector<FamilyDescriptor> out;
    Int bound = static_cast<Int>(s.size());
    CFString rs = reversed(s);
    for (const auto& r : detail::row_table()) {
        if (r.source != Source::lisca_linear) continue;
        detail::for_each_in_row(r, bound, [&](FamilyDescriptor d) {
            CFString x = lisca_string(d);
            if (x == s || x == rs) out.push_back(std::move(d));
        });
    }
    return out;
}

inline bool in_lisca_list(const CFString& s) { return !lisca_matches(s).empty(); }

namespace detail {

// Per vertex count: thm_ncl graphs and thm_cl tuples.
struct ClassifyIndex {
    std::map<PlumbingGraph, std::vector<FamilyDescriptor>, bool (*)(const PlumbingGraph&, const PlumbingGraph&)> ncl{
        [](const PlumbingGraph& a, const PlumbingGraph& b) {
            return std::make_pair(a.central, a.legs) < std::make_pair(b.central, b.legs);
        }};
    std::map<CFString, std::vector<FamilyDescriptor>> cl;
};

inline const ClassifyIndex& classify_index(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, ClassifyIndex> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    ClassifyIndex idx;
    Int bound = static_cast<Int>(n);
    for (const auto& r : row_table()) {
        if (r.source == Source::lisca_linear) continue;
        for_each_in_row(r, bound, [&](FamilyDescriptor d) {
            if (d.source == Source::thm_ncl) {
                auto g = normalized(ncl_graph(d));
                if (g.vertex_count() == n) idx.ncl[g].push_back(std::move(d));
                return;
            }
            CFString tup = cl_tuple(d);
            if (tup.size() + 2 <= n) idx.cl[tup].push_back(std::move(d));
        });
    }
    return cache.emplace(n, std::move(idx)).first->second;
}

}  // namespace detail

inline std::vector<FamilyDescriptor> classify(const PlumbingGraph& g) {
    std::vector<FamilyDescriptor> out;
    if (!g.is_star()) {
        for (Int a : g.legs[0])
            if (a < 2) return out;
        return lisca_matches(g.legs[0]);
    }
    for (const auto& l : g.legs)
        for (Int a : l)
            if (a < 2) return out;
    const auto& idx = detail::classify_index(g.vertex_count());
    if (auto it = idx.ncl.find(normalized(g)); it != idx.ncl.end()) out = it->second;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& l2 = g.legs[(i + 1) % 3];
        const auto& l3 = g.legs[(i + 2) % 3];
        if (!is_complementary(l2, l3)) continue;
        auto it = idx.cl.find(concat({reversed(g.legs[i]), {g.central}}));
        if (it == idx.cl.end()) continue;
        for (FamilyDescriptor e : it->second) {
            e.leg2 = std::min(l2, l3);
            e.leg3 = std::max(l2, l3);
            if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(std::move(e));
        }
    }
    return out;
}

// 1 + corank of Q over GF(2)
inline Int link_component_count(const PlumbingGraph& g) {
    auto q = intersection_matrix(g);
    std::size_t n = q.size();
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = (q[i][j] % 2) != 0;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < n; ++col) {
        std::size_t piv = rank;
        while (piv < n && !m[piv][col]) ++piv;
        if (piv == n) continue;
        std::swap(m[piv], m[rank]);
        for (std::size_t i = 0; i < n; ++i)
            if (i != rank && m[i][col])
                for (std::size_t j = col; j < n; ++j) m[i][j] = m[i][j] != m[rank][j];
        ++rank;
    }
    return 1 + static_cast<Int>(n - rank);
}

}  // namespace montesinos
