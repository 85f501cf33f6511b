#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "embed.hpp"
#include "families.hpp"
#include "kirby.hpp"
#include "lattice.hpp"
#include "plumbing.hpp"

namespace montesinos {

// Direct generation: every composition of n - 1 into three leg lengths and
// every weight vector with a_0 >= 3, a_i >= 2, I < -1; legs sorted afterwards.
inline std::vector<PlumbingGraph> enumerate_wp_graphs(std::size_t n) {
    if (n < 4) throw std::invalid_argument("wp graphs need n >= 4");
    std::set<std::vector<Int>> seen;
    std::vector<PlumbingGraph> out;
    Int maxa = static_cast<Int>(n) + 1;
    for (std::size_t n1 = 1; n1 + 2 < n; ++n1)
        for (std::size_t n2 = 1; n1 + n2 + 1 < n; ++n2) {
            std::vector<Int> w(n, 0);
            std::function<void(std::size_t, Int)> rec = [&](std::size_t i, Int I) {
                if (i == n) {
                    if (I >= -1) return;
                    std::vector<Int> l1(w.begin() + 1, w.begin() + 1 + static_cast<long>(n1));
                    std::vector<Int> l2(w.begin() + 1 + static_cast<long>(n1), w.begin() + 1 + static_cast<long>(n1 + n2));
                    std::vector<Int> l3(w.begin() + 1 + static_cast<long>(n1 + n2), w.end());
                    auto g = normalized(PlumbingGraph::star(w[0], l1, l2, l3));
                    auto key = g.weights();
                    key.push_back(static_cast<Int>(g.legs[0].size()));
                    key.push_back(static_cast<Int>(g.legs[1].size()));
                    if (seen.insert(key).second) out.push_back(g);
                    return;
                }
                // remaining vertices each contribute at least -1
                Int rest = -static_cast<Int>(n - i - 1);
                for (Int a = i == 0 ? 3 : 2; a <= maxa; ++a) {
                    if (I + (a - 3) + rest >= -1) break;
                    w[i] = a;
                    rec(i + 1, I + a - 3);
                }
            };
            rec(0, 0);
        }
    std::sort(out.begin(), out.end(), [](const PlumbingGraph& a, const PlumbingGraph& b) {
        return std::make_pair(a.central, a.legs) < std::make_pair(b.central, b.legs);
    });
    return out;
}

// Independent enumeration: legs drawn from a pool of strings, chosen as a
// nondecreasing triple so that each graph appears once.
inline std::vector<PlumbingGraph> enumerate_wp_graphs_by_legs(std::size_t n) {
    std::vector<CFString> pool;
    Int maxa = static_cast<Int>(n) + 1;
    CFString cur;
    std::function<void()> grow = [&] {
        if (!cur.empty()) pool.push_back(cur);
        if (cur.size() + 3 > n) return;
        for (Int a = 2; a <= maxa; ++a) {
            cur.push_back(a);
            grow();
            cur.pop_back();
        }
    };
    grow();
    auto Iof = [](const CFString& s) {
        Int t = 0;
        for (Int a : s) t += a - 3;
        return t;
    };
    // every other vertex contributes at least -1 to I < -1
    std::erase_if(pool, [&](const CFString& s) { return Iof(s) > static_cast<Int>(n) - static_cast<Int>(s.size()) - 3; });
    std::sort(pool.begin(), pool.end());
    std::vector<std::vector<std::size_t>> by_len(n);
    for (std::size_t i = 0; i < pool.size(); ++i) by_len[pool[i].size()].push_back(i);
    std::vector<PlumbingGraph> out;
    for (std::size_t i = 0; i < pool.size(); ++i)
        for (std::size_t j = i; j < pool.size(); ++j) {
            if (pool[i].size() + pool[j].size() + 2 > n) continue;
            std::size_t want = n - 1 - pool[i].size() - pool[j].size();
            const auto& bucket = by_len[want];
            for (auto it = std::lower_bound(bucket.begin(), bucket.end(), j); it != bucket.end(); ++it) {
                const auto& k = pool[*it];
                Int legsI = Iof(pool[i]) + Iof(pool[j]) + Iof(k);
                for (Int a0 = 3; a0 - 3 + legsI < -1; ++a0) out.push_back(PlumbingGraph::star(a0, pool[i], pool[j], k));
            }
        }
    std::sort(out.begin(), out.end(), [](const PlumbingGraph& a, const PlumbingGraph& b) {
        return std::make_pair(a.central, a.legs) < std::make_pair(b.central, b.legs);
    });
    return out;
}

inline std::string canonical_graph_text(const PlumbingGraph& g) { return format_graph(normalized(g)); }

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::found: return "embeddable";
        case Verdict::not_found: return "not-embeddable";
        case Verdict::budget_exhausted: return "budget";
    }
    return "?";
}

inline Verdict parse_verdict(const std::string& s) {
    if (s == "embeddable") return Verdict::found;
    if (s == "not-embeddable") return Verdict::not_found;
    if (s == "budget") return Verdict::budget_exhausted;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

// Plain-text verdict cache: `<canonical graph> | <verdict> | <nodes>` per line.
class ResultLedger {
public:
    struct Entry {
        Verdict verdict;
        std::uint64_t nodes;
    };

    ResultLedger() = default;
    explicit ResultLedger(std::string path) : path_(std::move(path)) {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            auto parts = detail::split(line, '|');
            if (parts.size() != 3) continue;
            entries_[detail::trim(parts[0])] = {parse_verdict(detail::trim(parts[1])),
                                                static_cast<std::uint64_t>(detail::parse_int(parts[2]))};
        }
    }

    std::optional<Entry> lookup(const PlumbingGraph& g) const {
        auto it = entries_.find(canonical_graph_text(g));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    void record(const PlumbingGraph& g, Verdict v, std::uint64_t nodes) {
        if (v == Verdict::budget_exhausted) return;
        auto key = canonical_graph_text(g);
        if (!entries_.emplace(key, Entry{v, nodes}).second) return;
        if (path_.empty()) return;
        std::ofstream out(path_, std::ios::app);
        out << key << " | " << verdict_name(v) << " | " << nodes << "\n";
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::string path_;
    std::map<std::string, Entry> entries_;
};

struct GraphVerdict {
    PlumbingGraph graph;
    Int I = 0;
    Int det = 0;
    Verdict verdict = Verdict::not_found;
    std::uint64_t nodes = 0;
    bool from_cache = false;
    std::optional<EmbeddingCertificate> certificate;
    std::vector<FamilyDescriptor> families;
};

inline std::string report_line(const GraphVerdict& v) {
    std::string fam = "none";
    if (!v.families.empty()) {
        fam.clear();
        for (std::size_t i = 0; i < v.families.size(); ++i) fam += (i ? " " : "") + format_descriptor(v.families[i]);
    }
    return "graph = " + format_graph(v.graph) + " | I = " + std::to_string(v.I) + " | det = " + std::to_string(v.det) +
           " | embeddable = " + (v.verdict == Verdict::found ? "yes" : v.verdict == Verdict::not_found ? "no" : "budget") +
           " | family = " + fam;
}

// Good sets with a trivalent vertex: star shapes whose non-root leg edges may
// be switched off (gamma = 0), grouped by the resulting weighted graph.
struct GoodClass {
    std::string graph;  // connected star part, then detached paths
    Int I = 0;
    std::vector<ConfiguredSet> certificates;  // one per O(n;Z) class
};

struct ClassificationReport {
    std::size_t n = 0;
    std::vector<GraphVerdict> graphs;
    std::size_t embeddable = 0;
    std::size_t naive_checked = 0;
    std::size_t naive_disagreements = 0;
    std::size_t p_checked = 0;
    std::size_t p_violations = 0;
    std::vector<GoodClass> good_classes;
    std::vector<std::string> failures;
    double seconds = 0;

    bool ok() const { return failures.empty(); }
};

struct ClassificationOptions {
    SearchLimits limits;
    bool cross_check_naive = false;
    bool good_sets = false;
    ResultLedger* ledger = nullptr;
};

namespace detail {

struct GammaShape {
    Int a0 = 3;
    std::vector<std::vector<std::pair<Int, bool>>> legs;  // (a, gamma to previous)
};

inline IntMatrix gamma_dots(const GammaShape& s, std::vector<std::size_t>& order_out) {
    std::vector<Int> w{s.a0};
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (const auto& leg : s.legs) {
        std::size_t prev = 0;
        for (auto [a, gam] : leg) {
            w.push_back(a);
            if (gam) edges.emplace_back(prev, w.size() - 1);
            prev = w.size() - 1;
        }
    }
    std::size_t m = w.size();
    IntMatrix d(m, std::vector<Int>(m, 0));
    for (std::size_t i = 0; i < m; ++i) d[i][i] = w[i];
    for (auto [x, y] : edges) d[x][y] = d[y][x] = -1;
    std::vector<std::vector<std::size_t>> adj(m);
    for (auto [x, y] : edges) {
        adj[x].push_back(y);
        adj[y].push_back(x);
    }
    order_out.clear();
    std::vector<bool> seen(m, false);
    for (std::size_t st = 0; st < m; ++st) {
        if (seen[st]) continue;
        std::vector<std::size_t> q{st};
        seen[st] = true;
        for (std::size_t h = 0; h < q.size(); ++h) {
            order_out.push_back(q[h]);
            for (std::size_t y : adj[q[h]])
                if (!seen[y]) {
                    seen[y] = true;
                    q.push_back(y);
                }
        }
    }
    return d;
}

inline std::string gamma_graph_key(const GammaShape& s) {
    std::vector<CFString> attached, detached;
    for (const auto& leg : s.legs) {
        CFString head, piece;
        bool cut = false;
        for (std::size_t i = 0; i < leg.size(); ++i) {
            if (i > 0 && !leg[i].second) {
                if (cut) detached.push_back(piece);
                else attached.push_back(head);
                cut = true;
                piece.clear();
            }
            (cut ? piece : head).push_back(leg[i].first);
        }
        if (cut) detached.push_back(piece);
        else attached.push_back(head);
    }
    std::sort(attached.begin(), attached.end());
    for (auto& p : detached) p = std::min(p, reversed(p));
    std::sort(detached.begin(), detached.end());
    std::string out = std::to_string(s.a0);
    for (const auto& l : attached) out += "; " + join(l, ",");
    for (const auto& p : detached) out += " + " + join(p, ",");
    return out;
}

}  // namespace detail

// Invariant of a vector family under signed coordinate permutations and
// relabelings of its members: least (Gram, columns) over all row orders.
inline std::pair<IntMatrix, std::vector<LatticeVector>> orbit_key(std::vector<LatticeVector> rows, std::size_t n) {
    std::vector<std::size_t> idx(rows.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::optional<std::pair<IntMatrix, std::vector<LatticeVector>>> best;
    do {
        std::vector<LatticeVector> r;
        for (std::size_t i : idx) r.push_back(rows[i]);
        auto g = gram(r);
        if (best && best->first < g) continue;
        auto key = std::make_pair(std::move(g), detail::canonical_columns(r, n));
        if (!best || key < *best) best = std::move(key);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return *best;
}

inline std::vector<GoodClass> good_set_classes(std::size_t n, const SearchLimits& lim = {}) {
    std::map<std::string, GoodClass> classes;
    Int maxa = static_cast<Int>(n) + 1;
    std::vector<Int> w(n);
    for (std::size_t n1 = 1; n1 + 2 < n; ++n1)
        for (std::size_t n2 = 1; n1 + n2 + 1 < n; ++n2) {
            std::size_t n3 = n - 1 - n1 - n2;
            std::size_t inner = n - 4;  // non-root leg edges
            std::function<void(std::size_t, Int)> rec = [&](std::size_t i, Int I) {
                if (i < n) {
                    Int rest = -static_cast<Int>(n - i - 1);
                    for (Int a = i == 0 ? 3 : 2; a <= maxa; ++a) {
                        if (I + (a - 3) + rest >= -1) break;
                        w[i] = a;
                        rec(i + 1, I + a - 3);
                    }
                    return;
                }
                for (std::size_t mask = 0; mask < (std::size_t{1} << inner); ++mask) {
                    detail::GammaShape s;
                    s.a0 = w[0];
                    std::size_t k = 1, bit = 0;
                    for (std::size_t len : {n1, n2, n3}) {
                        std::vector<std::pair<Int, bool>> leg;
                        for (std::size_t p = 0; p < len; ++p) {
                            bool gam = p == 0 ? true : ((mask >> bit++) & 1) != 0;
                            leg.emplace_back(w[k++], gam);
                        }
                        s.legs.push_back(std::move(leg));
                    }
                    std::vector<std::size_t> order;
                    auto dots = detail::gamma_dots(s, order);
                    std::set<std::pair<IntMatrix, std::vector<LatticeVector>>> forms;
                    std::vector<ConfiguredSet> certs;
                    SearchLimits l = lim;
                    l.require_irreducible = true;
                    auto res = realize_gram(dots, n, order, l, [&](const std::vector<LatticeVector>& vs) {
                        ConfiguredSet cs;
                        cs.n = n;
                        cs.vectors = vs;
                        cs.shape = SetShape::star3;
                        cs.roles = {{0, 0}};
                        for (int leg = 1; leg <= 3; ++leg)
                            for (std::size_t p = 1; p <= s.legs[static_cast<std::size_t>(leg - 1)].size(); ++p)
                                cs.roles.push_back({leg, static_cast<int>(p)});
                        if (forms.insert(orbit_key(vs, n)).second) certs.push_back(canonicalize(cs));
                        return false;
                    });
                    if (res.verdict == Verdict::budget_exhausted) throw std::runtime_error("good-set search ran out of budget");
                    if (certs.empty()) continue;
                    auto key = detail::gamma_graph_key(s);
                    auto& gc = classes[key];
                    gc.graph = key;
                    gc.I = I;
                    for (auto& c : certs) {
                        auto key = orbit_key(c.vectors, n);
                        bool dup = false;
                        for (const auto& e : gc.certificates) dup = dup || orbit_key(e.vectors, n) == key;
                        if (!dup) gc.certificates.push_back(std::move(c));
                    }
                }
            };
            rec(0, 0);
        }
    std::vector<GoodClass> out;
    for (auto& [k, v] : classes) out.push_back(std::move(v));
    std::sort(out.begin(), out.end(), [](const GoodClass& a, const GoodClass& b) { return a.I < b.I; });
    return out;
}

// Legs-2/3 complementary orderings of g, if any.
inline std::vector<PlumbingGraph> complementary_orderings(const PlumbingGraph& g) {
    std::vector<PlumbingGraph> out;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& x = g.legs[(i + 1) % 3];
        const auto& y = g.legs[(i + 2) % 3];
        if (is_complementary(x, y)) out.push_back(PlumbingGraph::star(g.central, g.legs[i], x, y));
    }
    return out;
}

inline GraphVerdict judge_graph(const PlumbingGraph& g, const SearchLimits& lim, ResultLedger* ledger, bool need_certificate) {
    GraphVerdict v;
    v.graph = g;
    v.I = quantity_I(g);
    v.det = determinant(g);
    if (ledger) {
        auto e = ledger->lookup(g);
        if (e && (!need_certificate || e->verdict != Verdict::found)) {
            v.verdict = e->verdict;
            v.nodes = e->nodes;
            v.from_cache = true;
            return v;
        }
    }
    auto res = find_embedding(g, lim);
    v.verdict = res.verdict;
    v.nodes = res.nodes;
    v.certificate = res.certificate;
    if (ledger) ledger->record(g, res.verdict, res.nodes);
    return v;
}

inline ClassificationReport verify_classification(std::size_t n, const ClassificationOptions& opt = {}) {
    auto t0 = std::chrono::steady_clock::now();
    ClassificationReport rep;
    rep.n = n;
    for (const auto& g : enumerate_wp_graphs(n)) {
        auto v = judge_graph(g, opt.limits, opt.ledger, true);
        v.families = classify(g);
        std::string tag = format_graph(g);
        if (v.verdict == Verdict::budget_exhausted) {
            rep.failures.push_back("budget exhausted on " + tag);
        } else {
            bool emb = v.verdict == Verdict::found;
            if (emb) ++rep.embeddable;
            if (emb && v.families.empty()) rep.failures.push_back("embeddable but unclassified: " + tag);
            if (!emb && !v.families.empty()) rep.failures.push_back("classified but not embeddable: " + tag);
            if (emb && (v.I < -4 || v.I > -2)) rep.failures.push_back("embeddable with I outside [-4,-2]: " + tag);
            if (emb && v.I < 0) {
                ++rep.p_checked;
                if (!p_inequality_holds(make_set(g, v.certificate->assignment))) {
                    ++rep.p_violations;
                    rep.failures.push_back("p-inequality fails on " + tag);
                }
            }
            if (emb) {
                auto ords = complementary_orderings(g);
                if (!ords.empty()) {
                    bool any = false;
                    for (const auto& h : ords) any = any || ribbon_reduction_cl(h).in_lisca_list;
                    if (!any) rep.failures.push_back("lens string outside the linear lists: " + tag);
                }
            }
            if (opt.cross_check_naive) {
                ++rep.naive_checked;
                if (naive_embeds(g) != emb) {
                    ++rep.naive_disagreements;
                    rep.failures.push_back("naive oracle disagrees on " + tag);
                }
            }
        }
        rep.graphs.push_back(std::move(v));
    }
    if (n == 4 && rep.embeddable != 0) rep.failures.push_back("n = 4 has embeddable graphs");
    if (opt.good_sets || n == 5) {
        rep.good_classes = good_set_classes(n, opt.limits);
        for (const auto& c : rep.good_classes)
            for (const auto& cs : c.certificates) {
                ++rep.p_checked;
                if (c.I < 0 && !p_inequality_holds(cs)) {
                    ++rep.p_violations;
                    rep.failures.push_back("p-inequality fails on good set " + c.graph);
                }
            }
        if (n == 5) {
            std::multiset<Int> Is;
            for (const auto& c : rep.good_classes) Is.insert(c.I);
            if (rep.good_classes.size() != 3 || Is != std::multiset<Int>{-4, -3, -2})
                rep.failures.push_back("n = 5 good sets do not form 3 classes with I = -4, -3, -2");
        }
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

struct FamilyCheck {
    FamilyDescriptor descriptor;
    PlumbingGraph graph;
    bool in_wp = false;
    bool I_matches = false;
    Verdict verdict = Verdict::not_found;
    bool p_inequality = true;
    std::optional<bool> in_lisca;  // thm_cl only
    bool ok() const {
        return in_wp && I_matches && verdict == Verdict::found && p_inequality && in_lisca.value_or(true);
    }
};

struct FamilyReport {
    std::size_t max_n = 0;
    std::vector<FamilyCheck> checks;
    std::size_t p_checked = 0;
    std::size_t p_violations = 0;
    std::vector<std::string> failures;
    double seconds = 0;
    bool ok() const { return failures.empty(); }
};

// Integer parameters bounded by param_max and string pairs by pair_max total
// length (in addition to the vertex bound).
inline std::vector<FamilyDescriptor> bounded_instances(std::size_t max_n, Int param_max, std::size_t pair_max) {
    std::vector<FamilyDescriptor> out;
    for (auto& d : family_instances(max_n)) {
        bool keep = true;
        for (const auto& [k, v] : d.params) keep = keep && v <= param_max;
        keep = keep && d.b.size() + d.c.size() <= pair_max;
        keep = keep && d.leg2.size() + d.leg3.size() <= pair_max;
        if (keep) out.push_back(std::move(d));
    }
    return out;
}

inline FamilyReport verify_families(std::size_t max_n, Int param_max = 3, std::size_t pair_max = 5, const SearchLimits& lim = {},
                                    ResultLedger* ledger = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    FamilyReport rep;
    rep.max_n = max_n;
    for (auto& d : bounded_instances(max_n, param_max, pair_max)) {
        FamilyCheck c;
        c.descriptor = d;
        c.graph = generate_graph(d);
        c.in_wp = is_in_wp(c.graph);
        c.I_matches = quantity_I(c.graph) == d.I_value;
        auto v = judge_graph(c.graph, lim, ledger, true);
        c.verdict = v.verdict;
        if (v.certificate && quantity_I(c.graph) < 0) {
            ++rep.p_checked;
            c.p_inequality = p_inequality_holds(make_set(c.graph, v.certificate->assignment));
            if (!c.p_inequality) ++rep.p_violations;
        }
        if (d.source == Source::thm_cl) c.in_lisca = ribbon_reduction_cl(c.graph).in_lisca_list;
        if (!c.ok()) rep.failures.push_back(format_descriptor(d) + " -> " + format_graph(c.graph) + " (" + verdict_name(c.verdict) + ")");
        rep.checks.push_back(std::move(c));
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace montesinos
