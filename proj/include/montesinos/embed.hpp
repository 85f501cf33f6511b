#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "arith.hpp"
#include "lattice.hpp"
#include "plumbing.hpp"

namespace montesinos {

struct SearchLimits {
    Int max_abs_coordinate = 0;  // 0: derive from the weights
    std::uint64_t node_budget = 200'000'000;
    bool deterministic = true;
    bool symmetry_breaking = true;
    bool require_irreducible = false;
    unsigned workers = 0;  // parallel mode only; 0 = hardware concurrency
};

enum class Verdict { found, not_found, budget_exhausted };

struct EmbeddingCertificate {
    std::vector<LatticeVector> assignment;  // plumbing vertex order
};

struct SearchResult {
    Verdict verdict = Verdict::not_found;
    std::optional<EmbeddingCertificate> certificate;
    std::uint64_t nodes = 0;
    bool parallel = false;
};

inline IntMatrix gram_of(const EmbeddingCertificate& c) { return gram(c.assignment); }

inline bool verify_certificate(const PlumbingGraph& g, const EmbeddingCertificate& c) {
    if (c.assignment.size() != g.vertex_count()) throw std::invalid_argument("certificate size differs from vertex count");
    for (const auto& v : c.assignment)
        if (v.size() != c.assignment[0].size()) throw std::invalid_argument("certificate vectors of mixed dimension");
    return gram_of(c) == intersection_matrix(g);
}

// Finds an ordering of `vectors` whose Gram matrix is intersection_matrix(g).
inline std::optional<std::vector<std::size_t>> match_certificate(const PlumbingGraph& g, const std::vector<LatticeVector>& vectors) {
    auto q = intersection_matrix(g);
    auto gm = gram(vectors);
    std::size_t m = q.size();
    if (vectors.size() != m) return std::nullopt;
    std::vector<std::size_t> perm(m);
    std::vector<bool> used(m, false);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == m) return true;
        for (std::size_t c = 0; c < m; ++c) {
            if (used[c]) continue;
            bool ok = gm[c][c] == q[i][i];
            for (std::size_t j = 0; ok && j < i; ++j) ok = gm[c][perm[j]] == q[i][j];
            if (!ok) continue;
            used[c] = true;
            perm[i] = c;
            if (rec(i + 1)) return true;
            used[c] = false;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return perm;
}

// Center first, then breadth-first through the legs.
inline std::vector<std::size_t> search_order(const PlumbingGraph& g) {
    std::size_t n = g.vertex_count();
    std::vector<std::vector<std::size_t>> adj(n);
    for (auto [a, b] : g.edges()) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::size_t> order;
    std::vector<bool> seen(n, false);
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<std::size_t> queue{s};
        seen[s] = true;
        for (std::size_t h = 0; h < queue.size(); ++h) {
            order.push_back(queue[h]);
            for (std::size_t w : adj[queue[h]])
                if (!seen[w]) {
                    seen[w] = true;
                    queue.push_back(w);
                }
        }
    }
    return order;
}

namespace detail {

// Depth-first realization of a Gram matrix by vectors of Z^n. Vertex k (in
// search order) must have squared length target[k][k] and Euclidean products
// target[k][j] with every earlier vertex. With symmetry breaking, coordinates
// never touched so far appear only as a leading block of positive,
// nonincreasing entries.
class GramSearch {
public:
    GramSearch(IntMatrix dots, std::size_t n, Int bound, std::uint64_t budget, bool sym,
               std::function<bool(const std::vector<LatticeVector>&)> accept)
        : dots_(std::move(dots)), n_(n), bound_(bound), budget_(budget), sym_(sym), accept_(std::move(accept)) {
        m_ = dots_.size();
        vecs_.assign(m_, LatticeVector(n_, 0));
        suffix_.assign(m_, std::vector<Int>(n_ + 1, 0));
    }

    // Returns true when accept() asked to stop.
    bool run() { return place(0, 0); }
    std::uint64_t nodes() const { return nodes_; }
    bool exhausted() const { return exhausted_; }
    const std::vector<LatticeVector>& vectors() const { return vecs_; }

    std::atomic<bool>* stop_flag = nullptr;
    std::atomic<std::uint64_t>* shared_nodes = nullptr;
    // Restricts the first vertex to candidates with index % stride == offset.
    std::size_t stride = 1, offset = 0;

private:
    IntMatrix dots_;
    std::size_t n_, m_;
    Int bound_;
    std::uint64_t budget_;
    bool sym_;
    std::function<bool(const std::vector<LatticeVector>&)> accept_;
    std::vector<LatticeVector> vecs_;
    std::vector<std::vector<Int>> suffix_;
    std::uint64_t nodes_ = 0;
    bool exhausted_ = false;
    std::size_t first_counter_ = 0;

    bool halted() const { return exhausted_ || (stop_flag && stop_flag->load(std::memory_order_relaxed)); }

    bool count_node() {
        ++nodes_;
        std::uint64_t total = nodes_;
        if (shared_nodes) total = shared_nodes->fetch_add(1, std::memory_order_relaxed) + 1;
        if (total > budget_) {
            exhausted_ = true;
            return false;
        }
        return true;
    }

    bool place(std::size_t k, std::size_t used) {
        if (k == m_) return accept_(vecs_);
        Int a = dots_[k][k];
        if (a < 0) return false;
        for (std::size_t j = 0; j < k; ++j) {
            Int s = 0;
            for (std::size_t c = n_; c-- > 0;) {
                s += vecs_[j][c] * vecs_[j][c];
                suffix_[j][c] = s;
            }
        }
        std::vector<Int> partial(k, 0);
        LatticeVector& v = vecs_[k];
        std::fill(v.begin(), v.end(), 0);
        return used_coords(k, 0, used, a, partial);
    }

    bool used_coords(std::size_t k, std::size_t c, std::size_t used, Int rem, std::vector<Int>& partial) {
        if (halted()) return false;
        LatticeVector& v = vecs_[k];
        if (c == used) {
            for (std::size_t j = 0; j < k; ++j)
                if (partial[j] != dots_[k][j]) return false;
            return fresh_coords(k, used, rem, rem);
        }
        Int lim = std::min(bound_, isqrt(rem));
        for (Int x = -lim; x <= lim; ++x) {
            Int r2 = rem - x * x;
            bool ok = true;
            for (std::size_t j = 0; j < k && ok; ++j) {
                Int p = partial[j] + x * vecs_[j][c];
                Int gap = dots_[k][j] - p;
                if (gap * gap > r2 * suffix_[j][c + 1]) ok = false;
            }
            if (!ok) continue;
            v[c] = x;
            for (std::size_t j = 0; j < k; ++j) partial[j] += x * vecs_[j][c];
            bool stop = used_coords(k, c + 1, used, r2, partial);
            for (std::size_t j = 0; j < k; ++j) partial[j] -= x * vecs_[j][c];
            v[c] = 0;
            if (stop) return true;
            if (halted()) return false;
        }
        return false;
    }

    bool fresh_coords(std::size_t k, std::size_t c, Int rem, Int cap) {
        LatticeVector& v = vecs_[k];
        if (rem == 0) {
            if (k == 0 && stride > 1 && (first_counter_++ % stride) != offset) return false;
            if (!count_node()) return false;
            return place(k + 1, c);
        }
        if (c >= n_) return false;
        if (sym_) {
            Int lim = std::min({bound_, isqrt(rem), cap});
            for (Int x = lim; x >= 1; --x) {
                v[c] = x;
                bool stop = fresh_coords(k, c + 1, rem - x * x, x);
                v[c] = 0;
                if (stop) return true;
                if (halted()) return false;
            }
            return false;
        }
        // without symmetry breaking every coordinate past `used` is free
        Int lim = std::min(bound_, isqrt(rem));
        for (Int x = -lim; x <= lim; ++x) {
            v[c] = x;
            bool stop = fresh_coords(k, c + 1, rem - x * x, cap);
            v[c] = 0;
            if (stop) return true;
            if (halted()) return false;
        }
        return false;
    }
};

inline Int default_bound(const IntMatrix& dots) {
    Int a = 0;
    for (std::size_t i = 0; i < dots.size(); ++i) a = std::max(a, dots[i][i]);
    return std::max<Int>(1, isqrt(a));
}

}  // namespace detail

// Calls visit() on each realization (vectors in the caller's vertex order)
// until it returns true; `dots` holds Euclidean products, i.e. -Q.
inline SearchResult realize_gram(const IntMatrix& dots, std::size_t n, const std::vector<std::size_t>& order, const SearchLimits& lim,
                                 const std::function<bool(const std::vector<LatticeVector>&)>& visit) {
    std::size_t m = dots.size();
    IntMatrix permuted(m, std::vector<Int>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) permuted[i][j] = dots[order[i]][order[j]];
    Int bound = detail::default_bound(dots);
    if (lim.max_abs_coordinate > 0) bound = std::min(bound, lim.max_abs_coordinate);

    SearchResult res;
    std::vector<LatticeVector> found;
    auto unpermute = [&](const std::vector<LatticeVector>& vs) {
        std::vector<LatticeVector> out(m);
        for (std::size_t i = 0; i < m; ++i) out[order[i]] = vs[i];
        return out;
    };
    auto accept = [&](const std::vector<LatticeVector>& vs) {
        auto out = unpermute(vs);
        if (lim.require_irreducible) {
            ConfiguredSet tmp;
            tmp.n = n;
            tmp.vectors = out;
            if (!is_irreducible(tmp)) return false;
        }
        if (visit(out)) {
            found = std::move(out);
            return true;
        }
        return false;
    };

    if (lim.deterministic) {
        detail::GramSearch s(permuted, n, bound, lim.node_budget, lim.symmetry_breaking, accept);
        bool stop = s.run();
        res.nodes = s.nodes();
        if (stop) {
            res.verdict = Verdict::found;
            res.certificate = EmbeddingCertificate{found};
        } else {
            res.verdict = s.exhausted() ? Verdict::budget_exhausted : Verdict::not_found;
        }
        return res;
    }

    unsigned workers = lim.workers ? lim.workers : std::max(1u, std::thread::hardware_concurrency());
    std::atomic<bool> stop_flag{false};
    std::atomic<std::uint64_t> nodes{0};
    std::mutex mu;
    bool any_exhausted = false;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            auto guarded = [&](const std::vector<LatticeVector>& vs) {
                std::lock_guard<std::mutex> lock(mu);
                if (stop_flag.load()) return true;
                if (accept(vs)) {
                    stop_flag.store(true);
                    return true;
                }
                return false;
            };
            detail::GramSearch s(permuted, n, bound, lim.node_budget, lim.symmetry_breaking, guarded);
            s.stop_flag = &stop_flag;
            s.shared_nodes = &nodes;
            s.stride = workers;
            s.offset = w;
            s.run();
            if (s.exhausted()) {
                std::lock_guard<std::mutex> lock(mu);
                any_exhausted = true;
                stop_flag.store(true);
            }
        });
    }
    for (auto& t : pool) t.join();
    res.parallel = true;
    res.nodes = nodes.load();
    if (!found.empty() || (m == 0 && stop_flag.load())) {
        res.verdict = Verdict::found;
        res.certificate = EmbeddingCertificate{found};
    } else {
        res.verdict = any_exhausted ? Verdict::budget_exhausted : Verdict::not_found;
    }
    return res;
}

inline IntMatrix euclidean_targets(const IntMatrix& q) {
    IntMatrix d = q;
    for (auto& row : d)
        for (auto& x : row) x = -x;
    return d;
}

inline SearchResult find_embedding(const PlumbingGraph& g, const SearchLimits& lim = {}) {
    g.validate();
    std::size_t n = g.vertex_count();
    auto q = intersection_matrix(g);
    auto res = realize_gram(euclidean_targets(q), n, search_order(g), lim, [](const auto&) { return true; });
    if (res.certificate && !verify_certificate(g, *res.certificate))
        throw std::logic_error("search produced a certificate with the wrong Gram matrix");
    return res;
}

// Independent check: every vector of the right norm, assigned in plain vertex
// order. Only the first vector is normalized (nonnegative, nonincreasing).
inline bool naive_embeds(const PlumbingGraph& g) {
    auto q = intersection_matrix(g);
    std::size_t m = q.size(), n = m;
    std::map<Int, std::vector<LatticeVector>> pools;
    for (std::size_t i = 0; i < m; ++i) {
        Int a = -q[i][i];
        if (pools.count(a)) continue;
        std::vector<LatticeVector> pool;
        if (a >= 0) {
            Int b = isqrt(a);
            LatticeVector v(n, 0);
            std::function<void(std::size_t, Int)> gen = [&](std::size_t c, Int rem) {
                if (c == n) {
                    if (rem == 0) pool.push_back(v);
                    return;
                }
                for (Int x = -b; x <= b; ++x) {
                    if (x * x > rem) continue;
                    v[c] = x;
                    gen(c + 1, rem - x * x);
                }
                v[c] = 0;
            };
            gen(0, a);
        }
        pools[a] = std::move(pool);
    }
    std::vector<const LatticeVector*> chosen(m, nullptr);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        if (i == m) return true;
        for (const auto& cand : pools[-q[i][i]]) {
            if (i == 0 && !std::is_sorted(cand.begin(), cand.end(), std::greater<Int>())) continue;
            if (i == 0 && cand.back() < 0) continue;
            bool ok = true;
            for (std::size_t j = 0; j < i && ok; ++j) {
                Int s = 0;
                for (std::size_t c = 0; c < n; ++c) s += cand[c] * (*chosen[j])[c];
                ok = -s == q[i][j];
            }
            if (!ok) continue;
            chosen[i] = &cand;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

inline std::string format_certificate(const PlumbingGraph& g, const EmbeddingCertificate& c) {
    std::string out = "graph = " + format_graph(g) + "\n";
    out += format_set(make_set(g, c.assignment));
    return out;
}

}  // namespace montesinos
