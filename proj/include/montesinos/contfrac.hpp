#pragma once

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace montesinos {

// p/q with p > q > 0 coprime
struct Fraction {
    Int p = 2;
    Int q = 1;

    Fraction() = default;
    Fraction(Int p_, Int q_) : p(p_), q(q_) {
        if (q <= 0) throw std::invalid_argument("fraction needs q > 0");
        if (p <= q) throw std::invalid_argument("fraction needs p > q");
        if (std::gcd(p, q) != 1) throw std::invalid_argument("fraction must be in lowest terms");
    }

    friend bool operator==(const Fraction&, const Fraction&) = default;
};

using CFString = std::vector<Int>;

inline void validate_string(const CFString& s) {
    if (s.empty()) throw std::invalid_argument("continued fraction string is empty");
    for (Int a : s)
        if (a < 2) throw std::invalid_argument("continued fraction entries must be >= 2");
}

inline CFString cf_expand(const Fraction& f) {
    Fraction g(f.p, f.q);
    CFString out;
    Int p = g.p, q = g.q;
    while (q > 0) {
        Int a = p / q + (p % q != 0 ? 1 : 0);
        out.push_back(a);
        Int r = checked_sub(checked_mul(a, q), p);
        p = q;
        q = r;
    }
    return out;
}

// Continuant pair (p, q) for an arbitrary integer string; no validity checks.
inline std::pair<Int, Int> continuant(const CFString& s) {
    Int p = 1, q = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        Int np = checked_sub(checked_mul(*it, p), q);
        q = p;
        p = np;
    }
    return {p, q};
}

inline Fraction cf_eval(const CFString& s) {
    validate_string(s);
    auto [p, q] = continuant(s);
    return Fraction(p, q);
}

// Riemenschneider point diagram: row i holds a_i - 1 points starting in the
// column where the previous row ended; column j then holds b_j - 1 points.
inline CFString point_rule_complement(const CFString& s) {
    validate_string(s);
    std::vector<Int> column_counts;
    std::size_t col = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        Int pts = s[i] - 1;
        for (Int k = 0; k < pts; ++k) {
            std::size_t c = col + static_cast<std::size_t>(k);
            if (c >= column_counts.size()) column_counts.resize(c + 1, 0);
            ++column_counts[c];
        }
        col += static_cast<std::size_t>(pts - 1);
    }
    CFString out;
    out.reserve(column_counts.size());
    for (Int c : column_counts) out.push_back(c + 1);
    return out;
}

inline bool is_complementary(const CFString& s1, const CFString& s2) {
    validate_string(s1);
    validate_string(s2);
    return point_rule_complement(s1) == s2;
}

inline std::pair<CFString, CFString> grow_complementary_pair(const CFString& s1, const CFString& s2, int op) {
    if (!is_complementary(s1, s2)) throw std::invalid_argument("strings are not complementary");
    CFString a = s1, b = s2;
    if (op == 1) {
        a.back() = checked_add(a.back(), 1);
        b.push_back(2);
    } else if (op == 2) {
        a.push_back(2);
        b.back() = checked_add(b.back(), 1);
    } else {
        throw std::invalid_argument("grow operation must be 1 or 2");
    }
    return {a, b};
}

inline CFString reversed(CFString s) {
    std::reverse(s.begin(), s.end());
    return s;
}

// "2^[t]" blocks
inline CFString twos(Int t) {
    if (t < 0) throw std::invalid_argument("negative block length");
    return CFString(static_cast<std::size_t>(t), 2);
}

inline CFString concat(std::initializer_list<CFString> parts) {
    CFString out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline Int parse_int(const std::string& tok) {
    std::string t = trim(tok);
    if (t.empty()) throw std::invalid_argument("empty integer token");
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer '" + t + "'");
    }
    if (pos != t.size()) throw std::invalid_argument("bad integer '" + t + "'");
    return static_cast<Int>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace detail

// Integer list without the >= 2 check (graph legs may carry weight 1).
inline std::vector<Int> parse_int_list(const std::string& text) {
    std::vector<Int> out;
    if (detail::trim(text).empty()) return out;
    for (const auto& tok : detail::split(text, ',')) out.push_back(detail::parse_int(tok));
    return out;
}

inline CFString parse_string(const std::string& text) {
    CFString s = parse_int_list(text);
    validate_string(s);
    return s;
}

inline std::string format_string(const CFString& s) { return join(s, ","); }

inline Fraction parse_fraction(const std::string& text) {
    auto parts = detail::split(text, '/');
    if (parts.size() != 2) throw std::invalid_argument("fraction must look like p/q");
    return Fraction(detail::parse_int(parts[0]), detail::parse_int(parts[1]));
}

inline std::string format_fraction(const Fraction& f) { return std::to_string(f.p) + "/" + std::to_string(f.q); }

}  // namespace montesinos
