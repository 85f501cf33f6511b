#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace montesinos {

using Int = std::int64_t;
using IntMatrix = std::vector<std::vector<Int>>;

struct overflow_error : std::overflow_error {
    using std::overflow_error::overflow_error;
};

inline Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw overflow_error("integer overflow in addition");
    return r;
}

inline Int checked_sub(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw overflow_error("integer overflow in subtraction");
    return r;
}

inline Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("integer overflow in multiplication");
    return r;
}

inline Int narrow(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw overflow_error("value does not fit in 64 bits");
    return static_cast<Int>(v);
}

inline Int iabs(Int a) {
    if (a == INT64_MIN) throw overflow_error("abs of INT64_MIN");
    return a < 0 ? -a : a;
}

// floor(sqrt(a)) for a >= 0
inline Int isqrt(Int a) {
    if (a < 0) throw std::invalid_argument("isqrt of negative value");
    Int r = 0;
    while ((r + 1) * (r + 1) <= a) ++r;
    return r;
}

template <class T>
std::string join(const std::vector<T>& xs, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += std::to_string(xs[i]);
    }
    return out;
}

}  // namespace montesinos
