#ifndef QUADCHROMA_INT128_HPP
#define QUADCHROMA_INT128_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace quadchroma {

using int128 = __int128;
using uint128 = unsigned __int128;

// Exact counts (census totals, binomials) are carried as 128-bit signed integers.
using count_t = int128;

inline std::string to_string(int128 value)
{
    if (value == 0) return "0";
    const bool negative = value < 0;
    // Work in the unsigned domain so INT128_MIN does not overflow on negation.
    uint128 magnitude = negative ? uint128(0) - uint128(value) : uint128(value);
    std::string digits;
    while (magnitude != 0) {
        digits.push_back(char('0' + int(magnitude % 10)));
        magnitude /= 10;
    }
    if (negative) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

inline int128 parse_int128(std::string_view text)
{
    if (text.empty()) throw std::invalid_argument("empty integer literal");
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    if (pos == text.size()) throw std::invalid_argument("integer literal without digits");
    constexpr int128 kLimit = int128((~uint128(0)) >> 1);
    int128 value = 0;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (c < '0' || c > '9') throw std::invalid_argument("bad digit in integer literal: " + std::string(text));
        if (value > (kLimit - (c - '0')) / 10) throw std::out_of_range("integer literal exceeds 128 bits");
        value = value * 10 + (c - '0');
    }
    return negative ? -value : value;
}

constexpr int sign_of(int128 v) { return (v > 0) - (v < 0); }

constexpr int128 abs128(int128 v) { return v < 0 ? -v : v; }

constexpr int128 gcd128(int128 a, int128 b)
{
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        const int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline int128 checked_mul(int128 a, int128 b)
{
    int128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("128-bit multiplication overflow");
    return out;
}

inline int128 checked_add(int128 a, int128 b)
{
    int128 out;
    if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("128-bit addition overflow");
    return out;
}

inline int128 checked_sub(int128 a, int128 b)
{
    int128 out;
    if (__builtin_sub_overflow(a, b, &out)) throw std::overflow_error("128-bit subtraction overflow");
    return out;
}

// C(n, k), exact. Throws on overflow.
inline int128 binomial(int128 n, int128 k)
{
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    int128 result = 1;
    for (int128 i = 1; i <= k; ++i) {
        // result * (n - k + i) is divisible by i after the multiply; split by gcd to delay overflow.
        const int128 g = gcd128(result, i);
        result = checked_mul(result / g, (n - k + i) / (i / g));
    }
    return result;
}

} // namespace quadchroma

#endif
