#ifndef QUADCHROMA_ANALYTIC_HPP
#define QUADCHROMA_ANALYTIC_HPP

// Closed-form reference values: Valtr's convex-position probability, the
// monochromatic-crossing constants, leading-order census asymptotics, and
// the power-sum identities used to derive them.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "int128.hpp"

namespace quadchroma {

// Reduced fraction over 128-bit integers; arithmetic throws on overflow.
class ExactRational {
public:
    constexpr ExactRational() = default;
    ExactRational(int128 num, int128 den = 1) : num_(num), den_(den)
    {
        if (den_ == 0) throw std::domain_error("zero denominator");
        normalize();
    }

    int128 num() const { return num_; }
    int128 den() const { return den_; }

    double to_double() const { return double(num_) / double(den_); }

    // "p/q", or "p" when q = 1.
    std::string str() const { return den_ == 1 ? to_string(num_) : to_string(num_) + "/" + to_string(den_); }

    static ExactRational parse(const std::string& text)
    {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return ExactRational(parse_int128(text));
        return ExactRational(parse_int128(text.substr(0, slash)), parse_int128(text.substr(slash + 1)));
    }

    friend ExactRational operator+(const ExactRational& a, const ExactRational& b)
    {
        const int128 g = gcd128(a.den_, b.den_);
        const int128 num = checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g));
        return ExactRational(num, checked_mul(a.den_ / g, b.den_));
    }
    friend ExactRational operator-(const ExactRational& a, const ExactRational& b) { return a + ExactRational(-b.num_, b.den_); }
    friend ExactRational operator*(const ExactRational& a, const ExactRational& b)
    {
        const int128 g1 = gcd128(a.num_, b.den_);
        const int128 g2 = gcd128(b.num_, a.den_);
        const int128 s1 = g1 == 0 ? 1 : g1;
        const int128 s2 = g2 == 0 ? 1 : g2;
        return ExactRational(checked_mul(a.num_ / s1, b.num_ / s2), checked_mul(a.den_ / s2, b.den_ / s1));
    }
    friend ExactRational operator/(const ExactRational& a, const ExactRational& b)
    {
        if (b.num_ == 0) throw std::domain_error("division by zero");
        return a * ExactRational(b.den_, b.num_);
    }

    friend bool operator==(const ExactRational&, const ExactRational&) = default;
    friend bool operator<(const ExactRational& a, const ExactRational& b)
    {
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }

private:
    void normalize()
    {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const int128 g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    int128 num_ = 0;
    int128 den_ = 1;
};

// Probability that n uniform points in a parallelogram are in convex position:
// (C(2n-2, n-1) / n!)^2.
inline ExactRational valtr_probability(int n)
{
    if (n < 3 || n > 20) throw std::out_of_range("valtr_probability supports 3 <= n <= 20");
    int128 factorial = 1;
    for (int i = 2; i <= n; ++i) factorial *= i;
    const ExactRational base(binomial(2 * n - 2, n - 1), factorial);
    return base * base;
}

struct MonoConstants {
    ExactRational p_mono;   // P(same-colored crossing) under the slope coloring
    ExactRational p_convex; // Sylvester's four-point probability for a square
    ExactRational fraction; // p_mono / p_convex
    ExactRational savings;  // 1/2 - fraction
};

inline MonoConstants mono_given_any_constants()
{
    MonoConstants c;
    c.p_mono = ExactRational(1, 4);
    c.p_convex = valtr_probability(4);
    c.fraction = c.p_mono / c.p_convex;
    c.savings = ExactRational(1, 2) - c.fraction;
    if (!(c.fraction == ExactRational(18, 50)) || !(c.savings == ExactRational(7, 50)))
        throw std::logic_error("monochromatic constant bundle is inconsistent");
    return c;
}

// Leading terms of the exact-bounding-box census, in units of w^2 h^2.
struct BoxAsymptotics {
    double a = 0;
    double a0 = 0;
    double a1 = 0;
    double a2 = 0;
    double c2 = 0;
    double d2 = 0;
};

inline constexpr double kBoxCoefA = 3.0 / 2.0;
inline constexpr double kBoxCoefA0 = 1.0 / 2.0;
inline constexpr double kBoxCoefA1 = 2.0 / 3.0;
inline constexpr double kBoxCoefA2 = 1.0 / 3.0;
inline constexpr double kBoxCoefC2 = 1.0 / 12.0;
inline constexpr double kBoxCoefD2 = 1.0 / 12.0;

inline BoxAsymptotics asymptotic_box(std::int64_t w, std::int64_t h)
{
    if (w < 1 || h < 1) throw std::invalid_argument("asymptotic_box requires w, h >= 1");
    const double s = double(w) * double(w) * double(h) * double(h);
    return {kBoxCoefA * s, kBoxCoefA0 * s, kBoxCoefA1 * s, kBoxCoefA2 * s, kBoxCoefC2 * s, kBoxCoefD2 * s};
}

// m^8 / 96: leading term of the monochromatic-crossing count on P_m.
inline double asymptotic_grid(std::int64_t m)
{
    if (m < 1) throw std::invalid_argument("asymptotic_grid requires m >= 1");
    return std::pow(double(m), 8) / 96.0;
}

// Sums over i = 0..n.
struct PowerSums {
    int128 sum_i = 0;
    int128 sum_i2 = 0;
    int128 sum_i3 = 0;
    int128 sum_i_n_minus_i = 0;
    int128 sum_i2_n_minus_i = 0;

    friend bool operator==(const PowerSums&, const PowerSums&) = default;
};

inline PowerSums sum_identities(std::int64_t n)
{
    if (n < 1) throw std::invalid_argument("sum_identities requires n >= 1");
    if (n > (std::int64_t(1) << 24)) throw std::out_of_range("sum_identities limited to n <= 2^24");
    const int128 N = n;
    PowerSums s;
    s.sum_i = N * (N + 1) / 2;
    s.sum_i2 = N * (N + 1) * (2 * N + 1) / 6;
    s.sum_i3 = s.sum_i * s.sum_i;
    s.sum_i_n_minus_i = (N - 1) * N * (N + 1) / 6;
    s.sum_i2_n_minus_i = N * N * (N * N - 1) / 12;
    return s;
}

} // namespace quadchroma

#endif
