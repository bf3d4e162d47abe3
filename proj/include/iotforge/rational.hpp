#pragma once

#include <cstdint>
#include <numeric>
#include <string>

namespace iotforge {

// Exact non-negative rational, normalized (gcd 1, positive denominator).
// Utilizations stay well inside int64 for desk-scale task sets.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    constexpr Rational() = default;
    constexpr Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    constexpr void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    friend constexpr Rational operator+(Rational a, Rational b) {
        std::int64_t g = std::gcd(a.den, b.den);
        std::int64_t scaled_b = b.den / g;
        return Rational(a.num * scaled_b + b.num * (a.den / g), a.den * scaled_b);
    }

    friend constexpr bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }

    // a/b <=> c/d without overflow for our magnitudes
    friend constexpr bool operator<(const Rational& a, const Rational& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend constexpr bool operator<=(const Rational& a, const Rational& b) {
        return a.num * b.den <= b.num * a.den;
    }
    friend constexpr bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend constexpr bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

} // namespace iotforge
