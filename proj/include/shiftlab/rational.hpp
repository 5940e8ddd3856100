#pragma once
// Exact rational arithmetic on int64 with int128 intermediates. Densities,
// probe statistics and coverage sums all stay exact through this type.

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shiftlab {

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;  // always > 0, gcd(|num|, den) == 1

    constexpr Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    static Rational from_int128(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("Rational: zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("Rational overflow");
        Rational r;
        r.num = static_cast<std::int64_t>(n);
        r.den = static_cast<std::int64_t>(d);
        return r;
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return from_int128((__int128)a.num * b.den + (__int128)b.num * a.den, (__int128)a.den * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return from_int128((__int128)a.num * b.den - (__int128)b.num * a.den, (__int128)a.den * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_int128((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::domain_error("Rational: division by zero");
        return from_int128((__int128)a.num * b.den, (__int128)a.den * b.num);
    }
    Rational operator-() const { Rational r = *this; r.num = -r.num; return r; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) {
        return (__int128)a.num * b.den <= (__int128)b.num * a.den;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

    Rational abs() const { return num < 0 ? -*this : *this; }
};

// Accepts "3", "-3/7" and plain decimals like "0.125".
Rational parse_rational(const std::string& text);

inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return Rational(std::stoll(text));
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (frac.size() > 17) frac = frac.substr(0, 17);
    bool neg = !whole.empty() && whole[0] == '-';
    __int128 n = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    if (n < 0) n = -n;
    __int128 d = 1;
    for (char c : frac) {
        if (c < '0' || c > '9') throw std::invalid_argument("parse_rational: bad digit");
        n = n * 10 + (c - '0');
        d *= 10;
    }
    if (neg) n = -n;
    return Rational::from_int128(n, d);
}

}  // namespace shiftlab
