#pragma once
// Fixed-point fractions in [0,1) for circle rotations, plus the minimal
// fixed-width big-unsigned machinery needed to construct them exactly
// (decimal parsing, Fibonacci-quotient constants, continued-fraction
// rational-approximation guard). The rotation hot path is pure integer
// adds: a step wraps mod 1 exactly, and the carry-out IS the Sturmian
// coding bit for the interval [1-alpha, 1).

#include <array>
#include <cstdint>
#include <string>

namespace shiftlab {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

template <int N>
struct BigUInt {
    std::array<u64, N> limb{};  // little-endian

    static BigUInt from_u64(u64 v) {
        BigUInt r;
        r.limb[0] = v;
        return r;
    }
    static BigUInt from_u128(u128 v) {
        BigUInt r;
        r.limb[0] = static_cast<u64>(v);
        if constexpr (N > 1) r.limb[1] = static_cast<u64>(v >> 64);
        return r;
    }

    bool is_zero() const {
        for (u64 v : limb)
            if (v) return false;
        return true;
    }

    int cmp(const BigUInt& o) const {
        for (int i = N - 1; i >= 0; --i) {
            if (limb[i] != o.limb[i]) return limb[i] < o.limb[i] ? -1 : 1;
        }
        return 0;
    }

    // Wrapping add; returns carry out.
    bool add(const BigUInt& o) {
        u128 carry = 0;
        for (int i = 0; i < N; ++i) {
            u128 s = (u128)limb[i] + o.limb[i] + carry;
            limb[i] = static_cast<u64>(s);
            carry = s >> 64;
        }
        return carry != 0;
    }

    // Wrapping subtract; returns borrow out.
    bool sub(const BigUInt& o) {
        u128 borrow = 0;
        for (int i = 0; i < N; ++i) {
            u128 d = (u128)limb[i] - o.limb[i] - borrow;
            limb[i] = static_cast<u64>(d);
            borrow = (d >> 64) ? 1 : 0;
        }
        return borrow != 0;
    }

    void shl1() {
        u64 carry = 0;
        for (int i = 0; i < N; ++i) {
            u64 next = limb[i] >> 63;
            limb[i] = (limb[i] << 1) | carry;
            carry = next;
        }
    }

    bool bit(int k) const { return (limb[k / 64] >> (k % 64)) & 1; }
    void set_bit(int k) { limb[k / 64] |= (u64(1) << (k % 64)); }

    // Multiply by a small constant, wrapping (caller sizes N large enough).
    void mul_small(u64 m) {
        u128 carry = 0;
        for (int i = 0; i < N; ++i) {
            u128 p = (u128)limb[i] * m + carry;
            limb[i] = static_cast<u64>(p);
            carry = p >> 64;
        }
    }
};

template <int N>
BigUInt<2 * N> mul_wide(const BigUInt<N>& a, const BigUInt<N>& b) {
    BigUInt<2 * N> r;
    for (int i = 0; i < N; ++i) {
        u128 carry = 0;
        for (int j = 0; j < N; ++j) {
            u128 cur = (u128)r.limb[i + j] + (u128)a.limb[i] * b.limb[j] + carry;
            r.limb[i + j] = static_cast<u64>(cur);
            carry = cur >> 64;
        }
        r.limb[i + N] = static_cast<u64>(carry);
    }
    return r;
}

// Restoring bit-by-bit division: slow and only used at construction time.
template <int N>
void divmod(const BigUInt<N>& num, const BigUInt<N>& den, BigUInt<N>& q, BigUInt<N>& r) {
    q = BigUInt<N>{};
    r = BigUInt<N>{};
    for (int i = N * 64 - 1; i >= 0; --i) {
        r.shl1();
        if (num.bit(i)) r.limb[0] |= 1;
        if (r.cmp(den) >= 0) {
            r.sub(den);
            q.set_bit(i);
        }
    }
}

// Fraction with 128 fractional bits; value = v / 2^128.
struct Fixed128 {
    u128 v = 0;

    // x += a mod 1; carry-out reports the wrap.
    bool add_wraps(const Fixed128& a) {
        v += a.v;
        return v < a.v;
    }
    Fixed128 plus(const Fixed128& a) const { return Fixed128{v + a.v}; }
    Fixed128 minus(const Fixed128& a) const { return Fixed128{v - a.v}; }
    Fixed128 negated() const { return Fixed128{~v + 1}; }  // 1 - x mod 1

    // i * x mod 1.
    Fixed128 times(u64 i) const {
        u128 lo = (u128)(u64)v * i;
        u128 hi = (u128)(u64)(v >> 64) * i;
        return Fixed128{lo + (hi << 64)};
    }

    // Wrap-around circle distance, as a fraction.
    Fixed128 circle_dist(const Fixed128& o) const {
        u128 d = v - o.v;
        u128 nd = ~d + 1;
        return Fixed128{d < nd ? d : nd};
    }

    bool operator<(const Fixed128& o) const { return v < o.v; }
    bool operator<=(const Fixed128& o) const { return v <= o.v; }
    bool operator==(const Fixed128& o) const { return v == o.v; }

    double to_double() const;
};

// 192-bit variant used only as the higher-precision recomputation oracle.
struct Fixed192 {
    BigUInt<3> v;

    bool add_wraps(const Fixed192& a) { return v.add(a.v); }
    double to_double() const;
};

// floor(value * 2^bits) for the golden-ratio conjugate (sqrt(5)-1)/2,
// computed from a Fibonacci quotient with error far below one ulp.
Fixed128 golden_conjugate128();
Fixed192 golden_conjugate192();

// Parses "0.6180339887..." (plain fraction in [0,1), up to ~70 digits).
Fixed128 fixed128_from_decimal(const std::string& text);
Fixed192 fixed192_from_decimal(const std::string& text);

Fixed128 fixed128_from_ratio(u64 p, u64 q);

// True when no rational p/q with q <= 2^32 approximates alpha within 2^-64
// (checked over the continued-fraction convergents). Rejects rationals with
// small denominators; a valid Sturmian slope must pass.
bool irrationality_guard(const Fixed128& alpha);

}  // namespace shiftlab
