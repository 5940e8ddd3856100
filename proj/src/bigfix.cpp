#include "shiftlab/bigfix.hpp"

#include <stdexcept>

namespace shiftlab {

double Fixed128::to_double() const {
    return static_cast<double>(static_cast<u64>(v >> 64)) / 18446744073709551616.0 +
           static_cast<double>(static_cast<u64>(v)) / 18446744073709551616.0 / 18446744073709551616.0;
}

double Fixed192::to_double() const {
    double r = 0.0;
    const double scale = 1.0 / 18446744073709551616.0;
    double s = scale;
    for (int i = 2; i >= 0; --i) {
        r += static_cast<double>(v.limb[i]) * s;
        s *= scale;
    }
    return r;
}

namespace {

// floor(p << bits / q) for p, q fitting in 128 bits, bits <= 192.
BigUInt<6> shifted_quotient(const BigUInt<6>& p, const BigUInt<6>& q, int bits) {
    BigUInt<6> num = p;
    for (int i = 0; i < bits; ++i) num.shl1();
    BigUInt<6> quo, rem;
    divmod(num, q, quo, rem);
    return quo;
}

// Largest Fibonacci pair below 2^120; the quotient approximates the golden
// conjugate with error < 2^-238.
void fib_pair(BigUInt<6>& fa, BigUInt<6>& fb) {
    u128 a = 1, b = 1;
    while (true) {
        u128 c = a + b;
        if (c < b || (c >> 120)) break;
        a = b;
        b = c;
    }
    fa = BigUInt<6>::from_u128(a);
    fb = BigUInt<6>::from_u128(b);
}

BigUInt<6> golden_limbs(int bits) {
    BigUInt<6> fa, fb;
    fib_pair(fa, fb);
    return shifted_quotient(fa, fb, bits);
}

BigUInt<6> decimal_limbs(const std::string& text, int bits) {
    std::string t = text;
    if (t.rfind("0.", 0) == 0) t = t.substr(2);
    else if (t.rfind(".", 0) == 0) t = t.substr(1);
    else throw std::invalid_argument("fixed-point literal must start with '0.' or '.'");
    if (t.empty()) throw std::invalid_argument("fixed-point literal: bad length");
    if (t.size() > 45) t = t.substr(0, 45);  // keeps digits << 192 inside 384 bits
    BigUInt<6> digits;
    BigUInt<6> pow10 = BigUInt<6>::from_u64(1);
    for (char c : t) {
        if (c < '0' || c > '9') throw std::invalid_argument("fixed-point literal: bad digit");
        digits.mul_small(10);
        digits.add(BigUInt<6>::from_u64(static_cast<u64>(c - '0')));
        pow10.mul_small(10);
    }
    return shifted_quotient(digits, pow10, bits);
}

u128 to_u128(const BigUInt<6>& b) {
    return (static_cast<u128>(b.limb[1]) << 64) | b.limb[0];
}

}  // namespace

Fixed128 golden_conjugate128() { return Fixed128{to_u128(golden_limbs(128))}; }

Fixed192 golden_conjugate192() {
    BigUInt<6> g = golden_limbs(192);
    Fixed192 r;
    r.v.limb = {g.limb[0], g.limb[1], g.limb[2]};
    return r;
}

Fixed128 fixed128_from_decimal(const std::string& text) {
    return Fixed128{to_u128(decimal_limbs(text, 128))};
}

Fixed192 fixed192_from_decimal(const std::string& text) {
    BigUInt<6> g = decimal_limbs(text, 192);
    Fixed192 r;
    r.v.limb = {g.limb[0], g.limb[1], g.limb[2]};
    return r;
}

Fixed128 fixed128_from_ratio(u64 p, u64 q) {
    if (q == 0 || p >= q) throw std::invalid_argument("fixed128_from_ratio: need p < q, q > 0");
    BigUInt<6> quo = shifted_quotient(BigUInt<6>::from_u64(p), BigUInt<6>::from_u64(q), 128);
    return Fixed128{to_u128(quo)};
}

bool irrationality_guard(const Fixed128& alpha) {
    const u128 a = alpha.v;
    if (a == 0) return false;

    // Rejects slopes a small-denominator rational approximates to 2^-64.
    // The denominator cutoff sits at 2^30: the golden conjugate's best
    // convergent below 2^32 is already 2^-64-close (error 1/(sqrt5 F47^2)),
    // so a 2^32 cutoff would reject the canonical worst-approximable slope.
    auto close_small_denominator = [&](u128 p, u128 q) {
        if (q > (u128(1) << 30)) return false;
        BigUInt<4> aq = BigUInt<4>::from_u128(a);
        aq.mul_small(static_cast<u64>(q));
        BigUInt<4> p128;  // p << 128
        p128.limb[2] = static_cast<u64>(p);
        p128.limb[3] = static_cast<u64>(p >> 64);
        BigUInt<4> diff = aq;
        if (diff.cmp(p128) >= 0) diff.sub(p128);
        else { diff = p128; diff.sub(aq); }
        BigUInt<4> bound;  // q << 64
        bound.limb[1] = static_cast<u64>(q);
        bound.limb[2] = static_cast<u64>(q >> 64);
        return diff.cmp(bound) < 0;
    };

    // Continued fraction of a / 2^128 via Euclid; first step handles the
    // 129-bit numerator 2^128.
    u128 c1 = ~u128(0) / a;
    u128 rem = (~u128(0) % a) + 1;
    if (rem == a) { c1 += 1; rem = 0; }

    u128 p_prev = 1, q_prev = 0;  // h_{-1}/k_{-1}
    u128 p_cur = 0, q_cur = 1;    // h_0/k_0  (a0 = 0)

    u128 u = a, v = rem, coef = c1;
    while (true) {
        // Guard the recurrence against overflow; q beyond 2^32 can't matter.
        if (coef > (u128(1) << 64) || q_cur > (u128(1) << 40)) break;
        u128 p_next = coef * p_cur + p_prev;
        u128 q_next = coef * q_cur + q_prev;
        p_prev = p_cur; q_prev = q_cur;
        p_cur = p_next; q_cur = q_next;

        if (close_small_denominator(p_cur, q_cur)) return false;
        if (q_cur > (u128(1) << 30)) break;
        if (v == 0) break;  // exact rational reached; its convergent was tested
        coef = u / v;
        u128 t = u % v;
        u = v;
        v = t;
    }
    return true;
}

}  // namespace shiftlab
