#pragma once

#include <cstdint>

#include "landau/dyadic.hpp"

namespace landau
{

/// Closed dyadic interval [lo, hi].
struct Enclosure {
    Dyadic lo;
    Dyadic hi;

    static Enclosure exact(const Dyadic &x)
    {
        return {x, x};
    }
    bool contains(const Dyadic &x) const
    {
        return lo <= x && x <= hi;
    }
    Dyadic width() const
    {
        return hi - lo;
    }
    bool is_exact() const
    {
        return lo == hi;
    }
};

namespace detail
{

// Rounds num/den (den > 0) to an integer in the given direction.
inline mpz_class round_quotient(const mpz_class &num, const mpz_class &den, Round dir)
{
    mpz_class q;
    switch (dir) {
    case Round::down: mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); break;
    case Round::up: mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t()); break;
    case Round::nearest: {
        const mpz_class n2 = 2 * num + den;
        const mpz_class d2 = 2 * den;
        mpz_fdiv_q(q.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
        break;
    }
    }
    return q;
}

} // namespace detail

/// q with |q - x/y| < 2^-n. `down`/`up` give a one-sided bound on the 2^-n grid;
/// `nearest` rounds to that grid (error at most 2^-(n+1)).
inline Dyadic div_approx(const Dyadic &x, const Dyadic &y, std::int64_t n, Round dir = Round::nearest)
{
    if (y.is_zero()) {
        fail(ErrorCategory::division_by_zero, "division by zero");
    }
    // x/y * 2^n = mx * 2^(ex - ey + n) / my
    mpz_class num = x.mantissa();
    mpz_class den = y.mantissa();
    const std::int64_t shift = x.exponent() - y.exponent() + n;
    if (shift >= 0) {
        num = detail::shl(num, shift);
    } else {
        den = detail::shl(den, -shift);
    }
    if (sgn(den) < 0) {
        num = -num;
        den = -den;
    }
    return Dyadic(detail::round_quotient(num, den, dir), -n);
}

inline Dyadic recip_approx(const Dyadic &x, std::int64_t n, Round dir = Round::nearest)
{
    return div_approx(Dyadic(1), x, n, dir);
}

/// q with |q - sqrt(x)| < 2^-n, directed as for div_approx. Exact squares come out exact
/// whenever the root is representable on the 2^-n grid.
inline Dyadic sqrt_approx(const Dyadic &x, std::int64_t n, Round dir = Round::nearest)
{
    if (x.sign() < 0) {
        fail(ErrorCategory::negative_radicand, "square root of negative number " + x.str());
    }
    if (x.is_zero()) {
        return Dyadic();
    }
    // floor(sqrt(x) * 2^n) = isqrt(floor(x * 2^(2n)))
    const std::int64_t k = x.exponent() + 2 * n;
    const mpz_class scaled = detail::shl(x.mantissa(), k);
    const bool integral = k >= 0;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    switch (dir) {
    case Round::down: break;
    case Round::up:
        if (!(integral && root * root == scaled)) {
            root += 1;
        }
        break;
    case Round::nearest: {
        // round up iff 4 x 2^(2n) >= (2 root + 1)^2; the left side may be floored since the right is integral
        const mpz_class lhs = (2 * root + 1) * (2 * root + 1);
        if (detail::shl(x.mantissa(), k + 2) >= lhs) {
            root += 1;
        }
        break;
    }
    }
    return Dyadic(root, -n);
}

/// Upper bound on x^k for x >= 0; intermediate products keep `bits` significant bits,
/// rounded up.
inline Dyadic pow_up(const Dyadic &x, std::uint64_t k, std::int64_t bits)
{
    Dyadic result(1);
    Dyadic base = x;
    while (k > 0) {
        if (k & 1u) {
            result = (result * base).round_significant(bits, Round::up);
        }
        k >>= 1;
        if (k > 0) {
            base = (base * base).round_significant(bits, Round::up);
        }
    }
    return result;
}

/// Enclosure of e with width below 2^-n, from partial sums of sum 1/k! and the tail bound
/// sum_{k>K} 1/k! <= 2/(K+1)!.
inline Enclosure euler_e(std::int64_t n)
{
    const std::int64_t guard = 24;
    const mpz_class scale = detail::shl(mpz_class(1), n + guard);
    mpz_class term = scale; // floor(scale / k!)
    mpz_class sum = 0;
    std::int64_t k = 0;
    while (sgn(term) > 0) {
        sum += term;
        ++k;
        term /= k;
    }
    // Each floored term loses less than one unit; the remaining tail is below 2 units.
    const mpz_class hi = sum + k + 2;
    return {Dyadic(sum, -(n + guard)), Dyadic(hi, -(n + guard))};
}

inline Enclosure sqrt2(std::int64_t n)
{
    return {sqrt_approx(Dyadic(2), n, Round::down), sqrt_approx(Dyadic(2), n, Round::up)};
}

} // namespace landau
