#pragma once

#include <cstdint>
#include <optional>

#include "landau/approx.hpp"

namespace landau
{

/// Coefficient and supremum bounds for the function class.
///
/// Coefficients satisfy |a_n| <= A (n+2) with A = c e / 2 and c = 1 + 2^-k; the box bound
/// m_n is a dyadic in [A(n+2), A(n+2) + 2^-n]. For test-scale runs the slope A may be
/// replaced by an explicit dyadic, in which case every formula below is evaluated with that
/// slope instead of c e / 2.
class BoundSchedule
{
public:
    static constexpr std::int64_t working_bits = 128;
    static constexpr std::int64_t e_bits = 2048;

    explicit BoundSchedule(unsigned c_exponent = 100) : m_c_exponent(c_exponent)
    {
        m_e = euler_e(e_bits);
        m_sqrt2 = landau::sqrt2(working_bits);
        const Dyadic c = this->c();
        m_slope = {(c * m_e.lo).half(), (c * m_e.hi).half()};
    }

    /// Schedule with a fixed coefficient slope A (m_n = A (n+2) up to the 2^-n window).
    static BoundSchedule with_slope(const Dyadic &slope, unsigned c_exponent = 100)
    {
        if (slope.sign() <= 0) {
            fail(ErrorCategory::invalid_argument, "coefficient slope must be positive");
        }
        BoundSchedule s(c_exponent);
        s.m_slope = Enclosure::exact(slope);
        s.m_generic = false;
        return s;
    }

    unsigned c_exponent() const noexcept
    {
        return m_c_exponent;
    }
    Dyadic c() const
    {
        return Dyadic(1) + Dyadic::pow2(-static_cast<std::int64_t>(m_c_exponent));
    }
    const Enclosure &e() const noexcept
    {
        return m_e;
    }
    const Enclosure &sqrt2() const noexcept
    {
        return m_sqrt2;
    }
    /// Enclosure of A.
    const Enclosure &slope() const noexcept
    {
        return m_slope;
    }
    bool generic() const noexcept
    {
        return m_generic;
    }

    /// m_n: dyadic with A(n+2) <= m_n <= A(n+2) + 2^-n.
    Dyadic m(std::uint64_t n) const
    {
        if (n < 1) {
            fail(ErrorCategory::invalid_argument, "coefficient bounds are indexed from n = 1");
        }
        const auto ni = static_cast<std::int64_t>(n);
        Dyadic slope_hi = m_slope.hi;
        if (m_generic && ni + 48 > e_bits) {
            slope_hi = (c() * euler_e(ni + 64).hi).half();
        }
        return (slope_hi * Dyadic(ni + 2)).round_to(ni + 1, Round::up);
    }

    friend bool operator==(const BoundSchedule &a, const BoundSchedule &b)
    {
        return a.m_c_exponent == b.m_c_exponent && a.m_generic == b.m_generic && a.m_slope.lo == b.m_slope.lo &&
               a.m_slope.hi == b.m_slope.hi;
    }

private:
    unsigned m_c_exponent;
    bool m_generic = true;
    Enclosure m_e;
    Enclosure m_sqrt2;
    Enclosure m_slope;
};

inline Dyadic bound_m(const BoundSchedule &s, std::uint64_t n)
{
    return s.m(n);
}

namespace detail
{

inline void check_radius(const Dyadic &r)
{
    if (r.sign() < 0 || r >= Dyadic(1)) {
        fail(ErrorCategory::radius_out_of_range, "radius " + r.str() + " is not in [0, 1)");
    }
}

// Keeps working_bits significant bits, rounding toward +infinity.
inline Dyadic up(const Dyadic &x)
{
    return x.round_significant(BoundSchedule::working_bits, Round::up);
}

// Upper bound on 1 / (1 - r).
inline Dyadic inv_one_minus_up(const Dyadic &r)
{
    return div_approx(Dyadic(1), Dyadic(1) - r, BoundSchedule::working_bits, Round::up);
}

} // namespace detail

/// Upper bound on sup |f'| over the disc of radius r:
/// sqrt2 * (A (1/(1-r) + 1/(1-r)^2) + 2 - 2A), rounded toward +infinity.
inline Dyadic sup_bound_fprime(const BoundSchedule &s, const Dyadic &r)
{
    detail::check_radius(r);
    const Dyadic u = detail::inv_one_minus_up(r);
    const Dyadic inner = detail::up(s.slope().hi * (u + u * u)) + Dyadic(2) - s.slope().lo.ldexp(1);
    return detail::up(s.sqrt2().hi * inner);
}

/// Upper bound on sup |f''| over the disc of radius r:
/// sqrt2 * (2A / (1-r)^3 + A / (1-r)^2 + 2), rounded toward +infinity.
inline Dyadic sup_bound_fsecond(const BoundSchedule &s, const Dyadic &r)
{
    detail::check_radius(r);
    const Dyadic u = detail::inv_one_minus_up(r);
    const Dyadic u2 = detail::up(u * u);
    const Dyadic inner = detail::up(s.slope().hi * (detail::up(u2 * u).ldexp(1) + u2)) + Dyadic(2);
    return detail::up(s.sqrt2().hi * inner);
}

/// Upper bound on sum_{n>N} sqrt2 m_n r^n, the tail of the derivative series past degree N.
///
/// Uses sum_{n>N} (n+2) r^n = r^(N+1) ((N+3)/(1-r) + r/(1-r)^2) for the linear part and
/// sum_{n>N} (r/2)^n = (r/2)^(N+1) / (1 - r/2) for the 2^-n slack of m_n.
inline Dyadic tail_majorant(const BoundSchedule &s, std::uint64_t N, const Dyadic &r)
{
    detail::check_radius(r);
    if (r.is_zero()) {
        return Dyadic();
    }
    constexpr std::int64_t w = BoundSchedule::working_bits;
    const Dyadic u = detail::inv_one_minus_up(r);
    const Dyadic lead = pow_up(r, N + 1, w);
    const Dyadic linear = detail::up(lead * (Dyadic(static_cast<long>(N + 3)) * u + detail::up(r * u * u)));
    const Dyadic half_r = r.half();
    const Dyadic slack = detail::up(pow_up(half_r, N + 1, w) *
                                    div_approx(Dyadic(1), Dyadic(1) - half_r, w, Round::up));
    return detail::up(s.sqrt2().hi * detail::up(s.slope().hi * linear + slack));
}

/// Upper bound on sum_{n>N} sqrt2 m_n n(n-1)...(n-k+1) r^(n-k), the tail of the k-th
/// derivative of the series. Terms are dominated by a geometric series whose ratio is the
/// first term ratio (the ratio of consecutive terms decreases in n). Returns nullopt when
/// that ratio is not below one yet, i.e. N is too small for a bound of this form.
inline std::optional<Dyadic> derivative_tail_majorant(const BoundSchedule &s, unsigned k, std::uint64_t N,
                                                      const Dyadic &r)
{
    detail::check_radius(r);
    constexpr std::int64_t w = BoundSchedule::working_bits;
    const std::uint64_t n0 = std::max<std::uint64_t>(N + 1, k);
    // q(n) = (n+2) n (n-1) ... (n-k+1)
    auto q = [k](std::uint64_t n) {
        mpz_class v = n + 2;
        for (unsigned i = 0; i < k; ++i) {
            v *= static_cast<unsigned long>(n - i);
        }
        return Dyadic(v);
    };
    // m_n <= A'(n+2) for n > N, with A' = A + 2^-(N+1) / (N+3)
    const Dyadic slope = detail::up(
        s.slope().hi + div_approx(Dyadic::pow2(-static_cast<std::int64_t>(N + 1)),
                                  Dyadic(static_cast<long>(N + 3)), w, Round::up));
    const Dyadic first = detail::up(s.sqrt2().hi * slope * q(n0) * pow_up(r, n0 - k, w));
    if (r.is_zero()) {
        return n0 == k ? first : Dyadic();
    }
    const Dyadic ratio = div_approx(r * q(n0 + 1), q(n0), w, Round::up);
    if (ratio >= Dyadic(1)) {
        return std::nullopt;
    }
    return div_approx(first, Dyadic(1) - ratio, w, Round::up);
}

} // namespace landau
