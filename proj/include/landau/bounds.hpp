#pragma once

#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "landau/series.hpp"

namespace landau
{

/// Upper bounds on sup |f'| and sup |f''| over closed discs of radius r < 1.
class BoundsProvider
{
public:
    virtual ~BoundsProvider() = default;
    virtual Dyadic fprime_bound(const Dyadic &r) const = 0;
    virtual Dyadic fsecond_bound(const Dyadic &r) const = 0;
    virtual std::string provenance() const = 0;
    /// Bounds that do not follow from the coefficient schedule alone are sample-audited
    /// against the stream before use.
    virtual bool injected() const = 0;
};

/// Upper bound on sum_{n>=from} sqrt2 m_n n(n-1)...(n-k+1) r^(n-k).
inline Dyadic weighted_majorant(const BoundSchedule &s, unsigned k, const Dyadic &r, std::uint64_t from)
{
    detail::check_radius(r);
    from = std::max<std::uint64_t>({from, k, 1});
    if (k == 0) {
        return tail_majorant(s, from - 1, r);
    }
    constexpr std::int64_t w = BoundSchedule::working_bits;
    Dyadic sum;
    std::uint64_t N = from - 1;
    while (true) {
        if (auto tail = derivative_tail_majorant(s, k, N, r)) {
            return detail::up(sum + *tail);
        }
        ++N;
        const Dyadic f(mpz_class(static_cast<unsigned long>(detail::falling_factorial(N, k))));
        sum = detail::up(sum + s.sqrt2().hi * s.m(N) * f * pow_up(r, N - k, w));
        if (N > PreparedSeries::max_terms) {
            fail(ErrorCategory::tolerance_too_tight, "derivative majorant does not converge fast enough");
        }
    }
}

/// Closed-form bounds valid for every function whose coefficients obey the schedule.
class GenericBounds final : public BoundsProvider
{
public:
    explicit GenericBounds(BoundSchedule schedule) : m_schedule(std::move(schedule)) {}

    Dyadic fprime_bound(const Dyadic &r) const override
    {
        return sup_bound_fprime(m_schedule, r);
    }
    Dyadic fsecond_bound(const Dyadic &r) const override
    {
        return sup_bound_fsecond(m_schedule, r);
    }
    std::string provenance() const override
    {
        return m_schedule.generic() ? "generic" : "generic:slope=" + m_schedule.slope().hi.str();
    }
    bool injected() const override
    {
        return false;
    }

private:
    BoundSchedule m_schedule;
};

namespace detail
{

inline Dyadic abs_up(const ComplexDyadic &c)
{
    return sqrt_approx(c.norm2(), BoundSchedule::working_bits, Round::up);
}

// Upper bounds on sum |c_n| r^n and sum n |c_n| r^(n-1) for n = 1..size.
inline Dyadic poly_abs_sum(const std::vector<Dyadic> &mags, const Dyadic &r, unsigned k)
{
    constexpr std::int64_t w = BoundSchedule::working_bits;
    Dyadic sum;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        const std::uint64_t n = i + 1;
        if (n < k || mags[i].is_zero()) {
            continue;
        }
        const Dyadic f(mpz_class(static_cast<unsigned long>(falling_factorial(n, k))));
        sum = up(sum + mags[i] * f * pow_up(r, n - k, w));
    }
    return sum;
}

} // namespace detail

/// Bounds for a stream steered toward known coefficients for `depth` digits per channel.
/// The encoded coefficient differs from its target by at most sqrt2 * 2 m_n 2^-depth (both
/// lie in the same depth-level box), which is added as a majorant over all n.
class PolynomialBounds final : public BoundsProvider
{
public:
    PolynomialBounds(std::vector<ComplexDyadic> coeffs, BoundSchedule schedule, std::uint64_t depth,
                     std::string name = "fixture")
        : m_schedule(std::move(schedule)), m_depth(depth), m_name(std::move(name))
    {
        for (const auto &c : coeffs) {
            m_mags.push_back(detail::abs_up(c));
        }
    }

    Dyadic fprime_bound(const Dyadic &r) const override
    {
        detail::check_radius(r);
        return detail::up(Dyadic(1) + detail::poly_abs_sum(m_mags, r, 0) + deviation(0, r));
    }
    Dyadic fsecond_bound(const Dyadic &r) const override
    {
        detail::check_radius(r);
        return detail::up(detail::poly_abs_sum(m_mags, r, 1) + deviation(1, r));
    }
    std::string provenance() const override
    {
        return m_name + ":depth=" + std::to_string(m_depth);
    }
    bool injected() const override
    {
        return true;
    }

private:
    Dyadic deviation(unsigned k, const Dyadic &r) const
    {
        return weighted_majorant(m_schedule, k, r, 1).ldexp(1 - static_cast<std::int64_t>(m_depth));
    }

    BoundSchedule m_schedule;
    std::uint64_t m_depth;
    std::string m_name;
    std::vector<Dyadic> m_mags;
};

/// Bounds read from the stream itself: the first `terms` coefficient boxes at `digits`
/// digits each, plus the schedule majorant for the remaining terms. Reading is logged on
/// the stream like any other query.
class StreamMajorantBounds final : public BoundsProvider
{
public:
    StreamMajorantBounds(PiStream &stream, BoundSchedule schedule, std::uint64_t terms = 64,
                         std::uint64_t digits = 32)
        : m_schedule(std::move(schedule)), m_terms(terms), m_digits(digits)
    {
        const Enclosure sqrt2 = m_schedule.sqrt2();
        for (std::uint64_t n = 1; n <= terms; ++n) {
            const Box b = coefficient_box(stream, m_schedule, n, digits);
            const Dyadic half_side = b.re_width().half();
            m_mags.push_back(detail::up(detail::abs_up(b.center()) + sqrt2.hi * half_side));
        }
    }

    Dyadic fprime_bound(const Dyadic &r) const override
    {
        detail::check_radius(r);
        return detail::up(Dyadic(1) + detail::poly_abs_sum(m_mags, r, 0) + weighted_majorant(m_schedule, 0, r, m_terms + 1));
    }
    Dyadic fsecond_bound(const Dyadic &r) const override
    {
        detail::check_radius(r);
        return detail::up(detail::poly_abs_sum(m_mags, r, 1) + weighted_majorant(m_schedule, 1, r, m_terms + 1));
    }
    std::string provenance() const override
    {
        return "stream:terms=" + std::to_string(m_terms) + ",digits=" + std::to_string(m_digits);
    }
    bool injected() const override
    {
        return true;
    }

private:
    BoundSchedule m_schedule;
    std::uint64_t m_terms;
    std::uint64_t m_digits;
    std::vector<Dyadic> m_mags;
};

struct BoundsAuditOptions {
    unsigned directions = 16;
    Dyadic tol = Dyadic::pow2(-20);
};

/// Evaluates f' and f'' at sample points on |z| = r (directions rounded toward the
/// origin) and fails with BoundsAuditFailed if a sample certainly exceeds the bound.
inline void audit_bounds(const BoundsProvider &bounds, PiStream &stream, const BoundSchedule &schedule,
                         const Dyadic &r, const BoundsAuditOptions &opt = {})
{
    detail::check_radius(r);
    const Dyadic b1 = bounds.fprime_bound(r);
    const Dyadic b2 = bounds.fsecond_bound(r);
    const PreparedSeries f1(stream, schedule, EvalOrder::value(), r, opt.tol, 16 + r.frac_bits());
    const PreparedSeries f2(stream, schedule, EvalOrder::derivative(1), r, opt.tol, 16 + r.frac_bits());
    for (unsigned i = 0; i < opt.directions; ++i) {
        const double angle = 2.0 * std::numbers::pi * i / opt.directions;
        const Dyadic c(mpz_class(static_cast<long>(std::trunc(std::cos(angle) * 65536.0))), -16);
        const Dyadic s(mpz_class(static_cast<long>(std::trunc(std::sin(angle) * 65536.0))), -16);
        const ComplexDyadic z{c * r, s * r};
        const auto check = [&](const PreparedSeries &f, const Dyadic &bound, const char *what) {
            const ComplexDyadic w = f(z);
            const Dyadic limit = bound + opt.tol;
            if (w.norm2() > limit * limit) {
                fail(ErrorCategory::bounds_audit_failed, std::string(what) + " bound " + bound.str() + " of " +
                                                             bounds.provenance() + " is exceeded at z = " + z.str());
            }
        };
        check(f1, b1, "f'");
        check(f2, b2, "f''");
    }
}

} // namespace landau
