#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "landau/stream.hpp"

namespace landau
{

/// Which function of the stream to evaluate. The stream represents
/// f'(z) = 1 + sum_{n>=1} a_n z^n; `value` is f', `antiderivative` is f with f(0) = 0,
/// and `derivative(k)` is the k-th derivative of f'.
struct EvalOrder {
    enum class Kind { antiderivative, value, derivative };
    Kind kind = Kind::value;
    unsigned k = 0;

    static EvalOrder antiderivative()
    {
        return {Kind::antiderivative, 0};
    }
    static EvalOrder value()
    {
        return {Kind::value, 0};
    }
    static EvalOrder derivative(unsigned k)
    {
        if (k == 0) {
            return value();
        }
        return {Kind::derivative, k};
    }
    std::string name() const
    {
        switch (kind) {
        case Kind::antiderivative: return "antiderivative";
        case Kind::value: return "value";
        case Kind::derivative: return "derivative(" + std::to_string(k) + ")";
        }
        return "?";
    }
    friend bool operator==(const EvalOrder &, const EvalOrder &) = default;
};

struct EvalRequest {
    EvalOrder order;
    ComplexDyadic z;
    Dyadic tol;
};

/// Truncation degree, digits read per coefficient and fixed-point precision chosen for a
/// tolerance. The error budget is: series tail < tol/2, coefficient boxes <= tol/4,
/// rounding <= tol/4.
struct EvalPlan {
    std::uint64_t terms = 0;
    std::uint64_t digits = 0;
    std::int64_t frac_bits = 0;
    Dyadic shell;
    Dyadic tol;
};

enum class Backend { automatic, wide, big };

template <class Int>
struct Scaled {
    Int re;
    Int im;
};

namespace detail
{

inline std::int64_t floor_shift(__int128 x, std::int64_t p)
{
    return static_cast<std::int64_t>(x >> p);
}
inline mpz_class floor_shift(const mpz_class &x, std::int64_t p)
{
    return floor_shr(x, p);
}

// Horner on fixed-point values scaled by 2^p: every complex product is floored once per
// component, so each step adds at most sqrt2 * 2^-p of error.
template <class Int, class Wide>
Scaled<Int> horner(const std::vector<Scaled<Int>> &b, const Int &zr, const Int &zi, std::int64_t p)
{
    Int sr = b.back().re;
    Int si = b.back().im;
    for (std::size_t j = b.size() - 1; j-- > 0;) {
        const Wide tr = Wide(sr) * Wide(zr) - Wide(si) * Wide(zi);
        const Wide ti = Wide(sr) * Wide(zi) + Wide(si) * Wide(zr);
        sr = Int(floor_shift(tr, p)) + b[j].re;
        si = Int(floor_shift(ti, p)) + b[j].im;
    }
    return {sr, si};
}

inline Dyadic series_tail(const BoundSchedule &s, EvalOrder order, std::uint64_t N, const Dyadic &r,
                          bool &bounded)
{
    bounded = true;
    switch (order.kind) {
    case EvalOrder::Kind::value: return tail_majorant(s, N, r);
    case EvalOrder::Kind::antiderivative:
        // |a_n z^(n+1) / (n+1)| <= r |a_n| r^n
        return up(r * tail_majorant(s, N, r));
    case EvalOrder::Kind::derivative: {
        auto t = derivative_tail_majorant(s, order.k, N, r);
        bounded = t.has_value();
        return t.value_or(Dyadic());
    }
    }
    return Dyadic();
}

inline std::uint64_t falling_factorial(std::uint64_t n, unsigned k)
{
    std::uint64_t v = 1;
    for (unsigned i = 0; i < k; ++i) {
        v *= n - i;
    }
    return v;
}

} // namespace detail

/// Smallest dyadic shell r < 1 with |z| <= r, on a grid of 2^-8 or finer.
inline Dyadic derive_shell(const ComplexDyadic &z)
{
    const Dyadic n2 = z.norm2();
    if (n2 >= Dyadic(1)) {
        fail(ErrorCategory::point_outside_disc, "point " + z.str() + " is not inside the unit disc");
    }
    for (std::int64_t g = 8; g <= 1 << 16; g *= 2) {
        Dyadic r = sqrt_approx(n2, g, Round::up);
        if (r < Dyadic(1)) {
            return r;
        }
    }
    fail(ErrorCategory::tolerance_too_tight, "point too close to the unit circle");
}

/// Truncated, fixed-point form of one order of the stream's series, valid on |z| <= shell
/// with guaranteed error below `tol`. Coefficient boxes are read from the stream once, at
/// construction; evaluation is pure and may be shared between threads.
class PreparedSeries
{
public:
    static constexpr std::uint64_t max_terms = 1u << 20;

    PreparedSeries(PiStream &stream, const BoundSchedule &schedule, EvalOrder order, const Dyadic &shell,
                   const Dyadic &tol, std::int64_t min_frac_bits = 0, Backend backend = Backend::automatic)
        : m_order(order)
    {
        detail::check_radius(shell);
        if (tol.sign() <= 0) {
            fail(ErrorCategory::invalid_argument, "tolerance must be positive");
        }
        m_plan.shell = shell;
        m_plan.tol = tol;
        m_plan.terms = choose_terms(schedule, order, shell, tol);
        const std::uint64_t N = m_plan.terms;
        const std::uint64_t first = order.kind == EvalOrder::Kind::derivative ? std::max<std::uint64_t>(order.k, 1) : 1;
        const std::uint64_t count = N >= first ? N - first + 1 : 0;
        m_plan.digits = choose_digits(schedule, order, shell, tol, first, N, count);

        // degree of the fixed-point polynomial
        std::uint64_t degree = 0;
        switch (order.kind) {
        case EvalOrder::Kind::value: degree = N; break;
        case EvalOrder::Kind::antiderivative: degree = N + 1; break;
        case EvalOrder::Kind::derivative: degree = N >= order.k ? N - order.k : 0; break;
        }
        std::int64_t p = 0;
        const Dyadic need(static_cast<long>(6 * (2 * degree + 1)));
        while (need > tol.ldexp(p)) {
            ++p;
        }
        m_plan.frac_bits = p = std::max(p, min_frac_bits);

        std::vector<ComplexDyadic> exact(degree + 1);
        if (order.kind == EvalOrder::Kind::value) {
            exact[0] = ComplexDyadic(Dyadic(1));
        } else if (order.kind == EvalOrder::Kind::antiderivative) {
            exact[1] = ComplexDyadic(Dyadic(1));
        }
        m_big.assign(degree + 1, Scaled<mpz_class>{0, 0});
        for (std::uint64_t n = first; n <= N; ++n) {
            const ComplexDyadic c = coefficient_box(stream, schedule, n, m_plan.digits).center();
            switch (order.kind) {
            case EvalOrder::Kind::value: exact[n] = c; break;
            case EvalOrder::Kind::antiderivative: {
                // c / (n+1) is not dyadic: floor(floor(c 2^p) / (n+1)) = floor(c 2^p / (n+1))
                mpz_class re = c.re.scaled_floor(p), im = c.im.scaled_floor(p);
                const mpz_class d = static_cast<unsigned long>(n + 1);
                mpz_fdiv_q(re.get_mpz_t(), re.get_mpz_t(), d.get_mpz_t());
                mpz_fdiv_q(im.get_mpz_t(), im.get_mpz_t(), d.get_mpz_t());
                m_big[n + 1] = {re, im};
                continue;
            }
            case EvalOrder::Kind::derivative: {
                const Dyadic f(mpz_class(static_cast<unsigned long>(detail::falling_factorial(n, order.k))));
                exact[n - order.k] = {c.re * f, c.im * f};
                break;
            }
            }
        }
        for (std::uint64_t j = 0; j <= degree; ++j) {
            if (!(order.kind == EvalOrder::Kind::antiderivative && j >= 2)) {
                m_big[j] = {exact[j].re.scaled_floor(p), exact[j].im.scaled_floor(p)};
            }
        }

        // |partial sums| <= sum |b_j| + degree units, since |z| < 1
        mpz_class total = static_cast<unsigned long>(degree + 2);
        for (const auto &b : m_big) {
            total += abs(b.re) + abs(b.im);
        }
        const std::int64_t mag = detail::bit_length(total);
        const bool fits = mag + 2 <= 62 && p <= 61 && mag + p + 3 <= 126;
        if (backend == Backend::wide && !fits) {
            fail(ErrorCategory::invalid_argument, "series does not fit the 128-bit backend");
        }
        m_wide = backend == Backend::wide || (backend == Backend::automatic && fits);
        if (m_wide) {
            m_small.reserve(m_big.size());
            for (const auto &b : m_big) {
                m_small.push_back({b.re.get_si(), b.im.get_si()});
            }
        }
    }

    const EvalPlan &plan() const noexcept
    {
        return m_plan;
    }
    EvalOrder order() const noexcept
    {
        return m_order;
    }
    bool wide() const noexcept
    {
        return m_wide;
    }
    std::int64_t frac_bits() const noexcept
    {
        return m_plan.frac_bits;
    }

    /// z given as integers scaled by 2^frac_bits(); the result uses the same scale.
    Scaled<std::int64_t> eval_wide(std::int64_t zr, std::int64_t zi) const
    {
        return detail::horner<std::int64_t, __int128>(m_small, zr, zi, m_plan.frac_bits);
    }
    Scaled<mpz_class> eval_big(const mpz_class &zr, const mpz_class &zi) const
    {
        return detail::horner<mpz_class, mpz_class>(m_big, zr, zi, m_plan.frac_bits);
    }

    ComplexDyadic operator()(const ComplexDyadic &z) const
    {
        if (z.norm2() > m_plan.shell * m_plan.shell) {
            fail(ErrorCategory::point_outside_disc, "point " + z.str() + " lies outside the shell " + m_plan.shell.str());
        }
        const std::int64_t p = m_plan.frac_bits;
        if (z.frac_bits() > p) {
            fail(ErrorCategory::invalid_argument, "point needs more fractional bits than the prepared precision");
        }
        if (m_wide) {
            const auto w = eval_wide(z.re.scaled_floor(p).get_si(), z.im.scaled_floor(p).get_si());
            return {Dyadic(mpz_class(static_cast<long>(w.re)), -p), Dyadic(mpz_class(static_cast<long>(w.im)), -p)};
        }
        const auto w = eval_big(z.re.scaled_floor(p), z.im.scaled_floor(p));
        return {Dyadic(w.re, -p), Dyadic(w.im, -p)};
    }

private:
    static std::uint64_t choose_terms(const BoundSchedule &s, EvalOrder order, const Dyadic &r, const Dyadic &tol)
    {
        const Dyadic half_tol = tol.half();
        auto ok = [&](std::uint64_t N) {
            bool bounded = false;
            const Dyadic t = detail::series_tail(s, order, N, r, bounded);
            return bounded && t < half_tol;
        };
        if (ok(0)) {
            return 0;
        }
        std::uint64_t lo = 0, hi = 1;
        while (!ok(hi)) {
            lo = hi;
            hi *= 2;
            if (hi > max_terms) {
                fail(ErrorCategory::tolerance_too_tight,
                     "series truncation for tolerance " + tol.str() + " at radius " + r.str() + " exceeds the term cap");
            }
        }
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            (ok(mid) ? hi : lo) = mid;
        }
        return hi;
    }

    // Smallest k with count * max_n (sqrt2 m_n 2^-k w_n(r)) <= tol/4, w_n the order's weight.
    static std::uint64_t choose_digits(const BoundSchedule &s, EvalOrder order, const Dyadic &r, const Dyadic &tol,
                                       std::uint64_t first, std::uint64_t N, std::uint64_t count)
    {
        if (count == 0) {
            return 0;
        }
        constexpr std::int64_t w = BoundSchedule::working_bits;
        Dyadic worst;
        Dyadic rpow = pow_up(r, first - (order.kind == EvalOrder::Kind::derivative ? order.k : 0), w);
        for (std::uint64_t n = first; n <= N; ++n) {
            Dyadic weight = rpow;
            if (order.kind == EvalOrder::Kind::antiderivative) {
                weight = div_approx(rpow * r, Dyadic(static_cast<long>(n + 1)), w, Round::up);
            } else if (order.kind == EvalOrder::Kind::derivative) {
                weight = rpow * Dyadic(mpz_class(static_cast<unsigned long>(detail::falling_factorial(n, order.k))));
            }
            worst = max(worst, detail::up(s.m(n) * weight));
            rpow = detail::up(rpow * r);
        }
        const Dyadic x = detail::up(s.sqrt2().hi * worst * Dyadic(static_cast<long>(4 * count)));
        std::int64_t k = std::max<std::int64_t>(0, x.magnitude_bits() - tol.magnitude_bits());
        while (x > tol.ldexp(k)) {
            ++k;
        }
        while (k > 0 && x <= tol.ldexp(k - 1)) {
            --k;
        }
        return static_cast<std::uint64_t>(k);
    }

    EvalOrder m_order;
    EvalPlan m_plan;
    bool m_wide = false;
    std::vector<Scaled<mpz_class>> m_big;
    std::vector<Scaled<std::int64_t>> m_small;
};

/// Value within `tol` of the requested order of the stream's function at z. The shell
/// defaults to derive_shell(z).
inline ComplexDyadic eval_series(PiStream &stream, const BoundSchedule &schedule, const EvalRequest &req,
                                 std::optional<Dyadic> shell = std::nullopt, Backend backend = Backend::automatic)
{
    if (req.z.norm2() >= Dyadic(1)) {
        fail(ErrorCategory::point_outside_disc, "point " + req.z.str() + " is not inside the unit disc");
    }
    const Dyadic r = shell ? *shell : derive_shell(req.z);
    if (req.z.norm2() > r * r) {
        fail(ErrorCategory::point_outside_disc, "point " + req.z.str() + " lies outside the shell " + r.str());
    }
    const PreparedSeries series(stream, schedule, req.order, r, req.tol, req.z.frac_bits(), backend);
    return series(req.z);
}

} // namespace landau
