#pragma once

#include <gmpxx.h>

#include <charconv>
#include <compare>
#include <cstdint>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "landau/error.hpp"

namespace landau
{

namespace detail
{

inline mpz_class shl(const mpz_class &x, std::int64_t k)
{
    mpz_class out;
    if (k >= 0) {
        mpz_mul_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    } else {
        mpz_fdiv_q_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(-k));
    }
    return out;
}

// floor(x / 2^k) for k >= 0
inline mpz_class floor_shr(const mpz_class &x, std::int64_t k)
{
    mpz_class out;
    mpz_fdiv_q_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return out;
}

// ceil(x / 2^k) for k >= 0
inline mpz_class ceil_shr(const mpz_class &x, std::int64_t k)
{
    mpz_class out;
    mpz_cdiv_q_2exp(out.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return out;
}

inline std::int64_t bit_length(const mpz_class &x)
{
    return sgn(x) == 0 ? 0 : static_cast<std::int64_t>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

} // namespace detail

/// Direction used by every approximate operation.
enum class Round { down, up, nearest };

/// Exact dyadic rational mantissa * 2^exponent.
///
/// The representation is canonical: the mantissa is odd, or zero with exponent 0.
/// Equality and hashing are therefore structural.
class Dyadic
{
public:
    Dyadic() = default;
    Dyadic(long value) : m_mantissa(value)
    {
        normalise();
    }
    Dyadic(int value) : Dyadic(static_cast<long>(value)) {}
    Dyadic(mpz_class mantissa, std::int64_t exponent = 0) : m_mantissa(std::move(mantissa)), m_exponent(exponent)
    {
        normalise();
    }

    /// 2^k
    static Dyadic pow2(std::int64_t k)
    {
        return Dyadic(mpz_class(1), k);
    }

    const mpz_class &mantissa() const noexcept
    {
        return m_mantissa;
    }
    std::int64_t exponent() const noexcept
    {
        return m_exponent;
    }
    int sign() const noexcept
    {
        return sgn(m_mantissa);
    }
    bool is_zero() const noexcept
    {
        return sign() == 0;
    }

    // Number of bits below the binary point needed to write this value exactly.
    std::int64_t frac_bits() const noexcept
    {
        return m_exponent < 0 ? -m_exponent : 0;
    }
    // floor(log2 |x|) + 1, or 0 for zero.
    std::int64_t magnitude_bits() const
    {
        return is_zero() ? 0 : detail::bit_length(m_mantissa) + m_exponent;
    }

    Dyadic operator-() const
    {
        Dyadic out = *this;
        out.m_mantissa = -out.m_mantissa;
        return out;
    }
    Dyadic abs() const
    {
        return sign() < 0 ? -*this : *this;
    }

    friend Dyadic operator+(const Dyadic &a, const Dyadic &b)
    {
        if (a.is_zero()) {
            return b;
        }
        if (b.is_zero()) {
            return a;
        }
        const std::int64_t e = std::min(a.m_exponent, b.m_exponent);
        return Dyadic(detail::shl(a.m_mantissa, a.m_exponent - e) + detail::shl(b.m_mantissa, b.m_exponent - e), e);
    }
    friend Dyadic operator-(const Dyadic &a, const Dyadic &b)
    {
        return a + (-b);
    }
    friend Dyadic operator*(const Dyadic &a, const Dyadic &b)
    {
        if (a.is_zero() || b.is_zero()) {
            return Dyadic();
        }
        return Dyadic(a.m_mantissa * b.m_mantissa, a.m_exponent + b.m_exponent);
    }
    Dyadic &operator+=(const Dyadic &o)
    {
        return *this = *this + o;
    }
    Dyadic &operator-=(const Dyadic &o)
    {
        return *this = *this - o;
    }
    Dyadic &operator*=(const Dyadic &o)
    {
        return *this = *this * o;
    }

    /// x * 2^k, exact.
    Dyadic ldexp(std::int64_t k) const
    {
        if (is_zero()) {
            return *this;
        }
        Dyadic out = *this;
        out.m_exponent += k;
        return out;
    }
    Dyadic half() const
    {
        return ldexp(-1);
    }

    /// floor(x * 2^bits), exact integer.
    mpz_class scaled_floor(std::int64_t bits) const
    {
        return detail::shl(m_mantissa, m_exponent + bits);
    }
    mpz_class scaled_ceil(std::int64_t bits) const
    {
        const std::int64_t k = m_exponent + bits;
        return k >= 0 ? detail::shl(m_mantissa, k) : detail::ceil_shr(m_mantissa, -k);
    }

    /// Round to the grid 2^-bits in the given direction (nearest: ties away from zero).
    Dyadic round_to(std::int64_t bits, Round dir) const
    {
        if (frac_bits() <= bits) {
            return *this;
        }
        switch (dir) {
        case Round::down: return Dyadic(scaled_floor(bits), -bits);
        case Round::up: return Dyadic(scaled_ceil(bits), -bits);
        case Round::nearest: {
            const mpz_class twice = (abs()).ldexp(1).scaled_floor(bits);
            mpz_class q = detail::floor_shr(twice + 1, 1);
            if (sign() < 0) {
                q = -q;
            }
            return Dyadic(q, -bits);
        }
        }
        return *this;
    }

    /// Keep at most `bits` significant bits, rounding in the given direction.
    Dyadic round_significant(std::int64_t bits, Round dir) const
    {
        if (is_zero() || detail::bit_length(m_mantissa) <= bits) {
            return *this;
        }
        return round_to(bits - magnitude_bits(), dir);
    }

    friend int compare(const Dyadic &a, const Dyadic &b)
    {
        const int sa = a.sign(), sb = b.sign();
        if (sa != sb) {
            return sa < sb ? -1 : 1;
        }
        if (sa == 0) {
            return 0;
        }
        const std::int64_t ma = a.magnitude_bits(), mb = b.magnitude_bits();
        if (ma != mb) {
            return (ma < mb) == (sa > 0) ? -1 : 1;
        }
        const std::int64_t e = std::min(a.m_exponent, b.m_exponent);
        const int c = cmp(detail::shl(a.m_mantissa, a.m_exponent - e), detail::shl(b.m_mantissa, b.m_exponent - e));
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    friend std::strong_ordering operator<=>(const Dyadic &a, const Dyadic &b)
    {
        const int c = compare(a, b);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    friend bool operator==(const Dyadic &a, const Dyadic &b)
    {
        return a.m_exponent == b.m_exponent && a.m_mantissa == b.m_mantissa;
    }

    double to_double() const
    {
        if (is_zero()) {
            return 0.0;
        }
        const std::int64_t bl = detail::bit_length(m_mantissa);
        if (bl > 60) {
            const mpz_class top = detail::floor_shr(abs().m_mantissa, bl - 60);
            const double v = std::ldexp(top.get_d(), static_cast<int>(m_exponent + bl - 60));
            return sign() < 0 ? -v : v;
        }
        return std::ldexp(m_mantissa.get_d(), static_cast<int>(m_exponent));
    }

    /// Text form "MpE", e.g. "5p-4" for 5 * 2^-4.
    std::string str() const
    {
        return m_mantissa.get_str() + "p" + std::to_string(m_exponent);
    }

    /// Parses "MpE" or a plain integer "M".
    static Dyadic parse(std::string_view text)
    {
        const auto p = text.find('p');
        const std::string mant(text.substr(0, p));
        std::int64_t exp = 0;
        if (p != std::string_view::npos) {
            const auto rest = text.substr(p + 1);
            auto first = rest.data();
            if (!rest.empty() && rest.front() == '+') {
                ++first;
            }
            const auto [ptr, ec] = std::from_chars(first, rest.data() + rest.size(), exp);
            if (ec != std::errc{} || ptr != rest.data() + rest.size() || rest.empty()) {
                fail(ErrorCategory::parse_error, "bad dyadic exponent in '" + std::string(text) + "'");
            }
        }
        std::string digits = mant;
        if (!digits.empty() && digits.front() == '+') {
            digits.erase(0, 1);
        }
        const bool neg = !digits.empty() && digits.front() == '-';
        const std::string body = neg ? digits.substr(1) : digits;
        if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos) {
            fail(ErrorCategory::parse_error, "bad dyadic mantissa in '" + std::string(text) + "'");
        }
        return Dyadic(mpz_class(digits, 10), exp);
    }

    std::size_t hash() const noexcept
    {
        const std::size_t h = mpz_sizeinbase(m_mantissa.get_mpz_t(), 2) == 0 ? 0 : mpz_get_ui(m_mantissa.get_mpz_t());
        return h * 1000003u ^ std::hash<std::int64_t>{}(m_exponent) ^ static_cast<std::size_t>(sign() + 1);
    }

private:
    void normalise()
    {
        if (sgn(m_mantissa) == 0) {
            m_exponent = 0;
            return;
        }
        const auto tz = mpz_scan1(m_mantissa.get_mpz_t(), 0);
        if (tz > 0) {
            mpz_fdiv_q_2exp(m_mantissa.get_mpz_t(), m_mantissa.get_mpz_t(), tz);
            m_exponent += static_cast<std::int64_t>(tz);
        }
    }

    mpz_class m_mantissa;
    std::int64_t m_exponent = 0;
};

inline std::ostream &operator<<(std::ostream &os, const Dyadic &d)
{
    return os << d.str();
}

inline Dyadic min(const Dyadic &a, const Dyadic &b)
{
    return b < a ? b : a;
}
inline Dyadic max(const Dyadic &a, const Dyadic &b)
{
    return a < b ? b : a;
}

/// Pair of dyadics, the complex number re + i*im.
struct ComplexDyadic {
    Dyadic re;
    Dyadic im;

    ComplexDyadic() = default;
    ComplexDyadic(Dyadic r, Dyadic i = Dyadic()) : re(std::move(r)), im(std::move(i)) {}

    friend ComplexDyadic operator+(const ComplexDyadic &a, const ComplexDyadic &b)
    {
        return {a.re + b.re, a.im + b.im};
    }
    friend ComplexDyadic operator-(const ComplexDyadic &a, const ComplexDyadic &b)
    {
        return {a.re - b.re, a.im - b.im};
    }
    friend ComplexDyadic operator*(const ComplexDyadic &a, const ComplexDyadic &b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    ComplexDyadic operator-() const
    {
        return {-re, -im};
    }
    ComplexDyadic conj() const
    {
        return {re, -im};
    }
    ComplexDyadic ldexp(std::int64_t k) const
    {
        return {re.ldexp(k), im.ldexp(k)};
    }
    /// |z|^2, exact.
    Dyadic norm2() const
    {
        return re * re + im * im;
    }
    std::int64_t frac_bits() const
    {
        return std::max(re.frac_bits(), im.frac_bits());
    }
    friend bool operator==(const ComplexDyadic &, const ComplexDyadic &) = default;

    /// "re,im" in dyadic text form.
    std::string str() const
    {
        return re.str() + "," + im.str();
    }
    static ComplexDyadic parse(std::string_view text)
    {
        const auto comma = text.find(',');
        if (comma == std::string_view::npos) {
            return {Dyadic::parse(text), Dyadic()};
        }
        return {Dyadic::parse(text.substr(0, comma)), Dyadic::parse(text.substr(comma + 1))};
    }
};

inline std::ostream &operator<<(std::ostream &os, const ComplexDyadic &z)
{
    return os << z.str();
}

} // namespace landau

template <>
struct std::hash<landau::Dyadic> {
    std::size_t operator()(const landau::Dyadic &d) const noexcept
    {
        return d.hash();
    }
};
