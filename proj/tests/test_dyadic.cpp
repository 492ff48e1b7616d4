#include <gtest/gtest.h>

#include "landau/approx.hpp"
#include "oracle.hpp"

using namespace landau;
using oracle::to_mpq;

TEST(Dyadic, CanonicalForm)
{
    EXPECT_EQ(Dyadic(12).mantissa(), 3);
    EXPECT_EQ(Dyadic(12).exponent(), 2);
    EXPECT_EQ(Dyadic(0).exponent(), 0);
    EXPECT_EQ(Dyadic(mpz_class(0), -7), Dyadic());
    EXPECT_EQ(Dyadic(mpz_class(6), -3), Dyadic(mpz_class(3), -2));
    EXPECT_EQ(Dyadic::pow2(-5).str(), "1p-5");
}

TEST(Dyadic, ParseAndPrint)
{
    EXPECT_EQ(Dyadic::parse("5p-4"), Dyadic(mpz_class(5), -4));
    EXPECT_EQ(Dyadic::parse("-3"), Dyadic(-3));
    EXPECT_EQ(Dyadic::parse("1p3"), Dyadic(8));
    EXPECT_EQ(Dyadic(mpz_class(-5), -4).str(), "-5p-4");
    EXPECT_EQ(Dyadic().str(), "0p0");
    EXPECT_THROW(Dyadic::parse("1.5"), Error);
    EXPECT_THROW(Dyadic::parse("p3"), Error);
    EXPECT_EQ(ComplexDyadic::parse("1p-2,-3"), ComplexDyadic(Dyadic(mpz_class(1), -2), Dyadic(-3)));
}

TEST(Dyadic, RoundTripRandom)
{
    oracle::Gen g(11);
    for (int i = 0; i < 500; ++i) {
        const Dyadic d = g.dyadic();
        EXPECT_EQ(Dyadic::parse(d.str()), d);
    }
}

TEST(Dyadic, RingOpsAgreeWithRationals)
{
    oracle::Gen g(1);
    for (int i = 0; i < 10000; ++i) {
        const Dyadic a = g.dyadic(), b = g.dyadic();
        const mpq_class qa = to_mpq(a), qb = to_mpq(b);
        ASSERT_EQ(to_mpq(a + b), qa + qb);
        ASSERT_EQ(to_mpq(a - b), qa - qb);
        ASSERT_EQ(to_mpq(a * b), qa * qb);
        ASSERT_EQ(to_mpq(-a), -qa);
        ASSERT_EQ(to_mpq(a.half()), qa / 2);
        ASSERT_EQ(a < b, qa < qb);
        ASSERT_EQ(a == b, qa == qb);
    }
}

TEST(Dyadic, RoundingDirections)
{
    oracle::Gen g(2);
    for (int i = 0; i < 2000; ++i) {
        const Dyadic a = g.dyadic(120, 40);
        const std::int64_t bits = g.range(-10, 40);
        const Dyadic lo = a.round_to(bits, Round::down), hi = a.round_to(bits, Round::up);
        const Dyadic nr = a.round_to(bits, Round::nearest);
        const Dyadic ulp = Dyadic::pow2(-bits);
        ASSERT_LE(lo, a);
        ASSERT_GE(hi, a);
        ASSERT_LT(hi - lo, ulp + ulp.half());
        ASSERT_LE(lo.frac_bits(), std::max<std::int64_t>(bits, 0));
        ASSERT_LE((nr - a).abs(), ulp.half());
        const Dyadic sig = a.round_significant(16, Round::down);
        ASSERT_LE(sig, a);
        ASSERT_LE(detail::bit_length(sig.mantissa()), 16);
    }
}

TEST(Approx, DivisionEnclosures)
{
    oracle::Gen g(3);
    for (int i = 0; i < 5000; ++i) {
        const Dyadic x = g.dyadic(100, 30), y = g.dyadic(100, 30);
        if (y.is_zero()) {
            continue;
        }
        const std::int64_t n = g.range(0, 80);
        const mpq_class exact = to_mpq(x) / to_mpq(y);
        const mpq_class lo = to_mpq(div_approx(x, y, n, Round::down));
        const mpq_class hi = to_mpq(div_approx(x, y, n, Round::up));
        const mpq_class nr = to_mpq(div_approx(x, y, n, Round::nearest));
        const mpq_class width = to_mpq(Dyadic::pow2(-n));
        ASSERT_LE(lo, exact);
        ASSERT_GE(hi, exact);
        ASSERT_LT(exact - lo, width);
        ASSERT_LT(hi - exact, width);
        ASSERT_LE(abs(nr - exact), width / 2);
    }
    EXPECT_THROW(div_approx(Dyadic(1), Dyadic(), 10), Error);
    try {
        div_approx(Dyadic(1), Dyadic(), 10);
    } catch (const Error &e) {
        EXPECT_EQ(e.category(), ErrorCategory::division_by_zero);
    }
}

TEST(Approx, SquareRootEnclosures)
{
    oracle::Gen g(4);
    for (int i = 0; i < 5000; ++i) {
        const Dyadic x = g.dyadic(100, 30).abs();
        const std::int64_t n = g.range(0, 80);
        const Dyadic lo = sqrt_approx(x, n, Round::down), hi = sqrt_approx(x, n, Round::up);
        const Dyadic nr = sqrt_approx(x, n, Round::nearest);
        const mpq_class qx = to_mpq(x);
        const mpq_class width = to_mpq(Dyadic::pow2(-n));
        ASSERT_LE(to_mpq(lo * lo), qx);
        ASSERT_GE(to_mpq(hi * hi), qx);
        ASSERT_LE(to_mpq(hi - lo), width);
        ASSERT_GE(lo.sign(), 0);
        ASSERT_TRUE(nr == lo || nr == hi);
        // nearest: |nr - sqrt x| <= 2^-(n+1)
        const Dyadic h = Dyadic::pow2(-n - 1);
        const Dyadic below = nr - h, above = nr + h;
        ASSERT_TRUE(below.sign() <= 0 || to_mpq(below * below) <= qx);
        ASSERT_GE(to_mpq(above * above), qx);
    }
    EXPECT_EQ(sqrt_approx(Dyadic(mpz_class(9), -4), 10, Round::up), Dyadic(mpz_class(3), -2));
    EXPECT_EQ(sqrt_approx(Dyadic(mpz_class(9), -4), 10, Round::down), Dyadic(mpz_class(3), -2));
    EXPECT_THROW(sqrt_approx(Dyadic(-1), 10), Error);
}

TEST(Approx, EulerEnclosureAgainstMpfr)
{
    const Enclosure e = euler_e(300);
    EXPECT_LE(oracle::cmp(e.lo, oracle::e(MPFR_RNDU)), 0);
    EXPECT_GE(oracle::cmp(e.hi, oracle::e(MPFR_RNDD)), 0);
    EXPECT_LT(e.width(), Dyadic::pow2(-300));
    const Enclosure s = sqrt2(200);
    EXPECT_LE(oracle::cmp(s.lo, oracle::sqrt2(MPFR_RNDU)), 0);
    EXPECT_GE(oracle::cmp(s.hi, oracle::sqrt2(MPFR_RNDD)), 0);
}

TEST(Approx, PowUpIsUpperBound)
{
    oracle::Gen g(5);
    for (int i = 0; i < 300; ++i) {
        const Dyadic x = g.unit(30).abs();
        const auto k = static_cast<std::uint64_t>(g.range(0, 60));
        mpq_class exact = 1;
        for (std::uint64_t j = 0; j < k; ++j) {
            exact *= to_mpq(x);
        }
        const Dyadic p = pow_up(x, k, 64);
        ASSERT_GE(to_mpq(p), exact);
        ASSERT_LE(to_mpq(p) - exact, to_mpq(Dyadic::pow2(-56)));
    }
}
