#include <gtest/gtest.h>

#include "landau/bounds.hpp"
#include "oracle.hpp"

using namespace landau;
using oracle::ComplexQ;
using oracle::to_mpq;

namespace
{

constexpr std::uint64_t depth = 80;

Dyadic D(long m, long e = 0)
{
    return Dyadic(mpz_class(m), e);
}

std::vector<std::vector<ComplexDyadic>> fixtures()
{
    return {
        {},
        {ComplexDyadic(D(-2))},
        {ComplexDyadic(D(1, -1)), ComplexDyadic(Dyadic(), D(1, -2))},
        {ComplexDyadic(), ComplexDyadic(), ComplexDyadic(D(1, -3), D(-1, -2))},
        {ComplexDyadic(D(-1)), ComplexDyadic(D(1, -1)), ComplexDyadic(D(-1, -2)), ComplexDyadic(D(1, -3), D(1, -3))},
    };
}

// |w - exact| <= bound, exactly.
bool within(const ComplexDyadic &w, const ComplexQ &exact, const Dyadic &bound)
{
    const ComplexQ d{to_mpq(w.re) - exact.re, to_mpq(w.im) - exact.im};
    const mpq_class b = to_mpq(bound);
    return oracle::norm2(d) <= b * b;
}

// The encoded stream's coefficients differ from the targets by at most 2 sqrt2 m_n 2^-depth.
Dyadic encoding_slack(const BoundSchedule &s, unsigned k, const Dyadic &r)
{
    return weighted_majorant(s, k, r, 1).ldexp(1 - static_cast<std::int64_t>(depth));
}

} // namespace

TEST(Series, ValueAntiderivativeAndDerivativesMatchPolynomials)
{
    const BoundSchedule s;
    oracle::Gen g(21);
    const Dyadic tol = Dyadic::pow2(-30);
    for (const auto &coeffs : fixtures()) {
        PiStream stream = encode_coefficients(coeffs, s, depth);
        for (int i = 0; i < 25; ++i) {
            const ComplexDyadic z = g.in_disc(10, D(7, -3));
            const ComplexQ zq = oracle::to_q(z);
            const Dyadic r = derive_shell(z);
            const auto f = eval_series(stream, s, {EvalOrder::antiderivative(), z, tol});
            ASSERT_TRUE(within(f, oracle::poly_antiderivative(coeffs, zq), tol + encoding_slack(s, 0, r))) << z.str();
            const auto v = eval_series(stream, s, {EvalOrder::value(), z, tol});
            ASSERT_TRUE(within(v, oracle::poly_value(coeffs, zq), tol + encoding_slack(s, 0, r))) << z.str();
            for (unsigned k = 1; k <= 2; ++k) {
                const auto d = eval_series(stream, s, {EvalOrder::derivative(k), z, tol});
                ASSERT_TRUE(within(d, oracle::poly_derivative(coeffs, zq, k), tol + encoding_slack(s, k, r)))
                    << k << " " << z.str();
            }
        }
    }
}

TEST(Series, AntiderivativeVanishesAtOrigin)
{
    const BoundSchedule s;
    for (const auto &coeffs : fixtures()) {
        PiStream stream = encode_coefficients(coeffs, s, depth);
        EXPECT_EQ(eval_series(stream, s, {EvalOrder::antiderivative(), ComplexDyadic(), Dyadic::pow2(-40)}, D(1, -1)),
                  ComplexDyadic());
    }
}

TEST(Series, BackendsAgreeExactly)
{
    const BoundSchedule s;
    oracle::Gen g(22);
    for (int trial = 0; trial < 10; ++trial) {
        Word w;
        for (int i = 0; i < 400; ++i) {
            w.push_back(static_cast<Symbol>(g.range(1, 4)));
        }
        PiStream stream = PiStream::from_word(w, static_cast<Symbol>(g.range(1, 4)));
        for (const EvalOrder order : {EvalOrder::antiderivative(), EvalOrder::value(), EvalOrder::derivative(1)}) {
            const Dyadic r = D(1, -1);
            const PreparedSeries wide(stream, s, order, r, Dyadic::pow2(-12), 16, Backend::wide);
            const PreparedSeries big(stream, s, order, r, Dyadic::pow2(-12), 16, Backend::big);
            EXPECT_TRUE(wide.wide());
            EXPECT_FALSE(big.wide());
            for (int i = 0; i < 50; ++i) {
                const ComplexDyadic z = g.in_disc(14, r);
                ASSERT_EQ(wide(z), big(z));
            }
        }
    }
}

TEST(Series, RandomStreamsAgreeWithTighterTolerance)
{
    // Two evaluations at tolerances t1, t2 are both within their tolerance of the same value.
    const BoundSchedule s;
    oracle::Gen g(23);
    for (int trial = 0; trial < 10; ++trial) {
        Word w;
        for (int i = 0; i < 2000; ++i) {
            w.push_back(static_cast<Symbol>(g.range(1, 4)));
        }
        PiStream stream = PiStream::from_word(w);
        for (int i = 0; i < 10; ++i) {
            const ComplexDyadic z = g.in_disc(12, D(3, -2));
            const Dyadic t1 = Dyadic::pow2(-10), t2 = Dyadic::pow2(-40);
            const auto a = eval_series(stream, s, {EvalOrder::value(), z, t1});
            const auto b = eval_series(stream, s, {EvalOrder::value(), z, t2});
            ASSERT_TRUE(within(a, oracle::to_q(b), t1 + t2));
        }
    }
}

TEST(Series, SupBoundsHoldOnSamples)
{
    const BoundSchedule s;
    oracle::Gen g(24);
    const Dyadic tol = Dyadic::pow2(-20);
    for (int trial = 0; trial < 8; ++trial) {
        Word w;
        for (int i = 0; i < 3000; ++i) {
            w.push_back(static_cast<Symbol>(g.range(1, 4)));
        }
        PiStream stream = PiStream::from_word(w, static_cast<Symbol>(g.range(1, 4)));
        const GenericBounds generic(s);
        const StreamMajorantBounds majorant(stream, s);
        for (const Dyadic &r : {D(1, -1), D(3, -2)}) {
            const PreparedSeries f1(stream, s, EvalOrder::value(), r, tol, 16);
            const PreparedSeries f2(stream, s, EvalOrder::derivative(1), r, tol, 16);
            for (int i = 0; i < 40; ++i) {
                const ComplexDyadic z = g.in_disc(12, r);
                for (const BoundsProvider *b : {static_cast<const BoundsProvider *>(&generic),
                                                static_cast<const BoundsProvider *>(&majorant)}) {
                    const Dyadic l1 = b->fprime_bound(r) + tol, l2 = b->fsecond_bound(r) + tol;
                    ASSERT_LE(f1(z).norm2(), l1 * l1);
                    ASSERT_LE(f2(z).norm2(), l2 * l2);
                }
            }
            EXPECT_NO_THROW(audit_bounds(majorant, stream, s, r));
            EXPECT_LE(majorant.fprime_bound(r), generic.fprime_bound(r));
        }
    }
}

TEST(Series, PolynomialBoundsAndAudit)
{
    const BoundSchedule s;
    const std::vector<ComplexDyadic> a1{ComplexDyadic(D(-2))};
    PiStream stream = encode_coefficients(a1, s, 64);
    const PolynomialBounds bounds(a1, s, 64, "a1");
    const Dyadic r = D(1, -1);
    // f'(z) = 1 - 2z: sup over |z| <= 1/2 is 2, f'' = -2
    EXPECT_GE(bounds.fprime_bound(r), D(2));
    EXPECT_LT(bounds.fprime_bound(r), D(2) + Dyadic::pow2(-40));
    EXPECT_GE(bounds.fsecond_bound(r), D(2));
    EXPECT_LT(bounds.fsecond_bound(r), D(2) + Dyadic::pow2(-40));
    EXPECT_EQ(bounds.provenance(), "a1:depth=64");
    EXPECT_NO_THROW(audit_bounds(bounds, stream, s, r));

    // identity bounds claimed for a stream with a1 = -2 are caught by the audit
    const PolynomialBounds wrong({}, s, 64, "identity");
    try {
        audit_bounds(wrong, stream, s, r);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.category(), ErrorCategory::bounds_audit_failed);
    }
}

TEST(Series, DeterministicAndLogged)
{
    const BoundSchedule s;
    PiStream a = encode_coefficients({ComplexDyadic(D(1, -1), D(-1, -2))}, s, 40);
    PiStream b = encode_coefficients({ComplexDyadic(D(1, -1), D(-1, -2))}, s, 40);
    const ComplexDyadic z(D(3, -3), D(-1, -2));
    const auto x = eval_series(a, s, {EvalOrder::value(), z, Dyadic::pow2(-24)});
    const auto y = eval_series(b, s, {EvalOrder::value(), z, Dyadic::pow2(-24)});
    EXPECT_EQ(x, y);
    EXPECT_EQ(query_depth(a), query_depth(b));
    EXPECT_GT(query_depth(a), 0u);
}

TEST(Series, PlanShrinksWithTolerance)
{
    const BoundSchedule s;
    PiStream stream = PiStream::from_word({}, 2);
    const PreparedSeries coarse(stream, s, EvalOrder::value(), D(1, -1), Dyadic::pow2(-8));
    const PreparedSeries fine(stream, s, EvalOrder::value(), D(1, -1), Dyadic::pow2(-40));
    EXPECT_LT(coarse.plan().terms, fine.plan().terms);
    EXPECT_LE(coarse.plan().digits, fine.plan().digits);
    EXPECT_LT(coarse.plan().frac_bits, fine.plan().frac_bits);
    EXPECT_EQ(EvalOrder::derivative(2).name(), "derivative(2)");
    EXPECT_EQ(EvalOrder::derivative(0), EvalOrder::value());
}

TEST(Series, Errors)
{
    const BoundSchedule s;
    PiStream stream = PiStream::from_word({});
    const auto category = [&](auto &&fn) -> std::optional<ErrorCategory> {
        try {
            fn();
        } catch (const Error &e) {
            return e.category();
        }
        return std::nullopt;
    };
    EXPECT_EQ(category([&] { eval_series(stream, s, {EvalOrder::value(), ComplexDyadic(D(1)), D(1, -10)}); }),
              ErrorCategory::point_outside_disc);
    EXPECT_EQ(category([&] { eval_series(stream, s, {EvalOrder::value(), ComplexDyadic(D(3, -2)), D(1, -10)}, D(1, -1)); }),
              ErrorCategory::point_outside_disc);
    EXPECT_EQ(category([&] { eval_series(stream, s, {EvalOrder::value(), ComplexDyadic(), Dyadic()}); }),
              ErrorCategory::invalid_argument);
    EXPECT_EQ(category([&] {
                  PreparedSeries(stream, s, EvalOrder::value(), D(1) - Dyadic::pow2(-30), Dyadic::pow2(-100));
              }),
              ErrorCategory::tolerance_too_tight);
    EXPECT_EQ(category([&] { PreparedSeries(stream, s, EvalOrder::value(), D(1), D(1, -4)); }),
              ErrorCategory::radius_out_of_range);
}
