#include <gtest/gtest.h>

#include <sstream>

#include "landau/grid.hpp"
#include "oracle.hpp"

using namespace landau;
using oracle::to_mpq;

namespace
{

Dyadic D(long m, long e = 0)
{
    return Dyadic(mpz_class(m), e);
}

CoveringGrid unit_grid(const std::vector<LatticePoint> &pts)
{
    return CoveringGrid::make(D(4), D(1), pts);
}

// max over set points of the squared distance to the nearest lattice point outside the set
std::int64_t brute_s(const std::vector<LatticePoint> &pts)
{
    std::int64_t lo = 0, hi = 0;
    for (const auto &p : pts) {
        lo = std::min({lo, p.i, p.j});
        hi = std::max({hi, p.i, p.j});
    }
    const std::int64_t side = hi - lo + 3;
    std::vector<char> in(static_cast<std::size_t>(side * side), 0);
    auto idx = [&](std::int64_t i, std::int64_t j) { return static_cast<std::size_t>((j - lo + 1) * side + i - lo + 1); };
    for (const auto &p : pts) {
        in[idx(p.i, p.j)] = 1;
    }
    std::vector<LatticePoint> outside;
    for (std::int64_t j = lo - 1; j <= hi + 1; ++j) {
        for (std::int64_t i = lo - 1; i <= hi + 1; ++i) {
            if (!in[idx(i, j)]) {
                outside.push_back({i, j});
            }
        }
    }
    std::int64_t s = 0;
    for (const auto &p : pts) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (const auto &q : outside) {
            best = std::min(best, (p.i - q.i) * (p.i - q.i) + (p.j - q.j) * (p.j - q.j));
        }
        s = std::max(s, best);
    }
    return s;
}

std::vector<LatticePoint> random_points(oracle::Gen &g)
{
    std::vector<LatticePoint> pts;
    const std::int64_t n = g.range(1, 1000);
    const std::int64_t spread = g.range(1, 40);
    const std::int64_t ox = g.range(-50, 50), oy = g.range(-50, 50);
    for (std::int64_t k = 0; k < n; ++k) {
        pts.push_back({ox + g.range(-spread, spread), oy + g.range(-spread, spread)});
    }
    return pts;
}

// Rasterised shapes: discs, rectangles and annuli in lattice units.
std::vector<LatticePoint> raster(oracle::Gen &g)
{
    std::vector<LatticePoint> pts;
    const int kind = static_cast<int>(g.range(0, 2));
    const std::int64_t R = g.range(2, 25), R0 = g.range(0, R - 1);
    const std::int64_t w = g.range(1, 30), h = g.range(1, 30);
    for (std::int64_t j = -40; j <= 40; ++j) {
        for (std::int64_t i = -40; i <= 40; ++i) {
            const std::int64_t d2 = i * i + j * j;
            const bool in = kind == 0   ? d2 < R * R
                            : kind == 1 ? (0 <= i && i < w && 0 <= j && j < h)
                                        : (d2 < R * R && d2 >= R0 * R0);
            if (in) {
                pts.push_back({i, j});
            }
        }
    }
    if (pts.empty()) {
        pts.push_back({0, 0});
    }
    return pts;
}

} // namespace

TEST(Grid, LValueExamples)
{
    const auto single = grid_l_value(unit_grid({{0, 0}}), 40);
    EXPECT_EQ(single.s, 1u);
    EXPECT_EQ(single.lower, D(2));
    EXPECT_EQ(single.upper, D(2));

    std::vector<LatticePoint> block;
    for (std::int64_t j = -1; j <= 1; ++j) {
        for (std::int64_t i = -1; i <= 1; ++i) {
            block.push_back({i, j});
        }
    }
    const auto b = grid_l_value(unit_grid(block), 40);
    EXPECT_EQ(b.s, 4u);
    EXPECT_EQ(b.lower, D(3));

    const auto pair = grid_l_value(unit_grid({{0, 0}, {1, 0}}), 40);
    EXPECT_EQ(pair.s, 1u);

    // l scales with delta, and sqrt 2 is enclosed tightly
    const auto diag = grid_l_value(CoveringGrid::make(D(1, -2), D(1, -4), block), 50);
    EXPECT_EQ(diag.s, 4u);
    EXPECT_EQ(diag.lower, D(3, -4));
}

TEST(Grid, TransformMatchesBruteForce)
{
    oracle::Gen g(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = random_points(g);
        const auto est = grid_l_value(unit_grid(pts), 30, trial % 3 + 1);
        ASSERT_EQ(static_cast<std::int64_t>(est.s), brute_s(pts)) << trial;
        ASSERT_LE(est.lower, est.upper);
        ASSERT_LT(est.upper - est.lower, Dyadic::pow2(-30));
    }
}

TEST(Grid, CoveredSetExamples)
{
    const CoveringGrid g = unit_grid({{0, 0}});
    // radius 3 eps / 4 = 3, open
    EXPECT_TRUE(covered_contains(g, ComplexDyadic(D(23, -3))));
    EXPECT_TRUE(covered_contains(g, ComplexDyadic(D(2), D(2))));
    EXPECT_FALSE(covered_contains(g, ComplexDyadic(D(3))));
    EXPECT_FALSE(covered_contains(g, ComplexDyadic(D(-3), D(1, -10))));
    const CoveringGrid far = unit_grid({{10, -7}});
    EXPECT_TRUE(covered_contains(far, ComplexDyadic(D(12), D(-7))));
    EXPECT_FALSE(covered_contains(far, ComplexDyadic()));
}

TEST(Grid, LargestDiscExamples)
{
    // a rasterised disc of radius 10 holds a disc of radius about 10
    std::vector<LatticePoint> disc;
    for (std::int64_t j = -12; j <= 12; ++j) {
        for (std::int64_t i = -12; i <= 12; ++i) {
            if (i * i + j * j < 100) {
                disc.push_back({i, j});
            }
        }
    }
    const Enclosure e = brute_largest_disc(LatticeMask::from_points(disc), D(1), 30);
    EXPECT_LE(e.lo, D(10));
    EXPECT_GE(e.hi, D(10));
    const Enclosure one = brute_largest_disc(LatticeMask::from_points({{3, 3}}), D(1, -2), 30);
    EXPECT_EQ(one.lo, Dyadic());
    EXPECT_EQ(one.hi, D(1, -1));
    EXPECT_THROW(brute_largest_disc(LatticeMask(0, 0, 3, 3), D(1), 10), Error);
}

TEST(Grid, LValueSandwichedOnRasterisedShapes)
{
    oracle::Gen g(32);
    for (int trial = 0; trial < 50; ++trial) {
        const auto pts = raster(g);
        const auto mask = LatticeMask::from_points(pts);
        const Dyadic delta = Dyadic::pow2(-static_cast<long>(g.range(0, 6)));
        const auto est = grid_l_value(CoveringGrid::make(delta.ldexp(2), delta, mask), 30);
        const Enclosure disc = brute_largest_disc(mask, delta, 30);
        ASSERT_LE(disc.lo, est.lower) << trial;
        ASSERT_LE(est.upper, disc.hi + Dyadic::pow2(-30)) << trial;
        ASSERT_LE(est.upper - disc.lo, delta.ldexp(1) + Dyadic::pow2(-29)) << trial;
    }
}

TEST(Grid, MaskOperations)
{
    LatticeMask a(-2, -2, 5, 5), b(-2, -2, 5, 5);
    a.set(0, 0);
    b.set(1, -1);
    a.merge(b);
    EXPECT_EQ(a.count(), 2u);
    const auto pts = a.points();
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[0].i, 1);
    EXPECT_EQ(pts[0].j, -1);
    const LatticeMask c = a.cropped();
    EXPECT_EQ(c.width(), 2);
    EXPECT_EQ(c.height(), 2);
    EXPECT_TRUE(c.test(0, 0));
    EXPECT_FALSE(c.test(5, 5));
    EXPECT_THROW(CoveringGrid::make(D(1), D(1, -1), a), Error);
    EXPECT_THROW(CoveringGrid::make(D(1), D(1, -2), LatticeMask(0, 0, 2, 2)), Error);
}

TEST(Grid, DomainRowsAreExact)
{
    const Dyadic r = D(1, -1), d = D(3, -6);
    const auto rows = detail::disc_rows(r, d);
    const mpq_class r2 = to_mpq(r) * to_mpq(r), d2 = to_mpq(d) * to_mpq(d);
    std::uint64_t count = 0;
    for (std::int64_t a = -20; a <= 20; ++a) {
        for (std::int64_t b = -20; b <= 20; ++b) {
            const bool in = mpq_class(a * a + b * b) * d2 < r2;
            count += in;
            GridBuildTrace t;
            t.domain_rows = rows;
            ASSERT_EQ(t.in_domain(a, b), in) << a << " " << b;
        }
    }
    std::uint64_t total = 0;
    for (const auto &[a, b] : rows) {
        total += static_cast<std::uint64_t>(2 * b + 1);
    }
    EXPECT_EQ(total, count);
}

TEST(Grid, IdentityImageGrid)
{
    const BoundSchedule s;
    PiStream stream = encode_coefficients({}, s, 64);
    const PolynomialBounds bounds({}, s, 64, "identity");
    const Dyadic r = D(1, -1), eps = Dyadic::pow2(-5);
    GridOptions opt;
    opt.trace = true;
    const ImageGrid img = grid_from_image(stream, s, r, eps, bounds, opt);
    const CoveringGrid &g = img.grid;
    EXPECT_EQ(g.delta, eps.ldexp(-2));
    EXPECT_LE(img.trace.delta_D.ldexp(4) * img.trace.mu1, eps);
    EXPECT_TRUE(img.trace.in_domain(0, 0));
    EXPECT_TRUE(g.contains(0, 0));
    EXPECT_EQ(img.trace.approx_values.size(), img.trace.domain_points);

    // (a) the image of the disc is covered: f(z) = z up to the encoding error
    oracle::Gen gen(33);
    for (int i = 0; i < 1000; ++i) {
        const ComplexDyadic z = gen.in_disc(20, r);
        ASSERT_TRUE(covered_contains(g, z)) << z.str();
    }
    // (b) every grid point is within eps of the image
    const mpq_class bound = to_mpq(r + eps);
    for (const auto &p : g.points.points()) {
        const mpq_class x = to_mpq(g.delta) * p.i, y = to_mpq(g.delta) * p.j;
        ASSERT_LT(x * x + y * y, bound * bound);
    }
    // the largest covered disc has radius close to r
    const auto est = grid_l_value(g, 30);
    EXPECT_LE((est.lower - r).abs(), g.delta.ldexp(2));

    // multithreaded construction gives the same set
    opt.trace = false;
    opt.threads = 3;
    const ImageGrid again = grid_from_image(stream, s, r, eps, bounds, opt);
    EXPECT_EQ(again.grid.points.points().size(), g.points.points().size());
    std::ostringstream x, y;
    write_grid_csv(x, g);
    write_grid_csv(y, again.grid);
    EXPECT_EQ(x.str(), y.str());
    EXPECT_EQ(x.str().rfind("eps,delta\n1p-5,1p-7\ni,j\n", 0), 0u);
}

TEST(Grid, ResourceCaps)
{
    const BoundSchedule s;
    PiStream stream = encode_coefficients({}, s, 64);
    const PolynomialBounds bounds({}, s, 64, "identity");
    GridOptions opt;
    opt.max_grid_cells = 100;
    try {
        grid_from_image(stream, s, D(1, -1), Dyadic::pow2(-6), bounds, opt);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.category(), ErrorCategory::resource_cap);
    }
    opt = {};
    opt.max_domain_points = 1000;
    try {
        grid_from_image(stream, s, D(1, -1), Dyadic::pow2(-6), bounds, opt);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.category(), ErrorCategory::resource_cap);
    }
}

TEST(Grid, UnderstatedBoundsAreDetected)
{
    // claims |f'| <= 1 on a function with f'(z) = 1 - 2z
    const BoundSchedule s;
    PiStream stream = encode_coefficients({ComplexDyadic(D(-2))}, s, 64);
    const PolynomialBounds wrong({}, s, 64, "identity");
    try {
        grid_from_image(stream, s, D(3, -2), Dyadic::pow2(-4), wrong);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.category(), ErrorCategory::bounds_audit_failed);
    }
}
