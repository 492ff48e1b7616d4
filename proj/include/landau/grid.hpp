#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "landau/bounds.hpp"
#include "landau/parallel.hpp"

namespace landau
{

/// Lattice coordinates (i, j) standing for (i delta, j delta).
struct LatticePoint {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend bool operator==(const LatticePoint &, const LatticePoint &) = default;
    friend auto operator<=>(const LatticePoint &, const LatticePoint &) = default;
};

/// Dense bitmap of lattice points over the rectangle [x0, x0+width) x [y0, y0+height).
class LatticeMask
{
public:
    LatticeMask() = default;
    LatticeMask(std::int64_t x0, std::int64_t y0, std::int64_t width, std::int64_t height)
        : m_x0(x0), m_y0(y0), m_width(width), m_height(height),
          m_bits(static_cast<std::size_t>(width * height), 0)
    {
        if (width < 0 || height < 0) {
            fail(ErrorCategory::invalid_argument, "negative mask extent");
        }
    }

    static LatticeMask from_points(const std::vector<LatticePoint> &points)
    {
        if (points.empty()) {
            return {};
        }
        std::int64_t x0 = points[0].i, x1 = x0, y0 = points[0].j, y1 = y0;
        for (const auto &p : points) {
            x0 = std::min(x0, p.i);
            x1 = std::max(x1, p.i);
            y0 = std::min(y0, p.j);
            y1 = std::max(y1, p.j);
        }
        LatticeMask m(x0, y0, x1 - x0 + 1, y1 - y0 + 1);
        for (const auto &p : points) {
            m.set(p.i, p.j);
        }
        return m;
    }

    std::int64_t x0() const noexcept
    {
        return m_x0;
    }
    std::int64_t y0() const noexcept
    {
        return m_y0;
    }
    std::int64_t width() const noexcept
    {
        return m_width;
    }
    std::int64_t height() const noexcept
    {
        return m_height;
    }
    bool in_range(std::int64_t i, std::int64_t j) const noexcept
    {
        return i >= m_x0 && i < m_x0 + m_width && j >= m_y0 && j < m_y0 + m_height;
    }
    bool test(std::int64_t i, std::int64_t j) const noexcept
    {
        return in_range(i, j) && m_bits[index(i, j)] != 0;
    }
    void set(std::int64_t i, std::int64_t j)
    {
        if (!in_range(i, j)) {
            fail(ErrorCategory::invalid_argument,
                 "lattice point (" + std::to_string(i) + "," + std::to_string(j) + ") is outside the mask");
        }
        m_bits[index(i, j)] = 1;
    }
    void merge(const LatticeMask &other)
    {
        if (other.m_x0 != m_x0 || other.m_y0 != m_y0 || other.m_width != m_width || other.m_height != m_height) {
            fail(ErrorCategory::invalid_argument, "merging masks of different extent");
        }
        for (std::size_t k = 0; k < m_bits.size(); ++k) {
            m_bits[k] |= other.m_bits[k];
        }
    }

    std::uint64_t count() const noexcept
    {
        return static_cast<std::uint64_t>(std::count(m_bits.begin(), m_bits.end(), std::uint8_t{1}));
    }
    bool empty() const noexcept
    {
        return count() == 0;
    }

    /// Set points, row by row (j ascending, then i ascending).
    std::vector<LatticePoint> points() const
    {
        std::vector<LatticePoint> out;
        for (std::int64_t y = 0; y < m_height; ++y) {
            for (std::int64_t x = 0; x < m_width; ++x) {
                if (m_bits[static_cast<std::size_t>(y * m_width + x)]) {
                    out.push_back({m_x0 + x, m_y0 + y});
                }
            }
        }
        return out;
    }

    /// Same set on its tight bounding box.
    LatticeMask cropped() const
    {
        std::int64_t x0 = std::numeric_limits<std::int64_t>::max(), y0 = x0;
        std::int64_t x1 = std::numeric_limits<std::int64_t>::min(), y1 = x1;
        for (std::int64_t y = 0; y < m_height; ++y) {
            for (std::int64_t x = 0; x < m_width; ++x) {
                if (m_bits[static_cast<std::size_t>(y * m_width + x)]) {
                    x0 = std::min(x0, x);
                    x1 = std::max(x1, x);
                    y0 = std::min(y0, y);
                    y1 = std::max(y1, y);
                }
            }
        }
        if (x1 < x0) {
            return {};
        }
        LatticeMask out(m_x0 + x0, m_y0 + y0, x1 - x0 + 1, y1 - y0 + 1);
        for (std::int64_t y = y0; y <= y1; ++y) {
            std::copy_n(m_bits.begin() + (y * m_width + x0), x1 - x0 + 1,
                        out.m_bits.begin() + (y - y0) * out.m_width);
        }
        return out;
    }

    friend bool operator==(const LatticeMask &a, const LatticeMask &b) = default;

private:
    std::size_t index(std::int64_t i, std::int64_t j) const noexcept
    {
        return static_cast<std::size_t>((j - m_y0) * m_width + (i - m_x0));
    }

    std::int64_t m_x0 = 0, m_y0 = 0, m_width = 0, m_height = 0;
    std::vector<std::uint8_t> m_bits;
};

/// A covering grid (eps, delta, G): G is a finite non-empty set of delta-lattice points and
/// delta <= eps / 4.
struct CoveringGrid {
    Dyadic eps;
    Dyadic delta;
    LatticeMask points;

    static CoveringGrid make(Dyadic eps, Dyadic delta, LatticeMask points)
    {
        if (delta.sign() <= 0 || delta.ldexp(2) > eps) {
            fail(ErrorCategory::invalid_argument, "a covering grid needs 0 < delta <= eps/4");
        }
        if (points.empty()) {
            fail(ErrorCategory::empty_mask, "a covering grid needs at least one point");
        }
        return {std::move(eps), std::move(delta), points.cropped()};
    }
    static CoveringGrid make(Dyadic eps, Dyadic delta, const std::vector<LatticePoint> &points)
    {
        return make(std::move(eps), std::move(delta), LatticeMask::from_points(points));
    }
    std::uint64_t size() const noexcept
    {
        return points.count();
    }
    bool contains(std::int64_t i, std::int64_t j) const noexcept
    {
        return points.test(i, j);
    }
};

/// s = max over G of the squared lattice distance to the complement, and an enclosure of
/// l = delta (1 + sqrt s).
struct DiscEstimate {
    std::uint64_t s = 0;
    Dyadic lower;
    Dyadic upper;
};

namespace detail
{

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

// Exact squared Euclidean distance transform (Meijster et al.) of the complement of `mask`
// over its extent inflated by one cell on each side; the border is complement, so every
// distance is finite. Row-major over the inflated extent.
inline std::vector<std::int64_t> complement_edt(const LatticeMask &mask, unsigned threads)
{
    const std::int64_t W = mask.width() + 2, H = mask.height() + 2;
    const std::int64_t x0 = mask.x0() - 1, y0 = mask.y0() - 1;
    std::vector<std::int64_t> g(static_cast<std::size_t>(W * H));
    auto at = [W](std::int64_t x, std::int64_t y) { return static_cast<std::size_t>(y * W + x); };

    // column pass: distance to the nearest complement cell in the same column
    parallel_for(static_cast<std::size_t>(W), threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (auto x = static_cast<std::int64_t>(b); x < static_cast<std::int64_t>(e); ++x) {
            // rows 0 and H-1 are complement, so d starts at 0 in both sweeps
            std::int64_t d = 0;
            for (std::int64_t y = 0; y < H; ++y) {
                d = mask.test(x0 + x, y0 + y) ? d + 1 : 0;
                g[at(x, y)] = d;
            }
            for (std::int64_t y = H - 1; y >= 0; --y) {
                d = g[at(x, y)] == 0 ? 0 : d + 1;
                g[at(x, y)] = std::min(g[at(x, y)], d);
            }
        }
    });

    // row pass: lower envelope of parabolas (x - u)^2 + g(u)^2
    std::vector<std::int64_t> dt(g.size());
    parallel_for(static_cast<std::size_t>(H), threads, [&](std::size_t b, std::size_t e, unsigned) {
        std::vector<std::int64_t> s(static_cast<std::size_t>(W)), t(static_cast<std::size_t>(W));
        for (auto y = static_cast<std::int64_t>(b); y < static_cast<std::int64_t>(e); ++y) {
            auto G = [&](std::int64_t u) { return g[at(u, y)] * g[at(u, y)]; };
            auto f = [&](std::int64_t x, std::int64_t u) { return (x - u) * (x - u) + G(u); };
            // parabola u is no worse than parabola i (i < u) for x > sep(i, u)
            auto sep = [&](std::int64_t i, std::int64_t u) {
                return floor_div(u * u - i * i + G(u) - G(i), 2 * (u - i));
            };
            std::int64_t q = 0;
            s[0] = 0;
            t[0] = 0;
            for (std::int64_t u = 1; u < W; ++u) {
                while (q >= 0 && f(t[q], s[q]) > f(t[q], u)) {
                    --q;
                }
                if (q < 0) {
                    q = 0;
                    s[0] = u;
                } else {
                    const std::int64_t w = 1 + sep(s[q], u);
                    if (w < W) {
                        ++q;
                        s[q] = u;
                        t[q] = w;
                    }
                }
            }
            for (std::int64_t x = W - 1; x >= 0; --x) {
                dt[at(x, y)] = f(x, s[q]);
                if (x == t[q]) {
                    --q;
                }
            }
        }
    });
    return dt;
}

// Enclosure of delta (1 + sqrt s) of width below 2^-prec.
inline std::pair<Dyadic, Dyadic> radius_enclosure(const Dyadic &delta, std::uint64_t s, std::int64_t prec)
{
    const std::int64_t bits = prec + std::max<std::int64_t>(0, delta.magnitude_bits()) + 2;
    const Dyadic sd(mpz_class(static_cast<unsigned long>(s)));
    const Dyadic lo = delta * (Dyadic(1) + sqrt_approx(sd, bits, Round::down));
    const Dyadic hi = delta * (Dyadic(1) + sqrt_approx(sd, bits, Round::up));
    return {lo, hi};
}

} // namespace detail

/// l(eps, delta, G) = delta + max_{z in G} min_{y not in G} |z - y|, computed exactly as an
/// integer s in units of delta^2, then enclosed to within 2^-prec.
inline DiscEstimate grid_l_value(const CoveringGrid &g, std::int64_t prec, unsigned threads = 1)
{
    const LatticeMask &m = g.points;
    if (m.empty()) {
        fail(ErrorCategory::empty_mask, "grid has no points");
    }
    const auto dt = detail::complement_edt(m, threads);
    const std::int64_t W = m.width() + 2;
    std::int64_t s = 0;
    for (std::int64_t y = 0; y < m.height(); ++y) {
        for (std::int64_t x = 0; x < m.width(); ++x) {
            if (m.test(m.x0() + x, m.y0() + y)) {
                s = std::max(s, dt[static_cast<std::size_t>((y + 1) * W + x + 1)]);
            }
        }
    }
    const auto [lo, hi] = detail::radius_enclosure(g.delta, static_cast<std::uint64_t>(s), prec);
    return {static_cast<std::uint64_t>(s), lo, hi};
}

/// Whether p lies in the covered set: the union of open discs of radius 3 eps / 4 around
/// the grid points.
inline bool covered_contains(const CoveringGrid &g, const ComplexDyadic &p)
{
    const Dyadic radius = (g.eps * Dyadic(3)).ldexp(-2);
    const Dyadic r2 = radius * radius;
    const std::int64_t reach = div_approx(radius, g.delta, 0, Round::up).mantissa().get_si() + 1;
    const std::int64_t ci = div_approx(p.re, g.delta, 0, Round::down).scaled_floor(0).get_si();
    const std::int64_t cj = div_approx(p.im, g.delta, 0, Round::down).scaled_floor(0).get_si();
    const LatticeMask &m = g.points;
    const std::int64_t i0 = std::max(ci - reach, m.x0()), i1 = std::min(ci + reach + 1, m.x0() + m.width() - 1);
    const std::int64_t j0 = std::max(cj - reach, m.y0()), j1 = std::min(cj + reach + 1, m.y0() + m.height() - 1);
    for (std::int64_t j = j0; j <= j1; ++j) {
        for (std::int64_t i = i0; i <= i1; ++i) {
            if (m.test(i, j)) {
                const ComplexDyadic d = p - ComplexDyadic(g.delta * Dyadic(i), g.delta * Dyadic(j));
                if (d.norm2() < r2) {
                    return true;
                }
            }
        }
    }
    return false;
}

/// Largest lattice-centred disc radius of a rasterised set, up to one lattice cell:
/// with s the largest squared distance from a set point to the nearest non-set lattice
/// point, returns [delta (sqrt s - 1), delta (sqrt s + 1)] clamped at 0. Brute force.
inline Enclosure brute_largest_disc(const LatticeMask &mask, const Dyadic &delta, std::int64_t prec)
{
    const auto pts = mask.points();
    if (pts.empty()) {
        fail(ErrorCategory::empty_mask, "rasterised set is empty");
    }
    std::vector<LatticePoint> outside;
    for (std::int64_t j = mask.y0() - 1; j <= mask.y0() + mask.height(); ++j) {
        for (std::int64_t i = mask.x0() - 1; i <= mask.x0() + mask.width(); ++i) {
            if (!mask.test(i, j)) {
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
    const std::int64_t bits = prec + std::max<std::int64_t>(0, delta.magnitude_bits()) + 2;
    const Dyadic sd(mpz_class(static_cast<long>(s)));
    const Dyadic lo = max(Dyadic(), delta * (sqrt_approx(sd, bits, Round::down) - Dyadic(1)));
    const Dyadic hi = delta * (sqrt_approx(sd, bits, Round::up) + Dyadic(1));
    return {lo, hi};
}

struct GridOptions {
    std::uint64_t max_domain_points = 1ull << 27;
    std::uint64_t max_grid_cells = 1ull << 26;
    unsigned threads = 1;
    bool trace = false;
};

struct TracePoint {
    LatticePoint z;
    ComplexDyadic value;
};

/// Construction record of an image grid: the domain lattice G_D = {(a, b) delta_D : |.| < r}
/// stored as rows (a, b_max), and optionally the approximations d_z.
struct GridBuildTrace {
    Dyadic delta_D;
    Dyadic mu1;
    std::vector<std::pair<std::int64_t, std::int64_t>> domain_rows;
    std::uint64_t domain_points = 0;
    EvalPlan plan;
    std::vector<TracePoint> approx_values;

    bool in_domain(std::int64_t a, std::int64_t b) const
    {
        const auto it = std::lower_bound(domain_rows.begin(), domain_rows.end(), std::pair{a, std::int64_t{-1}},
                                         [](const auto &x, const auto &y) { return x.first < y.first; });
        return it != domain_rows.end() && it->first == a && (b < 0 ? -b : b) <= it->second;
    }
};

struct ImageGrid {
    CoveringGrid grid;
    GridBuildTrace trace;
};

namespace detail
{

// Rows of {(a, b) : (a^2 + b^2) d^2 < r^2}.
inline std::vector<std::pair<std::int64_t, std::int64_t>> disc_rows(const Dyadic &r, const Dyadic &d)
{
    const Dyadic d2 = d * d;
    const Dyadic r2 = r * r;
    auto half_chord = [&](const Dyadic &rem) -> std::int64_t {
        // largest b >= 0 with b^2 d^2 < rem, or -1
        if (rem.sign() <= 0) {
            return -1;
        }
        const mpz_class fl = div_approx(rem, d2, 0, Round::down).scaled_floor(0);
        mpz_class b;
        mpz_sqrt(b.get_mpz_t(), fl.get_mpz_t());
        if (!(Dyadic(b * b) * d2 < rem)) {
            b -= 1;
        }
        return b.get_si();
    };
    const std::int64_t amax = half_chord(r2);
    std::vector<std::pair<std::int64_t, std::int64_t>> rows;
    for (std::int64_t a = -amax; a <= amax; ++a) {
        const std::int64_t b = half_chord(r2 - Dyadic(a) * Dyadic(a) * d2);
        if (b >= 0) {
            rows.emplace_back(a, b);
        }
    }
    return rows;
}

} // namespace detail

/// Covering grid of the image f(D_r) of the antiderivative: delta = eps/4; the domain
/// lattice spacing delta_D <= eps / (16 mu') (mu' from `bounds`); each domain point is
/// evaluated to within eps/16 and every eps/4-lattice point y with |d_z - y| <= 3 eps/16
/// joins G.
inline ImageGrid grid_from_image(PiStream &stream, const BoundSchedule &schedule, const Dyadic &r, const Dyadic &eps,
                                 const BoundsProvider &bounds, const GridOptions &opt = {})
{
    detail::check_radius(r);
    if (r.is_zero()) {
        fail(ErrorCategory::radius_out_of_range, "grid radius must be positive");
    }
    if (eps.sign() <= 0) {
        fail(ErrorCategory::invalid_argument, "eps must be positive");
    }
    const Dyadic delta = eps.ldexp(-2);
    GridBuildTrace trace;
    trace.mu1 = bounds.fprime_bound(r);
    {
        const Dyadic denom = trace.mu1.ldexp(4);
        const std::int64_t bits = denom.magnitude_bits() - eps.magnitude_bits() + 16;
        trace.delta_D = div_approx(eps, denom, std::max<std::int64_t>(bits, 1), Round::down)
                            .round_significant(12, Round::down);
    }
    if (trace.delta_D.sign() <= 0) {
        fail(ErrorCategory::tolerance_too_tight, "domain spacing underflow");
    }

    // bounding box of the image, in delta units: |f| <= mu' r on D_r
    const Dyadic reach = trace.mu1 * r + delta;
    const mpz_class half_box = div_approx(reach, delta, 0, Round::up).scaled_floor(0) + 2;
    const mpz_class side = 2 * half_box + 1;
    if (side * side > mpz_class(static_cast<unsigned long>(opt.max_grid_cells))) {
        fail(ErrorCategory::resource_cap, "image bounding box of " + mpz_class(side * side).get_str() +
                                              " cells exceeds the grid cap of " + std::to_string(opt.max_grid_cells));
    }
    {
        // row count is bounded by the radius before the rows are materialised
        const mpz_class rows = div_approx(r, trace.delta_D, 0, Round::up).scaled_floor(0) * 2 + 1;
        if (rows * rows > mpz_class(static_cast<unsigned long>(opt.max_domain_points)) * 2) {
            fail(ErrorCategory::resource_cap, "domain lattice exceeds the cap of " +
                                                  std::to_string(opt.max_domain_points) + " points");
        }
    }
    trace.domain_rows = detail::disc_rows(r, trace.delta_D);
    for (const auto &[a, b] : trace.domain_rows) {
        trace.domain_points += static_cast<std::uint64_t>(2 * b + 1);
    }
    if (trace.domain_points > opt.max_domain_points) {
        fail(ErrorCategory::resource_cap, "domain lattice of " + std::to_string(trace.domain_points) +
                                              " points exceeds the cap of " + std::to_string(opt.max_domain_points));
    }

    const std::int64_t need_bits = std::max(trace.delta_D.frac_bits(), delta.frac_bits());
    const PreparedSeries f(stream, schedule, EvalOrder::antiderivative(), r, eps.ldexp(-4), need_bits);
    trace.plan = f.plan();
    const std::int64_t p = f.frac_bits();
    const std::int64_t H = half_box.get_si();

    // scaled integers: domain spacing and grid spacing in units of 2^-p
    const mpz_class dD_big = trace.delta_D.scaled_floor(p);
    const mpz_class dG_big = delta.scaled_floor(p);
    const bool wide = f.wide() && p <= 56 && detail::bit_length(dD_big) + 32 <= 62;
    const unsigned threads = resolve_threads(opt.threads);
    const std::size_t nrows = trace.domain_rows.size();
    std::vector<LatticeMask> masks(std::min<std::size_t>(threads, std::max<std::size_t>(nrows, 1)));
    std::vector<std::vector<TracePoint>> traces(masks.size());

    auto add = [&](LatticeMask &mask, std::int64_t i, std::int64_t j) {
        if (!mask.in_range(i, j)) {
            fail(ErrorCategory::bounds_audit_failed, "image point leaves the box implied by the f' bound");
        }
        mask.set(i, j);
    };

    parallel_for(nrows, static_cast<unsigned>(masks.size()), [&](std::size_t begin, std::size_t end, unsigned w) {
        LatticeMask &mask = masks[w] = LatticeMask(-H, -H, 2 * H + 1, 2 * H + 1);
        if (wide) {
            const std::int64_t dD = dD_big.get_si();
            const std::int64_t dG = dG_big.get_si();
            const __int128 lim = static_cast<__int128>(9) * dG * dG;
            for (std::size_t row = begin; row < end; ++row) {
                const auto [a, bmax] = trace.domain_rows[row];
                for (std::int64_t b = -bmax; b <= bmax; ++b) {
                    const auto v = f.eval_wide(a * dD, b * dD);
                    if (opt.trace) {
                        traces[w].push_back({{a, b},
                                             {Dyadic(mpz_class(static_cast<long>(v.re)), -p),
                                              Dyadic(mpz_class(static_cast<long>(v.im)), -p)}});
                    }
                    const std::int64_t i0 = detail::floor_div(v.re, dG);
                    const std::int64_t j0 = detail::floor_div(v.im, dG);
                    for (std::int64_t i = i0 - 1; i <= i0 + 1; ++i) {
                        const __int128 dx = static_cast<__int128>(v.re) - static_cast<__int128>(i) * dG;
                        for (std::int64_t j = j0 - 1; j <= j0 + 1; ++j) {
                            const __int128 dy = static_cast<__int128>(v.im) - static_cast<__int128>(j) * dG;
                            if (16 * (dx * dx + dy * dy) <= lim) {
                                add(mask, i, j);
                            }
                        }
                    }
                }
            }
            return;
        }
        const mpz_class lim = 9 * dG_big * dG_big;
        for (std::size_t row = begin; row < end; ++row) {
            const auto [a, bmax] = trace.domain_rows[row];
            for (std::int64_t b = -bmax; b <= bmax; ++b) {
                const auto v = f.eval_big(dD_big * a, dD_big * b);
                if (opt.trace) {
                    traces[w].push_back({{a, b}, {Dyadic(v.re, -p), Dyadic(v.im, -p)}});
                }
                mpz_class i0, j0;
                mpz_fdiv_q(i0.get_mpz_t(), v.re.get_mpz_t(), dG_big.get_mpz_t());
                mpz_fdiv_q(j0.get_mpz_t(), v.im.get_mpz_t(), dG_big.get_mpz_t());
                for (long di = -1; di <= 1; ++di) {
                    const mpz_class i = i0 + di;
                    const mpz_class dx = v.re - i * dG_big;
                    for (long dj = -1; dj <= 1; ++dj) {
                        const mpz_class j = j0 + dj;
                        const mpz_class dy = v.im - j * dG_big;
                        if (16 * (dx * dx + dy * dy) <= lim) {
                            if (!i.fits_slong_p() || !j.fits_slong_p()) {
                                fail(ErrorCategory::bounds_audit_failed, "image point leaves the grid box");
                            }
                            add(mask, i.get_si(), j.get_si());
                        }
                    }
                }
            }
        }
    });

    LatticeMask merged = std::move(masks[0]);
    for (std::size_t k = 1; k < masks.size(); ++k) {
        merged.merge(masks[k]);
    }
    if (opt.trace) {
        for (auto &t : traces) {
            trace.approx_values.insert(trace.approx_values.end(), t.begin(), t.end());
        }
    }
    return {CoveringGrid::make(eps, delta, merged), std::move(trace)};
}

/// "eps,delta" header and values, then "i,j" and one line per grid point.
inline void write_grid_csv(std::ostream &out, const CoveringGrid &g)
{
    out << "eps,delta\n" << g.eps << "," << g.delta << "\ni,j\n";
    for (const auto &p : g.points.points()) {
        out << p.i << "," << p.j << "\n";
    }
}

/// "i,j,re,im" per domain point; (i, j) are in units of delta_D.
inline void write_trace_csv(std::ostream &out, const GridBuildTrace &t)
{
    out << "delta_D\n" << t.delta_D << "\ni,j,re,im\n";
    for (const auto &p : t.approx_values) {
        out << p.z.i << "," << p.z.j << "," << p.value.re << "," << p.value.im << "\n";
    }
}

} // namespace landau
