#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "landau/grid.hpp"

namespace landau
{

// ---------------------------------------------------------------------------------------
// Circle witness: a radius r_hat and a cover of the circle |z| = r_hat by lattice squares
// of side s, each carrying a certified lower bound on |f'| over the square.

struct CellCertificate {
    std::int64_t i = 0; // square [i s, (i+1) s] x [j s, (j+1) s]
    std::int64_t j = 0;
    Dyadic lower;
};

struct CircleWitness {
    Dyadic r_hat;
    Dyadic rho;
    Dyadic cell_side;
    Dyadic tau;
    Dyadic mu2; // f'' bound used for the Lipschitz slack, at radius r_hat + 2 s
    unsigned stage = 0;
    std::uint64_t work = 0;
    std::vector<CellCertificate> cells;
};

struct CircleBudget {
    unsigned max_stage = 24;
    std::uint64_t max_work = 1ull << 24; // cell evaluations over all candidates
};

/// Squares [i, i+1] x [j, j+1] (unit lattice) meeting the circle of integer radius R, by
/// exact min/max squared-distance tests; ordered by i, then j.
inline std::vector<std::pair<std::int64_t, std::int64_t>> circle_cells(std::int64_t R)
{
    const __int128 R2 = static_cast<__int128>(R) * R;
    auto near = [](std::int64_t i) -> std::int64_t { return i == -1 || i == 0 ? 0 : std::min(std::abs(i), std::abs(i + 1)); };
    auto far = [](std::int64_t i) -> std::int64_t { return std::max(std::abs(i), std::abs(i + 1)); };
    auto isqrt_floor = [](__int128 x) -> std::int64_t {
        if (x < 0) {
            return -1;
        }
        auto v = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(x)));
        while (static_cast<__int128>(v) * v > x) {
            --v;
        }
        while (static_cast<__int128>(v + 1) * (v + 1) <= x) {
            ++v;
        }
        return v;
    };
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t i = -R - 1; i <= R; ++i) {
        const __int128 A = R2 - static_cast<__int128>(near(i)) * near(i);
        if (A < 0) {
            continue;
        }
        const __int128 B = R2 - static_cast<__int128>(far(i)) * far(i);
        // for j >= 0: near = j, far = j + 1; need j^2 <= A and (j+1)^2 >= B
        const std::int64_t hi = isqrt_floor(A);
        std::int64_t lo = 0;
        if (B > 0) {
            lo = isqrt_floor(B - 1); // smallest m with m^2 >= B is isqrt(B-1)+1; lo = m - 1
        }
        std::vector<std::int64_t> js;
        for (std::int64_t j = lo; j <= hi; ++j) {
            js.push_back(-1 - j);
        }
        std::sort(js.begin(), js.end());
        for (std::int64_t j = lo; j <= hi; ++j) {
            js.push_back(j);
        }
        for (auto j : js) {
            out.emplace_back(i, j);
        }
    }
    return out;
}

/// Tries to certify |f'| > 0 on |z| = r_hat with squares of side s and evaluation
/// tolerance tau. Returns the witness (rho = min cell bound rounded down to 16 significant
/// bits) or nullopt as soon as one square fails.
inline std::optional<CircleWitness> certify_circle(PiStream &stream, const BoundSchedule &schedule,
                                                   const Dyadic &r_hat, const Dyadic &s, const Dyadic &tau,
                                                   const BoundsProvider &bounds, unsigned threads = 1)
{
    const Dyadic shell = r_hat + s.ldexp(1);
    if (!(r_hat.sign() > 0 && shell < Dyadic(1)) || s.sign() <= 0 || s.mantissa() != 1) {
        fail(ErrorCategory::invalid_argument, "circle candidate needs 0 < r_hat, r_hat + 2 s < 1 and s a power of two");
    }
    const std::int64_t sb = s.frac_bits();
    if (r_hat.frac_bits() > sb) {
        fail(ErrorCategory::invalid_argument, "r_hat must lie on the cell lattice");
    }
    const std::int64_t R = r_hat.scaled_floor(sb).get_si();
    const auto cells = circle_cells(R);

    CircleWitness w;
    w.r_hat = r_hat;
    w.cell_side = s;
    w.tau = tau;
    w.mu2 = bounds.fsecond_bound(shell);
    // |z - centre| <= s sqrt2 / 2 within a square
    const Dyadic slack = detail::up(w.mu2 * s * schedule.sqrt2().hi).half();
    const PreparedSeries f(stream, schedule, EvalOrder::value(), shell, tau, sb + 1);
    const std::int64_t bits = tau.frac_bits() + 8;

    std::vector<Dyadic> lower(cells.size());
    std::atomic<bool> failed{false};
    parallel_for(cells.size(), threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t k = b; k < e && !failed.load(std::memory_order_relaxed); ++k) {
            const auto [i, j] = cells[k];
            const ComplexDyadic c(Dyadic(mpz_class(static_cast<long>(2 * i + 1)), -(sb + 1)),
                                  Dyadic(mpz_class(static_cast<long>(2 * j + 1)), -(sb + 1)));
            const ComplexDyadic v = f(c);
            lower[k] = sqrt_approx(v.norm2(), bits, Round::down) - tau - slack;
            if (lower[k].sign() <= 0) {
                failed = true;
            }
        }
    });
    if (failed) {
        return std::nullopt;
    }
    Dyadic rho = lower.front();
    w.cells.reserve(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        rho = min(rho, lower[k]);
        w.cells.push_back({cells[k].first, cells[k].second, lower[k]});
    }
    w.rho = rho.round_significant(16, Round::down);
    w.work = cells.size();
    return w;
}

/// Dovetailed search for a circle witness with r_min < r_hat < 1. Stage L uses squares of
/// side 2^-(L+2), tolerance 2^-(L+8) and candidate radii q 2^-g (q odd, g <= L/2 + 2,
/// r_hat + 2 s < 1), tried by increasing g and then increasing value.
inline CircleWitness find_circle(PiStream &stream, const BoundSchedule &schedule, const Dyadic &r_min,
                                 const BoundsProvider &bounds, const CircleBudget &budget = {}, unsigned threads = 1)
{
    detail::check_radius(r_min);
    std::uint64_t work = 0;
    for (unsigned L = 0; L <= budget.max_stage; ++L) {
        const Dyadic s = Dyadic::pow2(-static_cast<std::int64_t>(L + 2));
        const Dyadic tau = Dyadic::pow2(-static_cast<std::int64_t>(L + 8));
        for (unsigned g = 1; g <= L / 2 + 2; ++g) {
            for (std::int64_t q = 1; q < (std::int64_t{1} << g); q += 2) {
                const Dyadic r_hat(mpz_class(static_cast<long>(q)), -static_cast<std::int64_t>(g));
                if (!(r_hat > r_min) || !(r_hat + s.ldexp(1) < Dyadic(1))) {
                    continue;
                }
                const std::uint64_t cost = circle_cells(r_hat.scaled_floor(L + 2).get_si()).size();
                if (work + cost > budget.max_work) {
                    fail(ErrorCategory::budget_exhausted, "no circle certified within " +
                                                              std::to_string(budget.max_work) + " cell evaluations");
                }
                work += cost;
                if (auto w = certify_circle(stream, schedule, r_hat, s, tau, bounds, threads)) {
                    w->stage = L;
                    w->work = work;
                    return *w;
                }
            }
        }
    }
    fail(ErrorCategory::budget_exhausted, "no circle certified within " + std::to_string(budget.max_stage + 1) + " stages");
}

// ---------------------------------------------------------------------------------------
// Grid parameters from a witness.

struct CoverParams {
    Dyadic delta_big;
    Dyadic eps;
    Dyadic r_bar;
    Dyadic mu2; // f'' bound at r_hat
};

/// Delta is the largest power of two with 2 Delta < r_hat - r and 4 mu2 Delta <= rho;
/// eps = rho Delta / 16 and r_bar = r_hat - Delta, both exact.
inline CoverParams cover_params(const Dyadic &r, const Dyadic &r_hat, const Dyadic &rho, const Dyadic &mu2)
{
    if (r.sign() < 0 || !(r < r_hat) || !(r_hat < Dyadic(1)) || rho.sign() <= 0 || mu2.sign() < 0) {
        fail(ErrorCategory::degenerate_window, "need 0 <= r < r_hat < 1, rho > 0 and mu2 >= 0");
    }
    const Dyadic gap = r_hat - r;
    std::int64_t e = gap.magnitude_bits();
    constexpr std::int64_t floor_exp = -4096;
    auto ok = [&](std::int64_t k) {
        const Dyadic d = Dyadic::pow2(k);
        return d.ldexp(1) < gap && mu2 * d.ldexp(2) <= rho;
    };
    while (!ok(e)) {
        if (--e < floor_exp) {
            fail(ErrorCategory::degenerate_window, "window r_hat - r = " + gap.str() + " is too small");
        }
    }
    CoverParams p;
    p.delta_big = Dyadic::pow2(e);
    p.eps = (rho * p.delta_big).ldexp(-4);
    p.r_bar = r_hat - p.delta_big;
    p.mu2 = mu2;
    return p;
}

// ---------------------------------------------------------------------------------------
// Certified lower bound for one stream.

struct LambdaOptions {
    CircleBudget circle;
    GridOptions grid;
    std::uint64_t max_work = 1ull << 28; // circle cells plus domain points
    std::optional<Dyadic> eps_override;
    unsigned threads = 1;
    bool audit_bounds = true;
};

struct LambdaCertificate {
    std::uint64_t n = 0;
    std::string mode = "sound";
    std::string bounds;
    Dyadic r;
    // witness
    Dyadic r_hat, rho, cell_side, tau, mu2_circle;
    unsigned witness_stage = 0;
    std::uint64_t witness_cells = 0;
    // grid parameters
    Dyadic delta_big, eps, r_bar, mu2;
    // grid
    Dyadic delta, delta_D, mu1;
    std::uint64_t grid_points = 0;
    std::uint64_t domain_points = 0;
    std::uint64_t s = 0;
    Dyadic l_reported, l_upper;
    std::uint64_t query_depth = 0;

    friend bool operator==(const LambdaCertificate &, const LambdaCertificate &) = default;
};

/// Radius of the image disc for precision index n: 1 - 2^-n + 2^-(n+8).
inline Dyadic pipeline_radius(std::uint64_t n)
{
    const auto k = static_cast<std::int64_t>(n);
    return Dyadic(1) - Dyadic::pow2(-k) + Dyadic::pow2(-(k + 8));
}

/// Width bound of the l enclosure for precision index n, as a negative exponent.
inline std::int64_t enclosure_bits(std::uint64_t n)
{
    return static_cast<std::int64_t>(n) + 9;
}

inline Dyadic domain_spacing(const Dyadic &eps, const Dyadic &mu1)
{
    const Dyadic denom = mu1.ldexp(4);
    const std::int64_t bits = denom.magnitude_bits() - eps.magnitude_bits() + 16;
    return div_approx(eps, denom, std::max<std::int64_t>(bits, 1), Round::down).round_significant(12, Round::down);
}

inline std::uint64_t domain_point_count(const Dyadic &r, const Dyadic &delta_D)
{
    std::uint64_t total = 0;
    for (const auto &[a, b] : detail::disc_rows(r, delta_D)) {
        total += static_cast<std::uint64_t>(2 * b + 1);
    }
    return total;
}

/// Lower bound l on the largest disc in the image of the stream's function, with
/// l >= (1 - 2^-n) lambda in sound mode. Every query goes through `stream`, so its log
/// records the depth the certificate depends on.
inline LambdaCertificate lambda_lower_bound(PiStream &stream, const BoundSchedule &schedule, std::uint64_t n,
                                            const BoundsProvider &bounds, const LambdaOptions &opt = {})
{
    if (n < 1) {
        fail(ErrorCategory::invalid_argument, "precision index n must be >= 1");
    }
    if (n > 60) {
        fail(ErrorCategory::resource_cap, "precision index n is beyond any feasible grid");
    }
    LambdaCertificate c;
    c.n = n;
    c.bounds = bounds.provenance();
    c.r = pipeline_radius(n);
    if (bounds.injected() && opt.audit_bounds) {
        audit_bounds(bounds, stream, schedule, c.r);
    }
    std::uint64_t work = 0;
    if (opt.eps_override) {
        c.mode = "overridden";
        c.eps = *opt.eps_override;
    } else {
        const CircleWitness w = find_circle(stream, schedule, c.r, bounds, opt.circle, opt.threads);
        work = w.work;
        c.r_hat = w.r_hat;
        c.rho = w.rho;
        c.cell_side = w.cell_side;
        c.tau = w.tau;
        c.mu2_circle = w.mu2;
        c.witness_stage = w.stage;
        c.witness_cells = w.cells.size();
        const CoverParams p = cover_params(c.r, w.r_hat, w.rho, bounds.fsecond_bound(w.r_hat));
        c.delta_big = p.delta_big;
        c.eps = p.eps;
        c.r_bar = p.r_bar;
        c.mu2 = p.mu2;
    }

    const Dyadic mu1 = bounds.fprime_bound(c.r);
    const std::uint64_t planned = domain_point_count(c.r, domain_spacing(c.eps, mu1));
    if (planned <= opt.grid.max_domain_points && work + planned > opt.max_work) {
        fail(ErrorCategory::budget_exhausted, "pipeline work " + std::to_string(work + planned) +
                                                  " exceeds the budget of " + std::to_string(opt.max_work));
    }
    GridOptions go = opt.grid;
    go.threads = opt.threads;
    const ImageGrid img = grid_from_image(stream, schedule, c.r, c.eps, bounds, go);
    c.delta = img.grid.delta;
    c.delta_D = img.trace.delta_D;
    c.mu1 = img.trace.mu1;
    c.grid_points = img.grid.size();
    c.domain_points = img.trace.domain_points;
    const DiscEstimate est = grid_l_value(img.grid, enclosure_bits(n), opt.threads);
    c.s = est.s;
    c.l_reported = est.lower;
    c.l_upper = est.upper;
    c.query_depth = query_depth(stream);
    return c;
}

struct AuditCheck {
    std::string name;
    bool ok = false;
};

struct CertificateAudit {
    std::vector<AuditCheck> checks;
    bool ok() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const AuditCheck &c) { return c.ok; });
    }
    std::vector<std::string> failures() const
    {
        std::vector<std::string> out;
        for (const auto &c : checks) {
            if (!c.ok) {
                out.push_back(c.name);
            }
        }
        return out;
    }
};

/// Re-verifies every recorded inequality of a certificate in exact arithmetic.
inline CertificateAudit audit_certificate(const LambdaCertificate &c)
{
    CertificateAudit a;
    auto check = [&](std::string name, bool ok) { a.checks.push_back({std::move(name), ok}); };
    const bool sound = c.mode == "sound";
    check("mode is sound or overridden", sound || c.mode == "overridden");
    check("n >= 1", c.n >= 1 && c.n <= 60);
    if (c.n >= 1 && c.n <= 60) {
        check("r = 1 - 2^-n + 2^-(n+8)", c.r == pipeline_radius(c.n));
    }
    check("eps > 0", c.eps.sign() > 0);
    check("delta = eps/4", c.delta == c.eps.ldexp(-2));
    check("delta <= eps/4", c.delta.sign() > 0 && c.delta.ldexp(2) <= c.eps);
    check("0 < delta_D", c.delta_D.sign() > 0);
    check("16 mu1 delta_D <= eps", c.mu1.ldexp(4) * c.delta_D <= c.eps);
    check("mu1 >= 1", c.mu1 >= Dyadic(1));
    check("G non-empty", c.grid_points >= 1);
    {
        const Dyadic d2s = c.delta * c.delta * Dyadic(mpz_class(static_cast<unsigned long>(c.s)));
        const Dyadic x = c.l_reported - c.delta;
        const Dyadic y = c.l_upper - c.delta;
        check("l_reported <= delta (1 + sqrt s)", x.sign() <= 0 || x * x <= d2s);
        check("delta (1 + sqrt s) <= l_upper", y.sign() >= 0 && y * y >= d2s);
    }
    if (c.n >= 1 && c.n <= 60) {
        check("l_upper - l_reported < 2^-(n+9)", c.l_upper - c.l_reported < Dyadic::pow2(-enclosure_bits(c.n)));
    }
    if (sound) {
        check("rho > 0", c.rho.sign() > 0);
        check("r < r_bar < r_hat < 1", c.r < c.r_bar && c.r_bar < c.r_hat && c.r_hat < Dyadic(1));
        check("r_hat + 2 s < 1", c.cell_side.sign() > 0 && c.r_hat + c.cell_side.ldexp(1) < Dyadic(1));
        check("Delta is a power of two", c.delta_big.sign() > 0 && c.delta_big.mantissa() == 1);
        check("r_bar = r_hat - Delta", c.r_bar == c.r_hat - c.delta_big);
        check("2 Delta < r_hat - r", c.delta_big.ldexp(1) < c.r_hat - c.r);
        check("4 mu2 Delta <= rho", c.mu2.ldexp(2) * c.delta_big <= c.rho);
        check("2 Delta is not admissible", !(c.delta_big.ldexp(2) < c.r_hat - c.r && c.mu2.ldexp(3) * c.delta_big <= c.rho));
        check("eps = rho Delta / 16", c.eps == (c.rho * c.delta_big).ldexp(-4));
        if (c.n >= 1 && c.n <= 60) {
            const Dyadic floor = (Dyadic(1) - Dyadic::pow2(-static_cast<std::int64_t>(c.n))).half();
            check("l_reported >= (1 - 2^-n) / 2", c.l_reported >= floor);
        }
    }
    return a;
}

// ---------------------------------------------------------------------------------------
// JSON form. Dyadics are written as "MpE" strings.

inline nlohmann::ordered_json certificate_json(const LambdaCertificate &c)
{
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["mode"] = c.mode;
    j["bounds"] = c.bounds;
    j["l_reported"] = c.l_reported.str();
    j["l_upper"] = c.l_upper.str();
    j["l_reported_approx"] = c.l_reported.to_double();
    j["r"] = c.r.str();
    j["r_hat"] = c.r_hat.str();
    j["rho"] = c.rho.str();
    j["s"] = c.cell_side.str();
    j["tau"] = c.tau.str();
    j["mu2_circle"] = c.mu2_circle.str();
    j["witness_stage"] = c.witness_stage;
    j["witness_cells"] = c.witness_cells;
    j["delta_big"] = c.delta_big.str();
    j["eps"] = c.eps.str();
    j["r_bar"] = c.r_bar.str();
    j["mu2"] = c.mu2.str();
    j["delta"] = c.delta.str();
    j["delta_D"] = c.delta_D.str();
    j["mu1"] = c.mu1.str();
    j["grid_points"] = c.grid_points;
    j["domain_points"] = c.domain_points;
    j["grid_s"] = c.s;
    j["query_depth"] = c.query_depth;
    return j;
}

inline LambdaCertificate certificate_from_json(const nlohmann::ordered_json &j)
{
    try {
        auto d = [&](const char *key) { return Dyadic::parse(j.at(key).get<std::string>()); };
        LambdaCertificate c;
        c.n = j.at("n").get<std::uint64_t>();
        c.mode = j.at("mode").get<std::string>();
        c.bounds = j.at("bounds").get<std::string>();
        c.l_reported = d("l_reported");
        c.l_upper = d("l_upper");
        c.r = d("r");
        c.r_hat = d("r_hat");
        c.rho = d("rho");
        c.cell_side = d("s");
        c.tau = d("tau");
        c.mu2_circle = d("mu2_circle");
        c.witness_stage = j.at("witness_stage").get<unsigned>();
        c.witness_cells = j.at("witness_cells").get<std::uint64_t>();
        c.delta_big = d("delta_big");
        c.eps = d("eps");
        c.r_bar = d("r_bar");
        c.mu2 = d("mu2");
        c.delta = d("delta");
        c.delta_D = d("delta_D");
        c.mu1 = d("mu1");
        c.grid_points = j.at("grid_points").get<std::uint64_t>();
        c.domain_points = j.at("domain_points").get<std::uint64_t>();
        c.s = j.at("grid_s").get<std::uint64_t>();
        c.query_depth = j.at("query_depth").get<std::uint64_t>();
        return c;
    } catch (const nlohmann::json::exception &e) {
        fail(ErrorCategory::parse_error, std::string("certificate: ") + e.what());
    }
}

} // namespace landau
