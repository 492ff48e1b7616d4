// Command-line front end: eval, grid, lambda, search, audit.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "landau/landau.hpp"

namespace
{

using namespace landau;
using json = nlohmann::ordered_json;

constexpr int exit_usage = 2;
constexpr int exit_budget = 3;

struct Common {
    std::string stream_path;
    std::uint64_t depth = 64;
    unsigned c_exponent = 100;
    std::string slope;
    std::string bounds = "generic";
    unsigned threads = 1;
    std::string out;
};

struct Caps {
    std::uint64_t max_work = 1ull << 28;
    std::uint64_t max_grid_cells = 1ull << 26;
    std::uint64_t max_domain_points = 1ull << 27;
    unsigned max_stage = 24;
};

BoundSchedule make_schedule(const Common &c)
{
    if (!c.slope.empty()) {
        return BoundSchedule::with_slope(Dyadic::parse(c.slope), c.c_exponent);
    }
    return BoundSchedule(c.c_exponent);
}

LoadedStream open_stream(const Common &c, const BoundSchedule &schedule)
{
    if (c.stream_path.empty()) {
        fail(ErrorCategory::invalid_argument, "--stream is required");
    }
    return load_stream(c.stream_path, schedule, c.depth);
}

std::unique_ptr<BoundsProvider> make_bounds(const Common &c, const BoundSchedule &schedule, LoadedStream &s)
{
    if (c.bounds == "generic") {
        return std::make_unique<GenericBounds>(schedule);
    }
    if (c.bounds == "stream") {
        return std::make_unique<StreamMajorantBounds>(s.stream, schedule);
    }
    if (c.bounds == "identity") {
        return std::make_unique<PolynomialBounds>(std::vector<ComplexDyadic>{}, schedule, c.depth, "identity");
    }
    if (c.bounds == "fixture") {
        if (!s.coefficients) {
            fail(ErrorCategory::invalid_argument, "--bounds fixture needs a coefficient file as --stream");
        }
        return std::make_unique<PolynomialBounds>(*s.coefficients, schedule, c.depth, "fixture");
    }
    fail(ErrorCategory::invalid_argument, "unknown bounds provider '" + c.bounds + "'");
}

json metadata(const Common &c)
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return {{"timestamp", buf}, {"threads", c.threads}};
}

void emit(const std::string &path, const std::string &text)
{
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCategory::invalid_argument, "cannot write " + path);
    }
    out << text;
}

void add_common(CLI::App *app, Common &c, bool bounds)
{
    app->add_option("--stream", c.stream_path, "stream file (pad=<s> + word) or coefficient file (n re im lines)");
    app->add_option("--depth", c.depth, "digits per channel when encoding a coefficient file");
    app->add_option("--c-exponent", c.c_exponent, "k in c = 1 + 2^-k");
    app->add_option("--slope", c.slope, "override the coefficient slope c e / 2 (test scale), MpE");
    app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    app->add_option("--out", c.out, "output file (default stdout)");
    if (bounds) {
        app->add_option("--bounds", c.bounds, "generic | stream | identity | fixture")
            ->check(CLI::IsMember({"generic", "stream", "identity", "fixture"}));
    }
}

void add_caps(CLI::App *app, Caps &k)
{
    app->add_option("--max-work", k.max_work, "per-pipeline work cap (circle cells + domain points)")
        ->envname("LANDAU_MAX_WORK");
    app->add_option("--max-grid-cells", k.max_grid_cells, "grid bounding-box cell cap")->envname("LANDAU_MAX_GRID_CELLS");
    app->add_option("--max-domain-points", k.max_domain_points, "domain lattice point cap");
    app->add_option("--max-stage", k.max_stage, "circle search stage cap");
}

LambdaOptions lambda_options(const Common &c, const Caps &k)
{
    LambdaOptions o;
    o.threads = resolve_threads(c.threads);
    o.max_work = k.max_work;
    o.circle.max_stage = k.max_stage;
    o.circle.max_work = k.max_work;
    o.grid.max_grid_cells = k.max_grid_cells;
    o.grid.max_domain_points = k.max_domain_points;
    return o;
}

int run(int argc, char **argv)
{
    CLI::App app{"Certified lower bounds for the largest disc in the image of normalised holomorphic functions"};
    app.require_subcommand(1);

    Common common;
    Caps caps;

    // eval
    auto *eval = app.add_subcommand("eval", "evaluate f, f' or a derivative of f' at a point");
    std::string order = "value", z_text, tol_text = "1p-20", shell_text;
    unsigned k = 1;
    add_common(eval, common, false);
    eval->add_option("--order", order, "antiderivative | value | derivative")
        ->check(CLI::IsMember({"antiderivative", "value", "derivative"}));
    eval->add_option("--k", k, "derivative order of f' for --order derivative");
    eval->add_option("--z", z_text, "point re,im (MpE)")->required();
    eval->add_option("--tol", tol_text, "tolerance (MpE)");
    eval->add_option("--radius", shell_text, "shell radius with |z| <= radius < 1 (default: derived)");

    // grid
    auto *grid = app.add_subcommand("grid", "build a covering grid of the image of a disc");
    std::string radius_text, eps_text, trace_path;
    add_common(grid, common, true);
    add_caps(grid, caps);
    grid->add_option("--radius", radius_text, "disc radius r (MpE)")->required();
    grid->add_option("--eps", eps_text, "grid eps (MpE)")->required();
    grid->add_option("--trace", trace_path, "write the domain evaluations as CSV");

    // lambda
    auto *lambda = app.add_subcommand("lambda", "emit a certified lower bound for one stream");
    std::uint64_t n = 1;
    std::string override_eps;
    add_common(lambda, common, true);
    add_caps(lambda, caps);
    lambda->add_option("--n", n, "precision index n >= 1");
    lambda->add_option("--eps", override_eps, "use this eps and skip the circle search (mode=overridden)");

    // search
    auto *search = app.add_subcommand("search", "enumerate words w 1 1 1 ... and report the infimum");
    std::uint64_t max_t = 1;
    std::string csv_path;
    add_common(search, common, true);
    add_caps(search, caps);
    search->add_option("--n", n, "precision index n >= 1");
    search->add_option("--max-t", max_t, "largest word length")->envname("LANDAU_MAX_T");
    search->add_option("--per-word-csv", csv_path, "write the per-word table as CSV");

    // audit
    auto *audit = app.add_subcommand("audit", "re-verify a certificate file");
    std::string cert_path;
    audit->add_option("certificate", cert_path, "certificate JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    if (*eval) {
        const BoundSchedule schedule = make_schedule(common);
        LoadedStream s = open_stream(common, schedule);
        EvalRequest req;
        req.order = order == "value" ? EvalOrder::value()
                    : order == "antiderivative" ? EvalOrder::antiderivative()
                                                : EvalOrder::derivative(k);
        req.z = ComplexDyadic::parse(z_text);
        req.tol = Dyadic::parse(tol_text);
        std::optional<Dyadic> shell;
        if (!shell_text.empty()) {
            shell = Dyadic::parse(shell_text);
        }
        const ComplexDyadic w = eval_series(s.stream, schedule, req, shell);
        json j;
        j["order"] = req.order.name();
        j["z"] = req.z.str();
        j["tol"] = req.tol.str();
        j["value"] = w.str();
        j["re"] = {(w.re - req.tol).str(), (w.re + req.tol).str()};
        j["im"] = {(w.im - req.tol).str(), (w.im + req.tol).str()};
        j["value_approx"] = {w.re.to_double(), w.im.to_double()};
        j["query_depth"] = query_depth(s.stream);
        emit(common.out, j.dump(2) + "\n");
        return 0;
    }

    if (*grid) {
        const BoundSchedule schedule = make_schedule(common);
        LoadedStream s = open_stream(common, schedule);
        const auto bounds = make_bounds(common, schedule, s);
        const Dyadic r = Dyadic::parse(radius_text);
        if (bounds->injected()) {
            audit_bounds(*bounds, s.stream, schedule, r);
        }
        GridOptions go;
        go.threads = resolve_threads(common.threads);
        go.max_grid_cells = caps.max_grid_cells;
        go.max_domain_points = std::min(caps.max_domain_points, caps.max_work);
        go.trace = !trace_path.empty();
        const ImageGrid img = grid_from_image(s.stream, schedule, r, Dyadic::parse(eps_text), *bounds, go);
        std::ostringstream csv;
        write_grid_csv(csv, img.grid);
        emit(common.out, csv.str());
        if (go.trace) {
            std::ostringstream tcsv;
            write_trace_csv(tcsv, img.trace);
            emit(trace_path, tcsv.str());
        }
        const DiscEstimate est = grid_l_value(img.grid, 32, go.threads);
        json j;
        j["points"] = img.grid.size();
        j["domain_points"] = img.trace.domain_points;
        j["delta"] = img.grid.delta.str();
        j["delta_D"] = img.trace.delta_D.str();
        j["s"] = est.s;
        j["l"] = {est.lower.str(), est.upper.str()};
        j["bounds"] = bounds->provenance();
        std::cerr << j.dump() << "\n";
        return 0;
    }

    if (*lambda) {
        const BoundSchedule schedule = make_schedule(common);
        LoadedStream s = open_stream(common, schedule);
        const auto bounds = make_bounds(common, schedule, s);
        LambdaOptions o = lambda_options(common, caps);
        if (!override_eps.empty()) {
            o.eps_override = Dyadic::parse(override_eps);
        }
        const LambdaCertificate c = lambda_lower_bound(s.stream, schedule, n, *bounds, o);
        const CertificateAudit a = audit_certificate(c);
        json j;
        j["certificate"] = certificate_json(c);
        j["audit"] = a.ok() ? "ok" : "failed";
        j["metadata"] = metadata(common);
        emit(common.out, j.dump(2) + "\n");
        return a.ok() ? 0 : 1;
    }

    if (*search) {
        const BoundSchedule schedule = make_schedule(common);
        const std::string which = common.bounds;
        if (which == "identity" || which == "fixture") {
            fail(ErrorCategory::invalid_argument, "search supports --bounds generic or stream");
        }
        BoundsFactory factory = [which](PiStream &s, const BoundSchedule &sc) -> std::unique_ptr<BoundsProvider> {
            if (which == "stream") {
                return std::make_unique<StreamMajorantBounds>(s, sc);
            }
            return std::make_unique<GenericBounds>(sc);
        };
        SearchBudget b;
        b.max_t = max_t;
        b.pipeline = lambda_options(common, caps);
        const SearchReport r = landau_estimate(n, schedule, factory, b, resolve_threads(common.threads));
        json j = report_json(r);
        j["metadata"] = metadata(common);
        emit(common.out, j.dump(2) + "\n");
        if (!csv_path.empty()) {
            std::ostringstream csv;
            write_per_word_csv(csv, r);
            emit(csv_path, csv.str());
        }
        return 0;
    }

    if (*audit) {
        std::ifstream in(cert_path);
        if (!in) {
            fail(ErrorCategory::invalid_argument, "cannot open " + cert_path);
        }
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception &e) {
            fail(ErrorCategory::parse_error, e.what());
        }
        const LambdaCertificate c = certificate_from_json(j.contains("certificate") ? j["certificate"] : j);
        const CertificateAudit a = audit_certificate(c);
        json out;
        for (const auto &chk : a.checks) {
            out["checks"][chk.name] = chk.ok;
        }
        out["audit"] = a.ok() ? "ok" : "failed";
        std::cout << out.dump(2) << "\n";
        return a.ok() ? 0 : 1;
    }
    return exit_usage;
}

} // namespace

int main(int argc, char **argv)
{
    try {
        return run(argc, argv);
    } catch (const landau::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.category()) {
        case landau::ErrorCategory::resource_cap:
        case landau::ErrorCategory::budget_exhausted:
        case landau::ErrorCategory::tolerance_too_tight: return exit_budget;
        case landau::ErrorCategory::invalid_argument:
        case landau::ErrorCategory::parse_error: return exit_usage;
        default: return 1;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: Internal: " << e.what() << "\n";
        return 1;
    }
}
