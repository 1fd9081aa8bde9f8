#include "pclab/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "pclab/harmonics.hpp"
#include "pclab/json_io.hpp"
#include "pclab/schatten.hpp"
#include "pclab/weingarten.hpp"

namespace pclab::cli {

using report::Cell;
using report::Table;

void RunConfig::validate() const
{
    if (samples < 2)
        throw std::invalid_argument("--samples must be >= 2");
    if (chunk_size < 1)
        throw std::invalid_argument("--chunk-size must be >= 1");
}

McConfig RunConfig::mc(std::uint64_t stream_offset) const
{
    McConfig c;
    c.n_samples = samples;
    c.master_seed = seed;
    c.chunk_size = chunk_size;
    c.stream_offset = stream_offset;
    return c;
}

namespace {

int parse_int(std::string_view s)
{
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
    return v;
}

std::int64_t as_int(std::size_t v) { return static_cast<std::int64_t>(v); }

} // namespace

std::vector<int> parse_dims(const std::string& spec)
{
    std::vector<int> dims;
    if (const auto dots = spec.find(".."); dots != std::string::npos) {
        const int a = parse_int(std::string_view(spec).substr(0, dots));
        const int b = parse_int(std::string_view(spec).substr(dots + 2));
        if (a < 1 || b < a)
            throw std::invalid_argument("bad dimension range '" + spec + "'");
        for (int n = a; n <= b; ++n)
            dims.push_back(n);
        return dims;
    }
    std::string_view rest(spec);
    while (true) {
        const auto comma = rest.find(',');
        dims.push_back(parse_int(rest.substr(0, comma)));
        if (comma == std::string_view::npos)
            break;
        rest.remove_prefix(comma + 1);
    }
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (dims[i] < 1 || (i > 0 && dims[i] <= dims[i - 1]))
            throw std::invalid_argument("dimensions must be >= 1 and strictly ascending: '" + spec + "'");
    return dims;
}

// --- lambda ------------------------------------------------------------------------

int cmd_lambda(constants::Space space, const std::vector<int>& dims, const RunConfig& cfg, double quad_tol,
               std::ostream& out, std::ostream& err)
{
    std::vector<constants::LambdaReport> rows;
    try {
        cfg.validate();
        if (constants::is_monte_carlo(space) && cfg.samples < 1000)
            throw std::invalid_argument("Monte Carlo spaces need --samples >= 1000");
        if (!(quad_tol > 0.0))
            throw std::invalid_argument("--quad-tol must be positive");
        rows = constants::convergence_table(space, dims, cfg.mc(), quad_tol);
    } catch (const std::invalid_argument& e) {
        err << "pclab lambda: " << e.what() << '\n';
        return kUsage;
    }
    out << report::render(report::lambda_table(rows), cfg.format);

    int code = kOk;
    for (const auto& r : rows) {
        if (!r.second_moment_ok()) {
            err << "gate failed: " << constants::to_string(r.space) << " n=" << r.n
                << ": pre-flight E|tr U|^2 = " << report::format_double(r.second_moment->mean) << " +- "
                << report::format_double(r.second_moment->stderr_) << " is not 1 within 4 sigma\n";
            code = kGateFailed;
        }
        if (!r.within_bounds()) {
            err << "gate failed: " << constants::to_string(r.space) << " n=" << r.n << ": value "
                << report::format_double(r.value) << " outside [" << report::format_double(r.lower_bound.value_or(0))
                << ", " << report::format_double(r.upper_bound.value_or(0)) << "]\n";
            code = kGateFailed;
        }
    }
    return code;
}

// --- weingarten ----------------------------------------------------------------------

namespace {

// A fixed, non-normal test matrix for the trace-form row.
ComplexMatrix trace_form_matrix(int n)
{
    DenseMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = complex_t(1.0 + i, static_cast<double>(j - i)) / static_cast<double>(n);
    return ComplexMatrix(std::move(a));
}

std::vector<weingarten::MomentSpec> weingarten_rows(int n)
{
    using namespace weingarten;
    std::vector<MomentSpec> rows;
    rows.push_back({SecondOrder{1, 1, 1, 1}, n});
    if (n >= 2) {
        rows.push_back({SecondOrder{1, 2, 1, 2}, n});
        rows.push_back({SecondOrder{1, 1, 2, 1}, n});
        rows.push_back({SecondOrder{1, 2, 2, 1}, n});
    }
    rows.push_back({TraceForm{trace_form_matrix(n)}, n});
    if (n >= 2) {
        rows.push_back({FourthExample{}, n});
        rows.push_back({OttoExample{2, 0, 1, 1}, n});
        rows.push_back({OttoExample{1, 0, 0, 1}, n});
    }
    return rows;
}

} // namespace

int cmd_weingarten(const std::vector<int>& dims, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        if (cfg.samples < 1000)
            throw std::invalid_argument("--samples must be >= 1000 for moment validation");
        if (dims.empty())
            throw std::invalid_argument("no dimensions given");
        for (int n : dims)
            if (n < 1)
                throw std::invalid_argument("dimensions must be >= 1");
    } catch (const std::invalid_argument& e) {
        err << "pclab weingarten: " << e.what() << '\n';
        return kUsage;
    }

    Table t;
    t.columns = {"n", "moment", "exact_re", "exact_im", "mean_re", "mean_im", "stderr", "sigmas_away", "pass"};
    std::vector<std::string> failures;
    for (const int n : dims) {
        const auto specs = weingarten_rows(n);
        for (std::size_t k = 0; k < specs.size(); ++k) {
            const std::uint64_t offset = (static_cast<std::uint64_t>(n) << 40) | (static_cast<std::uint64_t>(k) << 32);
            const auto r = weingarten::validate_moment(specs[k], cfg.mc(offset));
            const bool pass = r.passed();
            const std::string label = weingarten::describe(specs[k]);
            t.rows.push_back({static_cast<std::int64_t>(n), label, r.exact.real(), r.exact.imag(),
                              r.estimate.mean.real(), r.estimate.mean.imag(), r.estimate.stderr_, r.sigmas_away,
                              pass});
            if (!pass)
                failures.push_back("n=" + std::to_string(n) + " " + label);
        }
    }
    out << report::render(t, cfg.format);
    for (const auto& f : failures)
        err << "moment outside 4 sigma: " << f << '\n';
    return failures.empty() ? kOk : kGateFailed;
}

// --- rudin ---------------------------------------------------------------------------

namespace {

constexpr double kRudinThreshold = 5e-2;
constexpr double kFixedPointFloor = 1e-10;
// Reserved stream for the random mixing block, away from sampling streams.
constexpr std::uint64_t kMixingStream = std::uint64_t{1} << 63;

harmonics::EndomorphismMatrix skewed_projection(int n, std::uint64_t seed)
{
    const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
    RngStream rng(seed, kMixingStream);
    DenseMatrix q = harmonics::block_projection(n).mat();
    for (Eigen::Index i = 0; i < block; ++i)
        for (Eigen::Index j = 0; j < block; ++j)
            q(i, block + j) = rng.complex_normal();
    return harmonics::EndomorphismMatrix(std::move(q));
}

} // namespace

int cmd_rudin(int n, RudinStart start, const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        if (n < 2 || n > 8)
            throw std::invalid_argument("--n must be in 2..8");
        if (cfg.samples < 1000)
            throw std::invalid_argument("--samples must be >= 1000");
    } catch (const std::invalid_argument& e) {
        err << "pclab rudin: " << e.what() << '\n';
        return kUsage;
    }

    const auto q0 = start == RudinStart::skewed ? skewed_projection(n, cfg.seed) : harmonics::block_projection(n);
    const auto target = harmonics::block_projection(n);

    std::vector<std::size_t> budgets;
    for (const std::size_t b : {std::size_t{1000}, std::size_t{10000}, cfg.samples})
        if (b <= cfg.samples && (budgets.empty() || b > budgets.back()))
            budgets.push_back(b);

    Table t;
    t.columns = {"budget", "deviation", "idempotence_defect", "max_entry_stderr"};
    std::vector<double> deviations;
    for (std::size_t k = 0; k < budgets.size(); ++k) {
        RunConfig c = cfg;
        c.samples = budgets[k];
        const auto r = harmonics::rudin_average(q0, n, c.mc(static_cast<std::uint64_t>(k) << 40));
        deviations.push_back(harmonics::max_deviation(r.average, target));
        t.rows.push_back({as_int(budgets[k]), deviations.back(), harmonics::idempotence_defect(r.average),
                          r.entry_stderr.maxCoeff()});
    }
    out << report::render(t, cfg.format);

    bool ok = true;
    if (start == RudinStart::identity) {
        for (const double d : deviations)
            ok = ok && d <= kFixedPointFloor;
    } else {
        for (std::size_t k = 1; k < deviations.size(); ++k)
            ok = ok && deviations[k] < deviations[k - 1];
        ok = ok && deviations.back() <= kRudinThreshold;
    }
    if (!ok) {
        err << "rudin average did not converge to diag(Id, 0); deviations:";
        for (const double d : deviations)
            err << ' ' << report::format_double(d);
        err << '\n';
    }
    return ok ? kOk : kGateFailed;
}

// --- duality -------------------------------------------------------------------------

int cmd_duality(int n, int trials, const std::optional<ComplexMatrix>& matrix, const RunConfig& cfg,
                std::ostream& out, std::ostream& err)
{
    try {
        cfg.validate();
        if (!matrix && n < 1)
            throw std::invalid_argument("--n must be >= 1");
        if (!matrix && trials < 1)
            throw std::invalid_argument("--trials must be >= 1");
        if (cfg.samples < 1000)
            throw std::invalid_argument("--samples must be >= 1000");
    } catch (const std::invalid_argument& e) {
        err << "pclab duality: " << e.what() << '\n';
        return kUsage;
    }

    Table t;
    t.columns = {"trial", "n", "trace_norm", "maximizer_value", "sampled_sup", "attained", "pass"};
    int code = kOk;
    const int count = matrix ? 1 : trials;
    for (int k = 0; k < count; ++k) {
        const ComplexMatrix a = [&] {
            if (matrix)
                return *matrix;
            RngStream rng(cfg.seed, kMixingStream + static_cast<std::uint64_t>(k));
            return sample_ginibre(n, rng);
        }();
        const schatten::TraceClassMatrix tc(a);
        const auto r = schatten::embedding_isometry_check(tc, cfg.mc((static_cast<std::uint64_t>(k) + 1) << 32));
        const bool pass = r.attained && r.sampled_sup <= r.norm + schatten::identity_tolerance(tc);
        t.rows.push_back({static_cast<std::int64_t>(k), static_cast<std::int64_t>(a.size()), r.norm,
                          r.maximizer_value, r.sampled_sup, r.attained, pass});
        if (!pass) {
            err << "duality check failed for trial " << k << ": " << json_io::matrix_to_json(a).dump() << '\n';
            code = kGateFailed;
        }
    }
    out << report::render(t, cfg.format);
    return code;
}

// --- harmonics -----------------------------------------------------------------------

int cmd_harmonics(HarmonicsAction action, const std::string& poly_path, const std::optional<std::string>& at_path,
                  const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    std::optional<harmonics::BidegreePolynomial> f;
    std::optional<ComplexMatrix> at;
    try {
        cfg.validate();
        f = json_io::polynomial_from_json(json_io::read_json_file(poly_path));
        if (action == HarmonicsAction::evaluate || action == HarmonicsAction::project) {
            if (!at_path)
                throw std::invalid_argument("--at MATRIX.json is required for this action");
            at = json_io::matrix_from_json(json_io::read_json_file(*at_path));
            if (at->size() != f->n())
                throw std::invalid_argument("matrix and polynomial dimensions differ");
        }
        if (action == HarmonicsAction::bidegree && f->is_zero())
            throw std::invalid_argument("bidegree of the zero polynomial is undefined");
    } catch (const std::invalid_argument& e) {
        err << "pclab harmonics: " << e.what() << '\n';
        return kUsage;
    }

    Table t;
    switch (action) {
    case HarmonicsAction::evaluate: {
        const complex_t v = harmonics::evaluate(*f, *at);
        t.columns = {"re", "im"};
        t.rows.push_back({v.real(), v.imag()});
        break;
    }
    case HarmonicsAction::bidegree: {
        const auto pq = harmonics::bidegree(*f);
        t.columns = {"p", "q", "homogeneous"};
        if (pq)
            t.rows.push_back({static_cast<std::int64_t>(pq->first), static_cast<std::int64_t>(pq->second), true});
        else
            t.rows.push_back({std::monostate{}, std::monostate{}, false});
        break;
    }
    case HarmonicsAction::laplacian:
        out << json_io::polynomial_to_json(harmonics::laplacian(*f)).dump(2) << '\n';
        return kOk;
    case HarmonicsAction::project: {
        UnitaryMatrix probe = [&] {
            try {
                return UnitaryMatrix::checked(*at);
            } catch (const NumericalError& e) {
                throw std::invalid_argument(e.what());
            }
        }();
        const auto e = harmonics::project_10_mc(*f, probe, cfg.mc());
        t.columns = {"re", "im", "stderr", "n_samples"};
        t.rows.push_back({e.mean.real(), e.mean.imag(), e.stderr_, as_int(e.n_samples)});
        break;
    }
    }
    out << report::render(t, cfg.format);
    return kOk;
}

// --- entry point -----------------------------------------------------------------------

void write_atomically(const std::string& path, const std::string& content)
{
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw std::runtime_error("cannot write '" + tmp.string() + "'");
        f << content;
        f.flush();
        if (!f)
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move report into '" + path + "': " + ec.message());
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"pclab: projection-constant laboratory (Haar Monte Carlo, Weingarten moments, closed forms)",
                 "pclab"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format = "csv";
    std::string out_path;
    app.add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
    app.add_option("--samples", cfg.samples, "Monte Carlo sample budget")->capture_default_str();
    app.add_option("--chunk-size", cfg.chunk_size, "Samples per random substream")->capture_default_str();
    app.add_option("--format", format, "csv, json or table")->capture_default_str();
    app.add_option("--out", out_path, "Write the report to PATH (atomically) instead of stdout");

    std::string space_tag, dims_spec;
    double quad_tol = constants::kDefaultQuadTol;
    auto* lambda = app.add_subcommand("lambda", "Projection constants lambda(X) for a list of dimensions");
    lambda->add_option("--space", space_tag, "l2, l1, linf_op, hilbert_schmidt (hs), trace_class (s1), sum_10_01 "
                                             "(sum), torus_l1_mc (torus)")
        ->required();
    lambda->add_option("--dims", dims_spec, "a..b or a,b,c")->required();
    lambda->add_option("--quad-tol", quad_tol, "Absolute tolerance of the Bessel quadrature")->capture_default_str();

    std::string w_dims = "2,3,4";
    auto* wein = app.add_subcommand("weingarten", "Exact Haar moments vs Monte Carlo");
    wein->add_option("--dims", w_dims, "a..b or a,b,c")->capture_default_str();

    int rudin_n = 2;
    std::string q0 = "skewed";
    auto* rudin = app.add_subcommand("rudin", "Group averaging of a projection onto h_(1,0)");
    rudin->add_option("--n", rudin_n, "Matrix size, 2..8")->capture_default_str();
    rudin->add_option("--q0", q0, "skewed or identity")->capture_default_str();

    int dual_n = 5, trials = 10;
    std::string matrix_path;
    auto* dual = app.add_subcommand("duality", "Trace duality: sup_U |tr(AU)| = ||A||_1");
    dual->add_option("--n", dual_n, "Matrix size")->capture_default_str();
    dual->add_option("--trials", trials, "Number of random matrices")->capture_default_str();
    dual->add_option("--matrix", matrix_path, "Check this JSON matrix instead of random ones");

    std::string action, poly_path, at_path;
    auto* harm = app.add_subcommand("harmonics", "Evaluate / analyse / project a JSON polynomial");
    harm->add_option("action", action, "evaluate, bidegree, laplacian or project")->required();
    harm->add_option("--poly", poly_path, "Polynomial JSON file")->required();
    harm->add_option("--at", at_path, "Matrix JSON file (argument for evaluate, probe for project)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    std::ostringstream report;
    int code = kOk;
    try {
        cfg.format = report::parse_format(format);
        if (!out_path.empty())
            cfg.out = out_path;

        if (lambda->parsed()) {
            code = cmd_lambda(constants::parse_space(space_tag), parse_dims(dims_spec), cfg, quad_tol, report, err);
        } else if (wein->parsed()) {
            code = cmd_weingarten(parse_dims(w_dims), cfg, report, err);
        } else if (rudin->parsed()) {
            RudinStart start;
            if (q0 == "skewed")
                start = RudinStart::skewed;
            else if (q0 == "identity")
                start = RudinStart::identity;
            else
                throw std::invalid_argument("--q0 must be skewed or identity");
            code = cmd_rudin(rudin_n, start, cfg, report, err);
        } else if (dual->parsed()) {
            std::optional<ComplexMatrix> m;
            if (!matrix_path.empty())
                m = json_io::matrix_from_json(json_io::read_json_file(matrix_path));
            code = cmd_duality(dual_n, trials, m, cfg, report, err);
        } else if (harm->parsed()) {
            HarmonicsAction a;
            if (action == "evaluate")
                a = HarmonicsAction::evaluate;
            else if (action == "bidegree")
                a = HarmonicsAction::bidegree;
            else if (action == "laplacian")
                a = HarmonicsAction::laplacian;
            else if (action == "project")
                a = HarmonicsAction::project;
            else
                throw std::invalid_argument("unknown harmonics action '" + action + "'");
            code = cmd_harmonics(a, poly_path, at_path.empty() ? std::nullopt : std::optional(at_path), cfg, report,
                                 err);
        }
    } catch (const std::invalid_argument& e) {
        err << "pclab: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "pclab: " << e.what() << '\n';
        return kGateFailed;
    }

    if (code == kUsage)
        return code;
    try {
        if (cfg.out)
            write_atomically(*cfg.out, report.str());
        else
            out << report.str();
    } catch (const std::exception& e) {
        err << "pclab: " << e.what() << '\n';
        return kGateFailed;
    }
    return code;
}

} // namespace pclab::cli
