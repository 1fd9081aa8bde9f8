#include "pclab/constants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

namespace pclab::constants {

namespace {

constexpr double kSqrtPiOver2 = 0.88622692545275801364908374167057;   // sqrt(pi)/2
constexpr double kSqrtTwoOverPi = 0.79788456080286535587989211986876;  // sqrt(2/pi)
constexpr double kClosedFormRelTol = 1e-12;

void require_n(int n, const char* what)
{
    if (n < 1)
        throw std::invalid_argument(std::string(what) + ": n must be >= 1, got " + std::to_string(n));
}

// ln(n!) - ln Gamma(n + 1/2)
double log_gamma_ratio(double n)
{
    return std::lgamma(n + 1.0) - std::lgamma(n + 0.5);
}

void fill_limits(LambdaReport& r)
{
    const double n = r.n;
    switch (r.space) {
    case Space::l2:
    case Space::l1:
    case Space::torus_l1_mc:
        r.normalizer = std::sqrt(n);
        r.limit_value = kSqrtPiOver2;
        r.upper_bound = std::sqrt(n);
        r.lower_bound = 1.0;
        break;
    case Space::linf_op:
        r.normalizer = n;
        r.limit_value = std::numbers::pi / 4.0;
        r.upper_bound = n;
        r.lower_bound = 1.0;
        break;
    case Space::hilbert_schmidt:
        r.normalizer = n;
        r.limit_value = kSqrtPiOver2;
        r.upper_bound = n;
        r.lower_bound = 1.0;
        break;
    case Space::trace_class:
        r.normalizer = n;
        r.limit_value = kSqrtPiOver2;
        r.upper_bound = n;
        r.lower_bound = n / 3.0;
        break;
    case Space::sum_10_01:
        r.normalizer = std::numbers::sqrt2 * n;
        r.limit_value = kSqrtTwoOverPi;
        r.upper_bound = std::numbers::sqrt2 * n;
        r.lower_bound = 1.0;
        break;
    }
    r.limit_gap = std::abs(r.value / r.normalizer - *r.limit_value);
}

McConfig row_config(const McConfig& cfg, int n)
{
    McConfig c = cfg;
    c.stream_offset = cfg.stream_offset + stream_offset_for(n);
    return c;
}

void set_estimate(LambdaReport& r, const ComplexEstimate& e, double factor)
{
    r.value = factor * e.mean.real();
    r.stderr_ = factor * e.stderr_;
    r.n_samples = e.n_samples;
    r.master_seed = e.master_seed;
}

RealEstimate as_real(const ComplexEstimate& e)
{
    return RealEstimate{e.mean.real(), e.stderr_, e.n_samples, e.master_seed};
}

// Unitary-group MC row: `observable` scaled by `factor`, plus the |tr|^2
// calibration on the same draws.
LambdaReport unitary_mc_row(Space space, int n, const McConfig& cfg, ComplexObservable observable, double factor)
{
    const ComplexObservable fs[] = {
        std::move(observable),
        [](const UnitaryMatrix& u) { return complex_t(std::norm(trace(u)), 0.0); },
    };
    const auto est = mc_expectations(fs, n, row_config(cfg, n));
    LambdaReport r;
    r.space = space;
    r.n = n;
    set_estimate(r, est[0], factor);
    r.second_moment = as_real(est[1]);
    fill_limits(r);
    return r;
}

} // namespace

std::string_view to_string(Space s)
{
    switch (s) {
    case Space::l2: return "l2";
    case Space::l1: return "l1";
    case Space::linf_op: return "linf_op";
    case Space::hilbert_schmidt: return "hilbert_schmidt";
    case Space::trace_class: return "trace_class";
    case Space::sum_10_01: return "sum_10_01";
    case Space::torus_l1_mc: return "torus_l1_mc";
    }
    return "?";
}

Space parse_space(std::string_view tag)
{
    if (tag == "l2") return Space::l2;
    if (tag == "l1") return Space::l1;
    if (tag == "linf_op" || tag == "linf") return Space::linf_op;
    if (tag == "hilbert_schmidt" || tag == "hs" || tag == "s2") return Space::hilbert_schmidt;
    if (tag == "trace_class" || tag == "s1") return Space::trace_class;
    if (tag == "sum_10_01" || tag == "sum") return Space::sum_10_01;
    if (tag == "torus_l1_mc" || tag == "torus") return Space::torus_l1_mc;
    throw std::invalid_argument("unknown space '" + std::string(tag)
                                + "' (expected l2, l1, linf_op, hilbert_schmidt, trace_class, sum_10_01, "
                                  "torus_l1_mc or a short tag s1/hs/linf/sum/torus)");
}

bool is_monte_carlo(Space s)
{
    return s == Space::trace_class || s == Space::sum_10_01 || s == Space::torus_l1_mc;
}

bool LambdaReport::within_bounds(double sigmas) const
{
    const double slack = std::max(sigmas * stderr_.value_or(0.0), tolerance);
    if (lower_bound && value < *lower_bound - slack)
        return false;
    if (upper_bound && value > *upper_bound + slack)
        return false;
    return true;
}

bool LambdaReport::second_moment_ok(double sigmas) const
{
    if (!second_moment)
        return true;
    return std::abs(second_moment->mean - 1.0) <= sigmas * second_moment->stderr_ + 1e-12;
}

// --- closed forms ---------------------------------------------------------------

double lambda_l2(int n)
{
    require_n(n, "lambda_l2");
    return kSqrtPiOver2 * std::exp(log_gamma_ratio(n));
}

double lambda_linf_op(int n)
{
    require_n(n, "lambda_linf_op");
    return std::numbers::pi / 4.0 * std::exp(2.0 * log_gamma_ratio(n));
}

double lambda_hilbert_schmidt(int n)
{
    require_n(n, "lambda_hilbert_schmidt");
    const long long n2 = static_cast<long long>(n) * n;
    if (n2 > std::numeric_limits<int>::max())
        throw std::invalid_argument("lambda_hilbert_schmidt: n too large");
    return lambda_l2(static_cast<int>(n2));
}

// --- l_1^n via the Bessel integral --------------------------------------------------

double l1_integrand(double t, int n)
{
    if (t < 1e-4)
        return n / 4.0;
    if (t < 2.0) {
        // 1 - J0(t) = sum_{k>=1} (-1)^(k+1) (t^2/4)^k / (k!)^2, then
        // 1 - (1 - x)^n = -expm1(n log1p(-x)).
        const double y = t * t / 4.0;
        double term = y;
        double x = 0.0;
        for (int k = 1; k < 30 && std::abs(term) > 1e-18 * std::abs(x); ++k) {
            x += term;
            term *= -y / ((k + 1.0) * (k + 1.0));
        }
        return -std::expm1(n * std::log1p(-x)) / (t * t);
    }
    const double j0 = boost::math::cyl_bessel_j(0, t);
    return (1.0 - std::pow(j0, n)) / (t * t);
}

QuadratureResult lambda_l1_quadrature(int n, double quad_tol)
{
    require_n(n, "lambda_l1");
    if (!(quad_tol > 0.0))
        throw std::invalid_argument("lambda_l1: quad_tol must be positive");

    // For large t, |J0(t)| ~ sqrt(2/(pi t)). Past T the integrand is 1/t^2
    // (integrated exactly) minus J0^n/t^2. For even n, J0^n has the
    // non-oscillating mean binom(n, n/2)/2^n * (2/(pi t))^(n/2), whose tail
    // is subtracted analytically; what is left oscillates and is bounded by
    // roughly envelope(T)^n / T^2.
    const auto envelope = [](double t) { return std::sqrt(2.0 / (std::numbers::pi * t)); };
    const auto residual = [&](double t) { return 4.0 * std::pow(envelope(t), n) / (t * t); };
    constexpr double kMaxT = 4194304.0;   // 2^22
    double T = 32.0;
    while (residual(T) > quad_tol / 10.0 && T < kMaxT)
        T *= 2.0;

    const auto f = [n](double t) { return l1_integrand(t, n); };
    using boost::math::quadrature::gauss_kronrod;
    double sum = 0.0;
    double err_total = 0.0;
    double a = 0.0;
    double b = 2.0;
    while (a < T) {
        b = std::min(b, T);
        double err = 0.0;
        sum += gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-13, &err);
        err_total += err;
        a = b;
        b = a + std::numbers::pi;
    }

    double tail = 1.0 / T;
    if (n % 2 == 0) {
        const double half = n / 2.0;
        const double log_mean = std::lgamma(n + 1.0) - 2.0 * std::lgamma(half + 1.0) - n * std::numbers::ln2;
        tail -= std::exp(log_mean + half * std::log(2.0 / std::numbers::pi)) * std::pow(T, -1.0 - half)
                / (1.0 + half);
    }

    QuadratureResult out{sum + tail, err_total + residual(T), T};
    if (!(out.error_estimate <= quad_tol)) {
        std::ostringstream os;
        os << "lambda_l1: quadrature did not reach tolerance " << quad_tol << " (achieved " << out.error_estimate
           << " with truncation T = " << T << ")";
        throw NumericalError(os.str());
    }
    return out;
}

// --- Monte Carlo rows ---------------------------------------------------------------

std::uint64_t stream_offset_for(int n)
{
    return static_cast<std::uint64_t>(n) << 32;
}

LambdaReport lambda_s1_mc(int n, const McConfig& cfg)
{
    require_n(n, "lambda_s1_mc");
    if (cfg.n_samples < 1000)
        throw std::invalid_argument("lambda_s1_mc: needs at least 1000 samples");
    if (n == 1) {
        // U(1) is the circle: |tr U| = |U|^2 = 1 identically.
        LambdaReport r;
        r.space = Space::trace_class;
        r.n = 1;
        r.value = 1.0;
        r.stderr_ = 0.0;
        r.n_samples = cfg.n_samples;
        r.master_seed = cfg.master_seed;
        r.second_moment = RealEstimate{1.0, 0.0, cfg.n_samples, cfg.master_seed};
        fill_limits(r);
        return r;
    }
    return unitary_mc_row(
        Space::trace_class, n, cfg, [](const UnitaryMatrix& u) { return complex_t(std::abs(trace(u)), 0.0); }, n);
}

LambdaReport lambda_sum_mc(int n, const McConfig& cfg)
{
    require_n(n, "lambda_sum_mc");
    if (cfg.n_samples < 1000)
        throw std::invalid_argument("lambda_sum_mc: needs at least 1000 samples");
    return unitary_mc_row(
        Space::sum_10_01, n, cfg, [](const UnitaryMatrix& u) { return complex_t(std::abs(trace(u).real()), 0.0); },
        2.0 * n);
}

LambdaReport torus_l1_mc(int n, const McConfig& cfg)
{
    require_n(n, "torus_l1_mc");
    const RealEstimate e = mc_torus_expectation(
        [](std::span<const complex_t> z) {
            complex_t s{};
            for (const auto zk : z)
                s += zk;
            return std::abs(s);
        },
        static_cast<std::size_t>(n), row_config(cfg, n));
    LambdaReport r;
    r.space = Space::torus_l1_mc;
    r.n = n;
    r.value = e.mean;
    r.stderr_ = e.stderr_;
    r.n_samples = e.n_samples;
    r.master_seed = e.master_seed;
    fill_limits(r);
    return r;
}

LambdaReport closed_form_report(Space space, int n, double quad_tol)
{
    LambdaReport r;
    r.space = space;
    r.n = n;
    switch (space) {
    case Space::l2:
        r.value = lambda_l2(n);
        r.tolerance = kClosedFormRelTol * r.value;
        break;
    case Space::linf_op:
        r.value = lambda_linf_op(n);
        r.tolerance = kClosedFormRelTol * r.value;
        break;
    case Space::hilbert_schmidt:
        r.value = lambda_hilbert_schmidt(n);
        r.tolerance = kClosedFormRelTol * r.value;
        break;
    case Space::l1: {
        const QuadratureResult q = lambda_l1_quadrature(n, quad_tol);
        r.value = q.value;
        r.tolerance = quad_tol;
        break;
    }
    default:
        throw std::invalid_argument("closed_form_report: " + std::string(to_string(space))
                                    + " has no closed form");
    }
    fill_limits(r);
    return r;
}

std::vector<LambdaReport> convergence_table(Space space, const std::vector<int>& n_list, const McConfig& cfg,
                                            double quad_tol)
{
    if (n_list.empty())
        throw std::invalid_argument("convergence_table: empty dimension list");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        require_n(n_list[i], "convergence_table");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("convergence_table: dimensions must be strictly ascending");
    }
    std::vector<LambdaReport> rows;
    rows.reserve(n_list.size());
    for (const int n : n_list) {
        switch (space) {
        case Space::trace_class: rows.push_back(lambda_s1_mc(n, cfg)); break;
        case Space::sum_10_01: rows.push_back(lambda_sum_mc(n, cfg)); break;
        case Space::torus_l1_mc: rows.push_back(torus_l1_mc(n, cfg)); break;
        default: rows.push_back(closed_form_report(space, n, quad_tol)); break;
        }
    }
    return rows;
}

} // namespace pclab::constants
