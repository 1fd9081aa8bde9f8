#include "pclab/weingarten.hpp"

#include <limits>
#include <sstream>

namespace pclab::weingarten {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_index(int v, int n, const char* name)
{
    if (v < 1 || v > n)
        throw std::invalid_argument(std::string("moment index ") + name + " = " + std::to_string(v)
                                    + " outside 1.." + std::to_string(n));
}

complex_t ipow(complex_t z, int e)
{
    complex_t r(1.0, 0.0);
    for (int k = 0; k < e; ++k)
        r *= z;
    return r;
}

// Absolute slack for exact identities when stderr is 0 (e.g. n = 1).
constexpr double kExactSlack = 1e-12;

} // namespace

void validate_spec(const MomentSpec& spec)
{
    if (spec.n < 1)
        throw std::invalid_argument("moment spec: n must be >= 1");
    std::visit(overloaded{
                   [&](const SecondOrder& s) {
                       check_index(s.i, spec.n, "i");
                       check_index(s.j, spec.n, "j");
                       check_index(s.k, spec.n, "k");
                       check_index(s.l, spec.n, "l");
                   },
                   [&](const TraceForm& t) {
                       if (t.a.size() != spec.n)
                           throw std::invalid_argument("trace_form: A must be n x n");
                   },
                   [&](const FourthExample&) {
                       if (spec.n < 2)
                           throw std::invalid_argument("fourth_example requires n >= 2");
                   },
                   [&](const OttoExample& o) {
                       if (spec.n < 2)
                           throw std::invalid_argument("otto_example requires n >= 2");
                       if (o.p < 0 || o.q < 0 || o.p_prime < 0 || o.q_prime < 0)
                           throw std::invalid_argument("otto_example: negative degree");
                       if (o.p + o.q != o.p_prime + o.q_prime || (o.p == o.p_prime && o.q == o.q_prime))
                           throw std::invalid_argument(
                               "otto_example: needs p+q = p'+q' and (p,q) != (p',q')");
                   },
               },
               spec.kind);
}

std::string describe(const MomentSpec& spec)
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const SecondOrder& s) {
                       os << "second_order(" << s.i << ',' << s.j << ',' << s.k << ',' << s.l << ')';
                   },
                   [&](const TraceForm&) { os << "trace_form(A)"; },
                   [&](const FourthExample&) { os << "fourth_example"; },
                   [&](const OttoExample& o) {
                       os << "otto(" << o.p << ',' << o.q << ";" << o.p_prime << ',' << o.q_prime << ')';
                   },
               },
               spec.kind);
    return os.str();
}

complex_t moment2_exact(int n, int i, int j, int k, int l)
{
    if (n < 1)
        throw std::invalid_argument("moment2_exact: n must be >= 1");
    check_index(i, n, "i");
    check_index(j, n, "j");
    check_index(k, n, "k");
    check_index(l, n, "l");
    return (i == k && j == l) ? complex_t(1.0 / n, 0.0) : complex_t(0.0, 0.0);
}

double trace_form_exact(const ComplexMatrix& a)
{
    return trace(a * adjoint(a)).real() / static_cast<double>(a.size());
}

double fourth_moment_exact(int n)
{
    if (n < 2)
        throw std::invalid_argument("fourth_moment_exact: n must be >= 2");
    const double m = n;
    return -1.0 / ((m - 1.0) * m * (m + 1.0));
}

complex_t exact_value(const MomentSpec& spec)
{
    validate_spec(spec);
    return std::visit(overloaded{
                          [&](const SecondOrder& s) { return moment2_exact(spec.n, s.i, s.j, s.k, s.l); },
                          [&](const TraceForm& t) { return complex_t(trace_form_exact(t.a), 0.0); },
                          [&](const FourthExample&) { return complex_t(fourth_moment_exact(spec.n), 0.0); },
                          // Different bidegrees of equal total degree are L2-orthogonal.
                          [&](const OttoExample&) { return complex_t(0.0, 0.0); },
                      },
                      spec.kind);
}

ComplexObservable integrand(const MomentSpec& spec)
{
    validate_spec(spec);
    return std::visit(
        overloaded{
            [](const SecondOrder& s) -> ComplexObservable {
                return [s](const UnitaryMatrix& u) {
                    return u(s.i - 1, s.j - 1) * std::conj(u(s.k - 1, s.l - 1));
                };
            },
            [](const TraceForm& t) -> ComplexObservable {
                const DenseMatrix a = t.a.mat();
                return [a](const UnitaryMatrix& u) { return complex_t(std::norm((a * u.mat()).trace()), 0.0); };
            },
            [](const FourthExample&) -> ComplexObservable {
                return [](const UnitaryMatrix& u) {
                    return u(0, 0) * u(1, 1) * std::conj(u(0, 1) * u(1, 0));
                };
            },
            [](const OttoExample& o) -> ComplexObservable {
                return [o](const UnitaryMatrix& u) {
                    const complex_t a = u(0, 0);
                    const complex_t b = std::conj(u(1, 1));
                    const complex_t f = ipow(a, o.p) * ipow(b, o.q);
                    const complex_t g = ipow(a, o.p_prime) * ipow(b, o.q_prime);
                    return f * std::conj(g);
                };
            },
        },
        spec.kind);
}

bool MomentReport::passed(double sigmas) const
{
    return std::abs(estimate.mean - exact) <= sigmas * estimate.stderr_ + kExactSlack;
}

MomentReport validate_moment(const MomentSpec& spec, const McConfig& cfg)
{
    if (cfg.n_samples < 1000)
        throw std::invalid_argument("validate_moment: needs at least 1000 samples, got "
                                    + std::to_string(cfg.n_samples));
    MomentReport r;
    r.exact = exact_value(spec);
    r.estimate = mc_expectation_complex(integrand(spec), spec.n, cfg);
    const double diff = std::abs(r.estimate.mean - r.exact);
    if (r.estimate.stderr_ > 0.0)
        r.sigmas_away = diff / r.estimate.stderr_;
    else
        r.sigmas_away = diff <= kExactSlack ? 0.0 : std::numeric_limits<double>::infinity();
    return r;
}

} // namespace pclab::weingarten
