#include "doctest.h"
#include "test_support.hpp"

#include "pclab/constants.hpp"

#include <cmath>
#include <numbers>

using namespace pclab;
using namespace pclab::constants;
using pclab::testing::budget;

namespace {

constexpr double kSqrtPiOver2 = 0.88622692545275801;

// Independent oracle: (1/2pi) int_0^{2pi} |1 + e^{it}| dt by the midpoint rule, split at the kink t = pi.
double circle_mean_abs_one_plus_z(int grid)
{
    const double h = std::numbers::pi / grid;
    double sum = 0.0;
    for (int half = 0; half < 2; ++half)
        for (int k = 0; k < grid; ++k)
            sum += std::abs(1.0 + std::polar(1.0, half * std::numbers::pi + (k + 0.5) * h));
    return sum * h / (2.0 * std::numbers::pi);
}

// Independent oracle: 2 (1/pi) int_0^pi |cos t| dt, midpoint rule split at pi/2.
double two_mean_abs_cos(int grid)
{
    const double h = std::numbers::pi / (2 * grid);
    double sum = 0.0;
    for (int k = 0; k < 2 * grid; ++k)
        sum += std::abs(std::cos((k + 0.5) * h));
    return 2.0 * sum * h / std::numbers::pi;
}

// Independent oracle: J0(t) = (1/pi) int_0^pi cos(t cos phi) dphi. The
// integrand extends to a smooth periodic function, so the midpoint rule
// converges geometrically.
double bessel_j0_oracle(double t)
{
    const int grid = 400;
    const double h = std::numbers::pi / grid;
    double sum = 0.0;
    for (int k = 0; k < grid; ++k)
        sum += std::cos(t * std::cos((k + 0.5) * h));
    return sum * h / std::numbers::pi;
}

// Independent oracle: E|e^{ia} + e^{ib}| under the CUE(2) eigenvalue density.
double cue2_mean_abs_trace_quadrature(int grid)
{
    const double h = 2.0 * std::numbers::pi / grid;
    double sum = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const complex_t za = std::polar(1.0, (i + 0.5) * h);
            const complex_t zb = std::polar(1.0, (j + 0.5) * h);
            sum += std::abs(za + zb) * std::norm(za - zb);
        }
    return sum * h * h / (8.0 * std::numbers::pi * std::numbers::pi);
}

} // namespace

TEST_CASE("lambda_l2 examples")
{
    CHECK(lambda_l2(1) == doctest::Approx(1.0).epsilon(1e-14));
    // Gamma(3) = 2, Gamma(5/2) = 3 sqrt(pi) / 4
    const double oracle = std::sqrt(std::numbers::pi) / 2.0 * 2.0 / (3.0 * std::sqrt(std::numbers::pi) / 4.0);
    CHECK(oracle == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(lambda_l2(2) == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(std::abs(lambda_l2(10000) / 100.0 - kSqrtPiOver2) <= 1e-4);
    CHECK(std::isfinite(lambda_l2(1000000)));
}

TEST_CASE("lambda_l2 is increasing on 1..100")
{
    std::vector<int> dims(100);
    for (int n = 1; n <= 100; ++n)
        dims[n - 1] = n;
    const auto rows = convergence_table(Space::l2, dims, budget(1000));
    REQUIRE(rows.size() == 100);
    for (std::size_t k = 1; k < rows.size(); ++k)
        CHECK(rows[k].value > rows[k - 1].value);
    for (const auto& r : rows)
        CHECK(r.within_bounds());
}

TEST_CASE("lambda_linf_op and lambda_hilbert_schmidt examples")
{
    CHECK(lambda_linf_op(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(lambda_linf_op(1000) / 1000.0 - std::numbers::pi / 4.0) <= 1e-3);
    CHECK(lambda_hilbert_schmidt(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambda_hilbert_schmidt(2) == lambda_l2(4));
    CHECK(std::abs(lambda_hilbert_schmidt(10) / 10.0 - kSqrtPiOver2) <= 2e-3);
}

TEST_CASE("scaling identity between the l2 and L(l2) closed forms")
{
    // (pi/4) r^2 = (sqrt(pi)/2 r)^2 with r = n! / Gamma(n + 1/2)
    for (int n = 1; n <= 1000; ++n) {
        const double l2 = lambda_l2(n);
        CHECK(std::abs(lambda_linf_op(n) - l2 * l2) <= 1e-12 * l2 * l2);
    }
}

TEST_CASE("Bessel J0 inside the l1 integrand matches the integral representation")
{
    for (double t : {0.5, 1.0, 2.404825557695773, 5.0, 13.7, 40.0}) {
        const double j0 = 1.0 - t * t * l1_integrand(t, 1);
        CHECK(j0 == doctest::Approx(bessel_j0_oracle(t)).epsilon(1e-12).scale(1.0));
    }
    // small-t branch: (1 - J0^n) / t^2 -> n / 4
    CHECK(l1_integrand(1e-6, 3) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(l1_integrand(0.0, 5) == doctest::Approx(1.25));
    CHECK(l1_integrand(2e-3, 7) == doctest::Approx((1.0 - std::pow(bessel_j0_oracle(2e-3), 7)) / 4e-6).epsilon(1e-6));
}

TEST_CASE("lambda_l1 anchors")
{
    CHECK(std::abs(lambda_l1(1) - 1.0) <= 1e-8);
    const double oracle = circle_mean_abs_one_plus_z(100000);
    CHECK(oracle == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-9));
    CHECK(std::abs(lambda_l1(2) - oracle) <= 1e-6);

    const auto q = lambda_l1_quadrature(3, 1e-9);
    CHECK(q.error_estimate <= 1e-9);
    CHECK(q.truncation > 0.0);
    CHECK_THROWS_AS(lambda_l1(0), std::invalid_argument);
    CHECK_THROWS_AS(lambda_l1(2, 0.0), std::invalid_argument);
}

TEST_CASE("lambda_l1 quadrature agrees with the torus Monte Carlo")
{
    for (int n : {1, 2, 4, 8, 16}) {
        const auto mc = torus_l1_mc(n, budget(1000000, 5));
        const double q = lambda_l1(n);
        CAPTURE(n);
        if (n == 1)
            CHECK(std::abs(mc.value - q) <= 1e-8);
        else
            CHECK(std::abs(mc.value - q) <= 4.0 * *mc.stderr_);
    }
}

TEST_CASE("lambda_l1 grows like sqrt(pi n) / 2")
{
    const double v = lambda_l1(400);
    CHECK(std::abs(v / 20.0 - kSqrtPiOver2) < 2e-3);
}

TEST_CASE("lambda_s1_mc examples")
{
    const auto one = lambda_s1_mc(1, budget(1000, 7));
    CHECK(one.value == 1.0);
    CHECK(one.stderr_.value() == 0.0);

    const double oracle = 2.0 * cue2_mean_abs_trace_quadrature(1500);
    CHECK(oracle == doctest::Approx(16.0 / (3.0 * std::numbers::pi)).epsilon(1e-5));
    const auto two = lambda_s1_mc(2, budget(1000000, 42));
    CHECK(std::abs(two.value - oracle) <= 4.0 * *two.stderr_);
    CHECK(two.within_bounds());
    CHECK(two.second_moment_ok());
    CHECK(*two.lower_bound == doctest::Approx(2.0 / 3.0));
    CHECK(*two.upper_bound == 2.0);

    CHECK_THROWS_AS(lambda_s1_mc(2, budget(999)), std::invalid_argument);
    CHECK_THROWS_AS(lambda_s1_mc(0, budget(1000)), std::invalid_argument);
}

TEST_CASE("lambda_sum_mc examples")
{
    const double oracle = two_mean_abs_cos(100000);
    CHECK(oracle == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-9));
    const auto one = lambda_sum_mc(1, budget(100000, 3));
    CHECK(std::abs(one.value - oracle) <= 4.0 * *one.stderr_);

    const auto big = lambda_sum_mc(32, budget(100000, 4));
    const double se = *big.stderr_ / big.normalizer;
    CHECK(std::abs(big.value / big.normalizer - std::sqrt(2.0 / std::numbers::pi)) <= 0.01 + 4.0 * se);
    CHECK(*big.limit_gap == doctest::Approx(std::abs(big.value / big.normalizer - *big.limit_value)));
}

TEST_CASE("lambda_sum_mc is dominated by twice lambda_s1_mc")
{
    for (int n : {2, 4}) {
        const auto sum = lambda_sum_mc(n, budget(100000, 10 + n));
        const auto s1 = lambda_s1_mc(n, budget(100000, 20 + n));
        CHECK(sum.value <= 2.0 * s1.value + 4.0 * std::hypot(*sum.stderr_, 2.0 * *s1.stderr_));
    }
}

TEST_CASE("convergence_table for the trace class")
{
    const auto single = convergence_table(Space::trace_class, {1}, budget(1000));
    REQUIRE(single.size() == 1);
    CHECK(single[0].value == 1.0);

    const std::vector<int> dims = {2, 4, 8, 16, 32};
    const auto rows = convergence_table(Space::trace_class, dims, budget(100000));
    REQUIRE(rows.size() == dims.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CAPTURE(rows[k].n);
        CHECK(rows[k].within_bounds());
        CHECK(rows[k].second_moment_ok());
        // rows equal stand-alone runs bit for bit
        if (rows[k].n <= 8)
            CHECK(rows[k].value == lambda_s1_mc(rows[k].n, budget(100000)).value);
    }
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double noise = 4.0 * (*rows[k].stderr_ / rows[k].n + *rows[k - 1].stderr_ / rows[k - 1].n);
        CHECK(*rows[k].limit_gap <= *rows[k - 1].limit_gap + noise);
    }

    CHECK_THROWS_AS(convergence_table(Space::trace_class, {4, 2}, budget(1000)), std::invalid_argument);
    CHECK_THROWS_AS(convergence_table(Space::trace_class, {}, budget(1000)), std::invalid_argument);
}

TEST_CASE("Kadets-Snobar sandwich for the trace class")
{
    for (int n : {1, 2, 3, 5, 8, 12}) {
        const auto r = lambda_s1_mc(n, budget(20000, 100 + n));
        CAPTURE(n);
        CHECK(r.within_bounds());
        CHECK(r.value >= n / 3.0 - 4.0 * *r.stderr_);
        CHECK(r.value <= n + 4.0 * *r.stderr_);
    }
}

TEST_CASE("within_bounds flags a value outside the sandwich")
{
    LambdaReport r;
    r.space = Space::trace_class;
    r.n = 4;
    r.value = 4.5;
    r.stderr_ = 0.01;
    r.lower_bound = 4.0 / 3.0;
    r.upper_bound = 4.0;
    CHECK_FALSE(r.within_bounds());
    r.value = 4.03;
    CHECK(r.within_bounds());
}

TEST_CASE("space tags")
{
    CHECK(parse_space("s1") == Space::trace_class);
    CHECK(parse_space("l1") == Space::l1);
    CHECK(parse_space("hs") == Space::hilbert_schmidt);
    CHECK(parse_space("torus") == Space::torus_l1_mc);
    CHECK(parse_space(to_string(Space::sum_10_01)) == Space::sum_10_01);
    CHECK_THROWS_AS(parse_space("s3"), std::invalid_argument);
    CHECK(is_monte_carlo(Space::trace_class));
    CHECK_FALSE(is_monte_carlo(Space::l1));
}
