#include "doctest.h"
#include "test_support.hpp"

#include <numbers>

using namespace pclab;
using pclab::testing::budget;
using pclab::testing::max_abs;

namespace {

// Independent oracle: E|e^{ia} + e^{ib}| under the CUE(2) eigenvalue density
// |e^{ia} - e^{ib}|^2 / (2! (2 pi)^2), midpoint rule on the torus.
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
    return sum * h * h / (2.0 * 4.0 * std::numbers::pi * std::numbers::pi);
}

// Independent oracle: (1/2pi) int_0^{2pi} |1 + e^{i t}| dt, midpoint rule split at the kink t = pi.
double circle_mean_abs_one_plus_z(int grid)
{
    const double h = std::numbers::pi / grid;
    double sum = 0.0;
    for (int half = 0; half < 2; ++half)
        for (int k = 0; k < grid; ++k)
            sum += std::abs(1.0 + std::polar(1.0, half * std::numbers::pi + (k + 0.5) * h));
    return sum * h / (2.0 * std::numbers::pi);
}

template <class F>
Moments<complex_t> draw(std::size_t count, std::uint64_t seed, F&& sample)
{
    RngStream rng(seed, 0);
    Moments<complex_t> m;
    for (std::size_t i = 0; i < count; ++i)
        m.add(sample(rng));
    return m;
}

double stderr_of(const Moments<complex_t>& m)
{
    return std::sqrt(m.m2.real() / static_cast<double>(m.count - 1)) / std::sqrt(static_cast<double>(m.count));
}

} // namespace

TEST_CASE("Philox4x32-10 known-answer vectors")
{
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff})
          == A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0})
          == A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("RngStream is a pure function of (seed, stream)")
{
    RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    bool differs_stream = false, differs_seed = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        differs_stream |= x != c.next_u64();
        differs_seed |= x != d.next_u64();
    }
    CHECK(differs_stream);
    CHECK(differs_seed);

    RngStream u(1, 1);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        CHECK((x >= 0.0 && x < 1.0));
    }
}

TEST_CASE("sample_ginibre: determinism and normalization")
{
    RngStream a(11, 0), b(11, 0);
    CHECK(sample_ginibre(1, a)(0, 0) == sample_ginibre(1, b)(0, 0));

    const auto sq = draw(1000000, 5, [](RngStream& r) { return complex_t(std::norm(sample_ginibre(1, r)(0, 0)), 0); });
    CHECK(std::abs(sq.mean.real() - 1.0) <= 4.0 * stderr_of(sq));

    const auto mean = draw(1000000, 6, [](RngStream& r) { return sample_ginibre(1, r)(0, 0); });
    CHECK(std::abs(mean.mean) <= 4.0 * stderr_of(mean));
}

TEST_CASE("sample_haar_unitary: unitarity of every sample")
{
    RngStream rng(3, 0);
    for (Eigen::Index n : {1, 2, 3, 5, 8, 16, 33, 64})
        for (int k = 0; k < 20; ++k) {
            const auto u = sample_haar_unitary(n, rng);
            CHECK(u.unitarity_defect() <= 1e-10 * static_cast<double>(n));
        }
}

TEST_CASE("sample_haar_unitary: n = 1 is a uniform phase")
{
    const auto m = draw(100000, 9, [](RngStream& r) { return sample_haar_unitary(1, r)(0, 0); });
    CHECK(std::abs(m.mean) <= 4.0 * stderr_of(m));
}

TEST_CASE("sample_haar_unitary: E[u11 conj(u11)] = 1/n")
{
    for (Eigen::Index n : {2, 3, 5}) {
        const auto m = draw(100000, 10 + n, [n](RngStream& r) {
            const auto u = sample_haar_unitary(n, r);
            return u(0, 0) * std::conj(u(0, 0));
        });
        CHECK(std::abs(m.mean - complex_t(1.0 / n, 0)) <= 4.0 * stderr_of(m));
    }
}

TEST_CASE("phase normalization is what makes the sampler Haar")
{
    // Plain Householder QR returns Q D for a data-dependent diagonal phase
    // matrix D. Moduli of entries are unaffected (E|u11|^2 stays 1/n), but
    // phases are not: u11 comes out with a phase tied to the sign of
    // Re(a11), so E[u11] is far from the Haar value 0.
    constexpr Eigen::Index n = 2;
    auto plain = [](RngStream& r) { return qr_unnormalized(sample_ginibre(n, r)).q; };
    auto haar = [](RngStream& r) { return sample_haar_unitary(n, r); };

    const auto plain_u11 = draw(1000000, 21, [&](RngStream& r) { return plain(r)(0, 0); });
    const auto haar_u11 = draw(1000000, 21, [&](RngStream& r) { return haar(r)(0, 0); });
    CHECK(std::abs(haar_u11.mean) <= 4.0 * stderr_of(haar_u11));
    CHECK(std::abs(plain_u11.mean) > 100.0 * stderr_of(plain_u11));

    const auto plain_sq = draw(1000000, 22, [&](RngStream& r) { return complex_t(std::norm(plain(r)(0, 0)), 0); });
    const auto haar_sq = draw(1000000, 22, [&](RngStream& r) { return complex_t(std::norm(haar(r)(0, 0)), 0); });
    CHECK(std::abs(haar_sq.mean.real() - 0.5) <= 4.0 * stderr_of(haar_sq));
    CHECK(std::abs(plain_sq.mean.real() - 0.5) <= 4.0 * stderr_of(plain_sq));
}

TEST_CASE("mc_expectation: |tr| on U(1) is identically 1")
{
    const auto e = mc_expectation([](const UnitaryMatrix& u) { return std::abs(trace(u)); }, 1, 10000, 1);
    CHECK(std::abs(e.mean - 1.0) < 1e-14);
    CHECK(e.stderr_ < 1e-14);
    CHECK(e.n_samples == 10000);
    CHECK(e.master_seed == 1);
}

TEST_CASE("mc_expectation: E|tr U|^2 = 1")
{
    for (Eigen::Index n : {2, 3, 7}) {
        const auto e = mc_expectation([](const UnitaryMatrix& u) { return std::norm(trace(u)); }, n, 100000, 77);
        CHECK(std::abs(e.mean - 1.0) <= 4.0 * e.stderr_);
    }
}

TEST_CASE("mc_expectation: E|tr U| at n = 2 against the CUE(2) quadrature oracle")
{
    const double oracle = cue2_mean_abs_trace_quadrature(1500);
    CHECK(oracle == doctest::Approx(8.0 / (3.0 * std::numbers::pi)).epsilon(1e-5));

    const auto e = mc_expectation([](const UnitaryMatrix& u) { return std::abs(trace(u)); }, 2, 1000000, 42);
    CHECK(std::abs(e.mean - oracle) <= 4.0 * e.stderr_);
    CHECK(e.stderr_ < 1e-3);
}

TEST_CASE("mc_expectation: stderr uses the n-1 denominator")
{
    // Two samples: x1, x2 -> stderr = |x1 - x2| / 2.
    McConfig cfg = budget(2, 3);
    std::vector<double> seen;
    const auto e = mc_expectation(
        [&](const UnitaryMatrix& u) {
            seen.push_back(u(0, 0).real());
            return u(0, 0).real();
        },
        1, cfg);
    REQUIRE(seen.size() == 2);
    CHECK(e.stderr_ == doctest::Approx(std::abs(seen[0] - seen[1]) / 2.0).epsilon(1e-12));
}

TEST_CASE("mc_expectation: preconditions and non-finite observables")
{
    CHECK_THROWS_AS(mc_expectation([](const UnitaryMatrix&) { return 1.0; }, 2, 1, 1), std::invalid_argument);

    const RealObservable bad = [](const UnitaryMatrix& u) {
        return std::norm(u(0, 0)) > 0.99 ? std::nan("") : 1.0;
    };
    std::size_t index_1 = 0, index_4 = 0;
    McConfig cfg = budget(50000, 5);
    cfg.chunk_size = 1000;
    cfg.workers = 1;
    try {
        mc_expectation(bad, 2, cfg);
        FAIL("expected NonFiniteSample");
    } catch (const NonFiniteSample& e) {
        index_1 = e.sample_index();
        CHECK(std::string(e.what()).find(std::to_string(index_1)) != std::string::npos);
    }
    cfg.workers = 4;
    try {
        mc_expectation(bad, 2, cfg);
        FAIL("expected NonFiniteSample");
    } catch (const NonFiniteSample& e) {
        index_4 = e.sample_index();
    }
    CHECK(index_1 == index_4);
}

TEST_CASE("mc_expectation: results do not depend on the worker count")
{
    McConfig cfg = budget(30000, 99);
    cfg.chunk_size = 1024;
    const ComplexObservable f = [](const UnitaryMatrix& u) { return u(0, 1) * trace(u); };
    cfg.workers = 1;
    const auto a = mc_expectation_complex(f, 3, cfg);
    cfg.workers = 8;
    const auto b = mc_expectation_complex(f, 3, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.n_samples == b.n_samples);

    // a different chunk size is a different (but equally valid) estimate
    cfg.chunk_size = 500;
    const auto c = mc_expectation_complex(f, 3, cfg);
    CHECK(c.mean != a.mean);
}

TEST_CASE("mc_expectations evaluates observables on shared draws")
{
    const ComplexObservable fs[] = {
        [](const UnitaryMatrix& u) { return complex_t(std::abs(trace(u)), 0); },
        [](const UnitaryMatrix& u) { return complex_t(std::norm(trace(u)), 0); },
    };
    const auto both = mc_expectations(fs, 4, budget(5000, 8));
    const auto alone = mc_expectation_complex(fs[0], 4, budget(5000, 8));
    CHECK(both[0].mean == alone.mean);
    CHECK(both[0].stderr_ == alone.stderr_);
}

TEST_CASE("Haar expectations are left and right invariant")
{
    const auto v = pclab::testing::random_unitary(3, 4242);
    const DenseMatrix vm = v.mat();
    const std::vector<std::function<double(const DenseMatrix&)>> observables = {
        [](const DenseMatrix& u) { return std::abs(u.trace()); },
        [](const DenseMatrix& u) { return std::norm(u(0, 0)); },
        [](const DenseMatrix& u) { return u(0, 1).real(); },
    };
    for (const auto& f : observables) {
        const auto plain = mc_expectation([&](const UnitaryMatrix& u) { return f(u.mat()); }, 3, 100000, 1);
        const auto left = mc_expectation([&](const UnitaryMatrix& u) { return f(vm * u.mat()); }, 3, 100000, 2);
        const auto right = mc_expectation([&](const UnitaryMatrix& u) { return f(u.mat() * vm); }, 3, 100000, 3);
        auto agree = [](const RealEstimate& a, const RealEstimate& b) {
            return std::abs(a.mean - b.mean) <= 4.0 * std::hypot(a.stderr_, b.stderr_);
        };
        CHECK(agree(plain, left));
        CHECK(agree(plain, right));
        CHECK(agree(left, right));
    }
}

TEST_CASE("mc_torus_expectation")
{
    const auto one = mc_torus_expectation([](std::span<const complex_t> z) { return std::abs(z[0]); }, 5, budget(10000));
    CHECK(std::abs(one.mean - 1.0) < 1e-14);
    CHECK(one.stderr_ < 1e-14);

    const TorusObservable abs_sum = [](std::span<const complex_t> z) {
        complex_t s{};
        for (auto zk : z)
            s += zk;
        return std::abs(s);
    };
    const auto n1 = mc_torus_expectation(abs_sum, 1, budget(10000));
    CHECK(std::abs(n1.mean - 1.0) < 1e-14);

    const double oracle = circle_mean_abs_one_plus_z(200000);
    CHECK(oracle == doctest::Approx(4.0 / std::numbers::pi).epsilon(1e-9));
    const auto n2 = mc_torus_expectation(abs_sum, 2, budget(1000000, 17));
    CHECK(std::abs(n2.mean - oracle) <= 4.0 * n2.stderr_);
}

TEST_CASE("Moments merge equals sequential accumulation")
{
    RngStream rng(1, 2);
    std::vector<complex_t> xs(1000);
    for (auto& x : xs)
        x = rng.complex_normal();
    Moments<complex_t> all, a, b;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        all.add(xs[i]);
        (i < 300 ? a : b).add(xs[i]);
    }
    a.merge(b);
    CHECK(std::abs(a.mean - all.mean) < 1e-14);
    CHECK(std::abs(a.m2 - all.m2) < 1e-10);
    CHECK(a.count == all.count);
}
