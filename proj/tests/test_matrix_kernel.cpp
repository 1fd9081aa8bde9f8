#include "doctest.h"
#include "test_support.hpp"

#include <numeric>

using namespace pclab;
using pclab::testing::max_abs;
using pclab::testing::random_matrix;

TEST_CASE("ComplexMatrix rejects bad shapes and non-finite entries")
{
    CHECK_THROWS_AS(ComplexMatrix(DenseMatrix(2, 3)), std::invalid_argument);
    CHECK_THROWS_AS(ComplexMatrix(DenseMatrix(0, 0)), std::invalid_argument);
    DenseMatrix m = DenseMatrix::Identity(2, 2);
    m(0, 1) = complex_t(std::nan(""), 0.0);
    CHECK_THROWS_AS(ComplexMatrix{m}, std::invalid_argument);
}

TEST_CASE("adjoint")
{
    CHECK(max_abs(adjoint(ComplexMatrix::identity(3)).mat() - DenseMatrix::Identity(3, 3)) == 0.0);

    const auto d = adjoint(ComplexMatrix::diagonal({{0, 1}, {1, 0}}));
    CHECK(d(0, 0) == complex_t(0, -1));
    CHECK(d(1, 1) == complex_t(1, 0));

    const auto a = random_matrix(5, 1);
    CHECK(max_abs(adjoint(adjoint(a)).mat() - a.mat()) == 0.0);
    CHECK(adjoint(a)(1, 3) == std::conj(a(3, 1)));
}

TEST_CASE("trace")
{
    CHECK(trace(ComplexMatrix::identity(3)) == complex_t(3, 0));

    DenseMatrix nil = DenseMatrix::Zero(3, 3);
    nil(0, 1) = 2.0;
    nil(1, 2) = complex_t(0, 5);
    CHECK(trace(ComplexMatrix(nil)) == complex_t(0, 0));

    DenseMatrix a(2, 2);
    a << 1.0, 2.0, 3.0, complex_t(0, 4);
    CHECK(trace(ComplexMatrix(a)) == complex_t(1, 4));
}

TEST_CASE("trace(A) = conj(trace(A*)) on random matrices")
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto a = random_matrix(1 + static_cast<Eigen::Index>(s % 7), s);
        CHECK(std::abs(trace(a) - std::conj(trace(adjoint(a)))) < 1e-14);
    }
}

TEST_CASE("svd examples")
{
    const auto id = svd(ComplexMatrix::identity(4));
    for (double s : id.sigma)
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));

    const auto d = svd(ComplexMatrix::diagonal({3.0, -4.0}));
    REQUIRE(d.sigma.size() == 2);
    CHECK(d.sigma[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(d.sigma[1] == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("svd contract on random matrices")
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(s % 9);
        const auto a = random_matrix(n, 100 + s);
        const auto r = svd(a);
        // descending
        CHECK(std::is_sorted(r.sigma.rbegin(), r.sigma.rend()));
        // reconstruction
        const DenseMatrix sig = Eigen::Map<const Eigen::VectorXd>(r.sigma.data(), n).cast<complex_t>().asDiagonal();
        CHECK(max_abs(r.left.mat() * sig * r.right.mat().adjoint() - a.mat()) <= 1e-10 * a.max_abs() * n);
        // s_k(A) = s_k(A*)
        const auto ra = svd(adjoint(a));
        for (Eigen::Index k = 0; k < n; ++k)
            CHECK(std::abs(r.sigma[k] - ra.sigma[k]) < 1e-12 * (1.0 + r.sigma[0]));
        // sum of singular values dominates |tr|
        CHECK(std::accumulate(r.sigma.begin(), r.sigma.end(), 0.0) >= std::abs(trace(a)) - 1e-12);
    }
}

TEST_CASE("sum of singular values equals |trace| for a phase times a PSD matrix")
{
    const auto b = random_matrix(4, 7);
    const ComplexMatrix psd = b * adjoint(b);
    const ComplexMatrix a(psd.mat() * std::polar(1.0, 0.7));
    const auto r = svd(a);
    CHECK(std::accumulate(r.sigma.begin(), r.sigma.end(), 0.0) == doctest::Approx(std::abs(trace(a))).epsilon(1e-12));
}

TEST_CASE("qr_phase_normalized examples")
{
    const auto id = qr_phase_normalized(ComplexMatrix::identity(3));
    CHECK(max_abs(id.q.mat() - DenseMatrix::Identity(3, 3)) < 1e-15);
    CHECK(max_abs(id.r.mat() - DenseMatrix::Identity(3, 3)) < 1e-15);

    const auto m = qr_phase_normalized(ComplexMatrix::diagonal({-2.0}));
    CHECK(std::abs(m.q(0, 0) - complex_t(-1, 0)) < 1e-15);
    CHECK(std::abs(m.r(0, 0) - complex_t(2, 0)) < 1e-15);
}

TEST_CASE("qr_phase_normalized contract on Ginibre input")
{
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(s % 10);
        const auto a = random_matrix(n, 500 + s);
        const auto qr = qr_phase_normalized(a);
        for (Eigen::Index k = 0; k < n; ++k) {
            CHECK(qr.r(k, k).imag() == 0.0);
            CHECK(qr.r(k, k).real() > 0.0);
            for (Eigen::Index j = 0; j < k; ++j)
                CHECK(qr.r(k, j) == complex_t(0, 0));
        }
        CHECK(max_abs(qr.q.mat() * qr.r.mat() - a.mat()) <= 1e-10 * a.max_abs());
        CHECK(qr.q.unitarity_defect() <= default_unitary_tol(n));
    }
}

TEST_CASE("qr rejects a singular matrix")
{
    DenseMatrix s(2, 2);
    s << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(qr_phase_normalized(ComplexMatrix(s)), NumericalError);
    CHECK_THROWS_AS(qr_phase_normalized(ComplexMatrix::zero(3)), NumericalError);
}

TEST_CASE("UnitaryMatrix::checked")
{
    CHECK_NOTHROW(UnitaryMatrix::checked(ComplexMatrix::diagonal({{0, 1}, {-1, 0}})));
    CHECK_THROWS_AS(UnitaryMatrix::checked(ComplexMatrix::diagonal({2.0, 1.0})), NumericalError);
}
