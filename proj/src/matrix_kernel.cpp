#include "pclab/matrix_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pclab {

namespace {

bool all_finite(const DenseMatrix& m)
{
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag()))
                return false;
    return true;
}

double max_abs_of(const DenseMatrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

} // namespace

ComplexMatrix::ComplexMatrix(DenseMatrix m) : m_(std::move(m))
{
    if (m_.rows() < 1 || m_.rows() != m_.cols())
        throw std::invalid_argument("ComplexMatrix: expected a nonempty square matrix, got "
                                    + std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
    if (!all_finite(m_))
        throw std::invalid_argument("ComplexMatrix: non-finite entry");
}

ComplexMatrix ComplexMatrix::identity(Eigen::Index n)
{
    return ComplexMatrix(DenseMatrix::Identity(n, n));
}

ComplexMatrix ComplexMatrix::zero(Eigen::Index n)
{
    return ComplexMatrix(DenseMatrix::Zero(n, n));
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<complex_t>& d)
{
    const auto n = static_cast<Eigen::Index>(d.size());
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        m(i, i) = d[static_cast<std::size_t>(i)];
    return ComplexMatrix(std::move(m));
}

double ComplexMatrix::max_abs() const { return max_abs_of(m_); }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("ComplexMatrix product: dimension mismatch");
    return ComplexMatrix(a.m_ * b.m_);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("ComplexMatrix sum: dimension mismatch");
    return ComplexMatrix(a.m_ + b.m_);
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("ComplexMatrix difference: dimension mismatch");
    return ComplexMatrix(a.m_ - b.m_);
}

// --- UnitaryMatrix ---------------------------------------------------------

namespace {

double defect(const DenseMatrix& u)
{
    const auto n = u.rows();
    return max_abs_of(u * u.adjoint() - DenseMatrix::Identity(n, n));
}

} // namespace

UnitaryMatrix UnitaryMatrix::checked(ComplexMatrix m, double tol)
{
    const double d = defect(m.mat());
    if (!(d <= tol)) {
        std::ostringstream os;
        os << "UnitaryMatrix: max|UU* - Id| = " << d << " exceeds tolerance " << tol;
        throw NumericalError(os.str());
    }
    return UnitaryMatrix(std::move(m), tol);
}

UnitaryMatrix UnitaryMatrix::assume_unitary(DenseMatrix m)
{
    const auto n = m.rows();
    return UnitaryMatrix(ComplexMatrix(std::move(m)), default_unitary_tol(n));
}

UnitaryMatrix UnitaryMatrix::identity(Eigen::Index n)
{
    return UnitaryMatrix(ComplexMatrix::identity(n), default_unitary_tol(n));
}

double UnitaryMatrix::unitarity_defect() const { return defect(mat()); }

UnitaryMatrix UnitaryMatrix::adjoint() const
{
    return UnitaryMatrix(ComplexMatrix(mat().adjoint(), ComplexMatrix::Trusted{}), tol_);
}

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("UnitaryMatrix product: dimension mismatch");
    return UnitaryMatrix(ComplexMatrix(a.mat() * b.mat(), ComplexMatrix::Trusted{}),
                         std::max(a.tol_, b.tol_));
}

// --- elementary operations ---------------------------------------------------

ComplexMatrix adjoint(const ComplexMatrix& a)
{
    return ComplexMatrix(a.mat().adjoint());
}

complex_t trace(const ComplexMatrix& a)
{
    return a.mat().trace();
}

// --- SVD -----------------------------------------------------------------------

SvdResult svd(const ComplexMatrix& a)
{
    const auto n = a.size();
    Eigen::JacobiSVD<DenseMatrix> solver(a.mat(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (solver.info() != Eigen::Success)
        throw NumericalError("svd: Jacobi iteration did not converge");

    const Eigen::VectorXd& s = solver.singularValues();
    const DenseMatrix& w = solver.matrixU();
    const DenseMatrix& v = solver.matrixV();

    const double scale = a.max_abs();
    const double err = max_abs_of(w * s.cast<complex_t>().asDiagonal() * v.adjoint() - a.mat());
    if (!(err <= 1e-10 * scale * static_cast<double>(n))) {
        std::ostringstream os;
        os << "svd: reconstruction error " << err << " exceeds 1e-10*|a|max*n; "
           << "sigma_max = " << s(0) << ", sigma_min = " << s(n - 1)
           << ", condition = " << (s(n - 1) > 0 ? s(0) / s(n - 1) : std::numeric_limits<double>::infinity());
        throw NumericalError(os.str());
    }

    return SvdResult{UnitaryMatrix::checked(ComplexMatrix(w)),
                     std::vector<double>(s.data(), s.data() + s.size()),
                     UnitaryMatrix::checked(ComplexMatrix(v))};
}

// --- QR ------------------------------------------------------------------------

namespace {

struct RawQr {
    DenseMatrix q;
    DenseMatrix r;
};

RawQr householder_qr(const ComplexMatrix& a)
{
    const auto n = a.size();
    Eigen::HouseholderQR<DenseMatrix> qr(a.mat());
    RawQr out{qr.householderQ(), qr.matrixQR().triangularView<Eigen::Upper>()};

    const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * a.max_abs();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (!(std::abs(out.r(k, k)) > threshold))
            throw NumericalError("qr: input is singular (|R(" + std::to_string(k) + "," + std::to_string(k)
                                 + ")| below n*eps*|a|max)");
    }
    return out;
}

} // namespace

QrResult qr_phase_normalized(const ComplexMatrix& a)
{
    RawQr raw = householder_qr(a);
    const auto n = a.size();
    for (Eigen::Index k = 0; k < n; ++k) {
        const complex_t rkk = raw.r(k, k);
        const complex_t phase = rkk / std::abs(rkk);
        raw.q.col(k) *= phase;
        raw.r.row(k) *= std::conj(phase);
        raw.r(k, k) = complex_t(std::abs(rkk), 0.0);
    }
    return QrResult{UnitaryMatrix::assume_unitary(std::move(raw.q)), ComplexMatrix(std::move(raw.r))};
}

QrResult qr_unnormalized(const ComplexMatrix& a)
{
    RawQr raw = householder_qr(a);
    return QrResult{UnitaryMatrix::assume_unitary(std::move(raw.q)), ComplexMatrix(std::move(raw.r))};
}

} // namespace pclab
