#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pclab {

using complex_t = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

/// Raised by the factorizations when the input violates their preconditions
/// or the numerical result fails its contract.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnitaryMatrix;

/// Square n x n complex matrix with finite entries.
class ComplexMatrix {
public:
    /// Throws std::invalid_argument if `m` is empty, not square, or has a
    /// NaN/Inf entry.
    explicit ComplexMatrix(DenseMatrix m);

    static ComplexMatrix identity(Eigen::Index n);
    static ComplexMatrix zero(Eigen::Index n);
    static ComplexMatrix diagonal(const std::vector<complex_t>& d);

    Eigen::Index size() const { return m_.rows(); }
    const DenseMatrix& mat() const { return m_; }
    complex_t operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

    /// Largest entry modulus.
    double max_abs() const;

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
    friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    struct Trusted {};
    ComplexMatrix(DenseMatrix m, Trusted) : m_(std::move(m)) {}
    friend class UnitaryMatrix;
    friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

    DenseMatrix m_;
};

/// Default unitarity tolerance for a matrix of side n.
inline double default_unitary_tol(Eigen::Index n) { return 1e-10 * static_cast<double>(n); }

/// A ComplexMatrix with max|U U* - Id| <= tol.
class UnitaryMatrix {
public:
    /// Verifies unitarity; throws NumericalError otherwise.
    static UnitaryMatrix checked(ComplexMatrix m, double tol);
    static UnitaryMatrix checked(ComplexMatrix m) {
        const auto n = m.size();
        return checked(std::move(m), default_unitary_tol(n));
    }
    /// For producers that are unitary by construction (Haar sampler, products
    /// of unitaries). Skips the O(n^3) check.
    static UnitaryMatrix assume_unitary(DenseMatrix m);

    static UnitaryMatrix identity(Eigen::Index n);

    const ComplexMatrix& matrix() const { return inner_; }
    const DenseMatrix& mat() const { return inner_.mat(); }
    Eigen::Index size() const { return inner_.size(); }
    double tol() const { return tol_; }
    complex_t operator()(Eigen::Index i, Eigen::Index j) const { return inner_(i, j); }

    /// max|U U* - Id|
    double unitarity_defect() const;

    UnitaryMatrix adjoint() const;
    friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

private:
    UnitaryMatrix(ComplexMatrix m, double tol) : inner_(std::move(m)), tol_(tol) {}

    ComplexMatrix inner_;
    double tol_;
};

ComplexMatrix adjoint(const ComplexMatrix& a);
complex_t trace(const ComplexMatrix& a);
inline complex_t trace(const UnitaryMatrix& u) { return trace(u.matrix()); }

struct SvdResult {
    UnitaryMatrix left;           // W
    std::vector<double> sigma;    // descending
    UnitaryMatrix right;          // V, with a = W diag(sigma) V*
};

/// Full SVD. Phases of the factors are unspecified; only `sigma` and the
/// reconstruction a = W diag(sigma) V* are part of the contract.
SvdResult svd(const ComplexMatrix& a);

struct QrResult {
    UnitaryMatrix q;
    ComplexMatrix r;   // upper triangular, diag(r) real and > 0
};

/// Householder QR followed by moving the phase of each diagonal entry of R
/// into the matching column of Q, so that diag(R) is real positive. With this
/// convention QR of a Ginibre matrix yields an exactly Haar-distributed Q.
/// Throws NumericalError on an (numerically) singular input.
QrResult qr_phase_normalized(const ComplexMatrix& a);

/// Plain Householder QR with no phase normalization. Only used to
/// demonstrate the bias of the unnormalized sampler.
QrResult qr_unnormalized(const ComplexMatrix& a);

} // namespace pclab
