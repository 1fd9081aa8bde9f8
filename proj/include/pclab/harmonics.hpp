#pragma once

#include <compare>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "pclab/haar.hpp"

namespace pclab::harmonics {

/// Exponent pair (alpha, beta) of Z^alpha conj(Z)^beta. Both are n x n
/// matrices of nonnegative integers stored row-major: entry (i, j) lives at
/// index i * n + j.
struct Monomial {
    int n = 0;
    std::vector<int> alpha;
    std::vector<int> beta;

    static Monomial one(int n);
    /// z_ij (0-based indices).
    static Monomial z(int n, int i, int j);
    /// conj(z_ij).
    static Monomial zbar(int n, int i, int j);

    int holomorphic_degree() const;
    int antiholomorphic_degree() const;
    Monomial operator*(const Monomial& other) const;

    auto operator<=>(const Monomial&) const = default;
};

/// Coefficients below this modulus are treated as floating-point dust and
/// dropped when a polynomial is expanded (translate, products).
constexpr double kCoefficientDust = 1e-14;

/// Finite sum of c * Z^alpha conj(Z)^beta on n x n matrices, kept in
/// canonical form: one entry per monomial, no zero coefficients.
class BidegreePolynomial {
public:
    explicit BidegreePolynomial(int n);

    static BidegreePolynomial constant(int n, complex_t c);
    static BidegreePolynomial monomial(const Monomial& m, complex_t c = 1.0);
    /// e_ij(Z) = z_ij
    static BidegreePolynomial coordinate(int n, int i, int j);
    /// conj(e_ij)
    static BidegreePolynomial conj_coordinate(int n, int i, int j);
    /// Z -> tr(Z)
    static BidegreePolynomial trace(int n);
    /// Z -> tr(Z Z*) = sum |z_ij|^2, which equals n on U(n).
    static BidegreePolynomial hilbert_schmidt(int n);

    int n() const { return n_; }
    const std::map<Monomial, complex_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    /// Coefficient of a monomial (0 if absent).
    complex_t coefficient(const Monomial& m) const;

    /// Adds c to the coefficient of m; an entry that becomes exactly 0 is removed.
    void add_term(const Monomial& m, complex_t c);
    /// Removes every coefficient with modulus below `dust`.
    void prune(double dust = kCoefficientDust);

    BidegreePolynomial& operator+=(const BidegreePolynomial& other);
    friend BidegreePolynomial operator+(BidegreePolynomial a, const BidegreePolynomial& b) { return a += b; }
    friend BidegreePolynomial operator*(const BidegreePolynomial& a, const BidegreePolynomial& b);
    friend BidegreePolynomial operator*(complex_t c, const BidegreePolynomial& a);

private:
    int n_;
    std::map<Monomial, complex_t> terms_;
};

complex_t evaluate(const BidegreePolynomial& f, const ComplexMatrix& z);
inline complex_t evaluate(const BidegreePolynomial& f, const UnitaryMatrix& u) { return evaluate(f, u.matrix()); }

/// sum_ij d^2 f / dz_ij dconj(z_ij), term by term.
BidegreePolynomial laplacian(const BidegreePolynomial& f);

/// (p, q) if every term has |alpha| = p and |beta| = q. Throws on the zero
/// polynomial.
std::optional<std::pair<int, int>> bidegree(const BidegreePolynomial& f);

/// (U, V) in U(n) x U(n) with (U0, V0) * (U1, V1) = (U1 U0, V0 V1).
/// Acts on functions by rho_(U,V) f = f o L_U o R_V, i.e. Z -> f(U Z V);
/// with this law rho_(g h) = rho_g rho_h.
struct GroupElement {
    UnitaryMatrix u;
    UnitaryMatrix v;

    static GroupElement identity(Eigen::Index n);
    GroupElement inverse() const;
    friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
};

/// Independent Haar draws for both factors (product Haar measure).
GroupElement sample_group_element(Eigen::Index n, RngStream& rng);

/// The polynomial Z -> f(U Z V), expanded and pruned.
BidegreePolynomial translate(const BidegreePolynomial& f, const GroupElement& g);

/// MC estimate of <f, g>_{L2} = E f(U) conj(g(U)).
ComplexEstimate l2_inner_mc(const BidegreePolynomial& f, const BidegreePolynomial& g, const McConfig& cfg);

/// MC estimate of (pi_(1,0) f)(probe) = n E_V f(V) tr(probe V*).
ComplexEstimate project_10_mc(const BidegreePolynomial& f, const UnitaryMatrix& probe, const McConfig& cfg);

/// Kernel of the projection onto h_(1,0): t(U) = n tr(U).
complex_t kernel_t10(const UnitaryMatrix& u);

// --- the 2n^2-dimensional model h_(1,0) + h_(0,1) ----------------------------

/// Coordinates on h_(1,0) + h_(0,1): f = sum c_ij z_ij + sum d_ij conj(z_ij)
/// maps to (c_00, c_01, ..., c_(n-1)(n-1), d_00, ..., d_(n-1)(n-1)).
Eigen::VectorXcd linear_coefficients(const BidegreePolynomial& f);
BidegreePolynomial from_linear_coefficients(int n, const Eigen::VectorXcd& coeffs);

/// Matrix of an operator on h_(1,0) + h_(0,1) in the coordinates above.
class EndomorphismMatrix {
public:
    explicit EndomorphismMatrix(DenseMatrix m);
    const DenseMatrix& mat() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

private:
    DenseMatrix m_;
};

/// Matrix of rho_g restricted to h_(1,0) + h_(0,1). Block diagonal: the
/// (1,0) block has entry [(k,l),(i,j)] = U_ik V_lj and the (0,1) block is its
/// conjugate. representation_matrix(g * h) = representation_matrix(g) *
/// representation_matrix(h).
EndomorphismMatrix representation_matrix(const GroupElement& g);

struct RudinResult {
    EndomorphismMatrix average;
    Eigen::MatrixXd entry_stderr;
    std::size_t n_samples;
};

/// Monte Carlo version of the group average of rho_(g^-1) Q0 rho_g over
/// U(n) x U(n). Q0 must be a projection onto the h_(1,0) block (first n^2
/// coordinates): top-left block Id, bottom blocks 0, to 1e-8.
RudinResult rudin_average(const EndomorphismMatrix& q0, int n, const McConfig& cfg);

/// diag(Id_{n^2}, 0): the orthogonal projection onto h_(1,0).
EndomorphismMatrix block_projection(int n);

/// max-abs entry of (a - b).
double max_deviation(const EndomorphismMatrix& a, const EndomorphismMatrix& b);
/// max-abs entry of (P P - P).
double idempotence_defect(const EndomorphismMatrix& p);

} // namespace pclab::harmonics
