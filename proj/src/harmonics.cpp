#include "pclab/harmonics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pclab::harmonics {

namespace {

std::size_t cell(int n, int i, int j)
{
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw std::invalid_argument("matrix index (" + std::to_string(i) + "," + std::to_string(j)
                                    + ") outside a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    return static_cast<std::size_t>(i * n + j);
}

void require_same_n(int a, int b, const char* what)
{
    if (a != b)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs "
                                    + std::to_string(b) + ")");
}

complex_t ipow(complex_t z, int e)
{
    complex_t r(1.0, 0.0);
    for (; e > 0; --e)
        r *= z;
    return r;
}

} // namespace

// --- Monomial -------------------------------------------------------------------

Monomial Monomial::one(int n)
{
    if (n < 1)
        throw std::invalid_argument("Monomial: n must be >= 1");
    const auto sz = static_cast<std::size_t>(n * n);
    return Monomial{n, std::vector<int>(sz, 0), std::vector<int>(sz, 0)};
}

Monomial Monomial::z(int n, int i, int j)
{
    Monomial m = one(n);
    m.alpha[cell(n, i, j)] = 1;
    return m;
}

Monomial Monomial::zbar(int n, int i, int j)
{
    Monomial m = one(n);
    m.beta[cell(n, i, j)] = 1;
    return m;
}

int Monomial::holomorphic_degree() const { return std::accumulate(alpha.begin(), alpha.end(), 0); }
int Monomial::antiholomorphic_degree() const { return std::accumulate(beta.begin(), beta.end(), 0); }

Monomial Monomial::operator*(const Monomial& other) const
{
    require_same_n(n, other.n, "Monomial product");
    Monomial r = *this;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        r.alpha[k] += other.alpha[k];
        r.beta[k] += other.beta[k];
    }
    return r;
}

// --- BidegreePolynomial ---------------------------------------------------------

BidegreePolynomial::BidegreePolynomial(int n) : n_(n)
{
    if (n < 1)
        throw std::invalid_argument("BidegreePolynomial: n must be >= 1");
}

BidegreePolynomial BidegreePolynomial::constant(int n, complex_t c)
{
    BidegreePolynomial p(n);
    p.add_term(Monomial::one(n), c);
    return p;
}

BidegreePolynomial BidegreePolynomial::monomial(const Monomial& m, complex_t c)
{
    BidegreePolynomial p(m.n);
    p.add_term(m, c);
    return p;
}

BidegreePolynomial BidegreePolynomial::coordinate(int n, int i, int j) { return monomial(Monomial::z(n, i, j)); }

BidegreePolynomial BidegreePolynomial::conj_coordinate(int n, int i, int j)
{
    return monomial(Monomial::zbar(n, i, j));
}

BidegreePolynomial BidegreePolynomial::trace(int n)
{
    BidegreePolynomial p(n);
    for (int i = 0; i < n; ++i)
        p.add_term(Monomial::z(n, i, i), 1.0);
    return p;
}

BidegreePolynomial BidegreePolynomial::hilbert_schmidt(int n)
{
    BidegreePolynomial p(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            p.add_term(Monomial::z(n, i, j) * Monomial::zbar(n, i, j), 1.0);
    return p;
}

complex_t BidegreePolynomial::coefficient(const Monomial& m) const
{
    const auto it = terms_.find(m);
    return it == terms_.end() ? complex_t{} : it->second;
}

void BidegreePolynomial::add_term(const Monomial& m, complex_t c)
{
    require_same_n(n_, m.n, "add_term");
    const auto cells = static_cast<std::size_t>(n_ * n_);
    if (m.alpha.size() != cells || m.beta.size() != cells)
        throw std::invalid_argument("add_term: exponent matrices must be n x n");
    for (std::size_t k = 0; k < cells; ++k)
        if (m.alpha[k] < 0 || m.beta[k] < 0)
            throw std::invalid_argument("add_term: negative exponent");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("add_term: non-finite coefficient");
    if (c == complex_t{})
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == complex_t{})
            terms_.erase(it);
    }
}

void BidegreePolynomial::prune(double dust)
{
    std::erase_if(terms_, [dust](const auto& kv) { return std::abs(kv.second) < dust; });
}

BidegreePolynomial& BidegreePolynomial::operator+=(const BidegreePolynomial& other)
{
    require_same_n(n_, other.n_, "polynomial sum");
    for (const auto& [m, c] : other.terms_)
        add_term(m, c);
    return *this;
}

BidegreePolynomial operator*(const BidegreePolynomial& a, const BidegreePolynomial& b)
{
    require_same_n(a.n_, b.n_, "polynomial product");
    BidegreePolynomial r(a.n_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            r.add_term(ma * mb, ca * cb);
    return r;
}

BidegreePolynomial operator*(complex_t c, const BidegreePolynomial& a)
{
    BidegreePolynomial r(a.n_);
    for (const auto& [m, v] : a.terms_)
        r.add_term(m, c * v);
    return r;
}

// --- evaluation and calculus --------------------------------------------------------

complex_t evaluate(const BidegreePolynomial& f, const ComplexMatrix& z)
{
    const int n = f.n();
    require_same_n(n, static_cast<int>(z.size()), "evaluate");
    complex_t sum{};
    for (const auto& [m, c] : f.terms()) {
        complex_t term = c;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const std::size_t k = cell(n, i, j);
                if (m.alpha[k] > 0)
                    term *= ipow(z(i, j), m.alpha[k]);
                if (m.beta[k] > 0)
                    term *= ipow(std::conj(z(i, j)), m.beta[k]);
            }
        sum += term;
    }
    return sum;
}

BidegreePolynomial laplacian(const BidegreePolynomial& f)
{
    BidegreePolynomial out(f.n());
    for (const auto& [m, c] : f.terms()) {
        for (std::size_t k = 0; k < m.alpha.size(); ++k) {
            if (m.alpha[k] == 0 || m.beta[k] == 0)
                continue;
            Monomial d = m;
            --d.alpha[k];
            --d.beta[k];
            out.add_term(d, c * static_cast<double>(m.alpha[k] * m.beta[k]));
        }
    }
    return out;
}

std::optional<std::pair<int, int>> bidegree(const BidegreePolynomial& f)
{
    if (f.is_zero())
        throw std::invalid_argument("bidegree: undefined for the zero polynomial");
    const Monomial& first = f.terms().begin()->first;
    const std::pair<int, int> pq{first.holomorphic_degree(), first.antiholomorphic_degree()};
    for (const auto& [m, c] : f.terms())
        if (m.holomorphic_degree() != pq.first || m.antiholomorphic_degree() != pq.second)
            return std::nullopt;
    return pq;
}

// --- group action ------------------------------------------------------------------

GroupElement GroupElement::identity(Eigen::Index n)
{
    return GroupElement{UnitaryMatrix::identity(n), UnitaryMatrix::identity(n)};
}

GroupElement GroupElement::inverse() const { return GroupElement{u.adjoint(), v.adjoint()}; }

GroupElement operator*(const GroupElement& a, const GroupElement& b)
{
    return GroupElement{b.u * a.u, a.v * b.v};
}

GroupElement sample_group_element(Eigen::Index n, RngStream& rng)
{
    UnitaryMatrix u = sample_haar_unitary(n, rng);
    UnitaryMatrix v = sample_haar_unitary(n, rng);
    return GroupElement{std::move(u), std::move(v)};
}

BidegreePolynomial translate(const BidegreePolynomial& f, const GroupElement& g)
{
    const int n = f.n();
    require_same_n(n, static_cast<int>(g.u.size()), "translate");
    const DenseMatrix& u = g.u.mat();
    const DenseMatrix& v = g.v.mat();

    // z_ij -> (U Z V)_ij = sum_kl U_ik V_lj z_kl, and its conjugate.
    std::vector<BidegreePolynomial> hol, anti;
    hol.reserve(static_cast<std::size_t>(n * n));
    anti.reserve(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            BidegreePolynomial h(n), a(n);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const complex_t w = u(i, k) * v(l, j);
                    h.add_term(Monomial::z(n, k, l), w);
                    a.add_term(Monomial::zbar(n, k, l), std::conj(w));
                }
            hol.push_back(std::move(h));
            anti.push_back(std::move(a));
        }

    BidegreePolynomial out(n);
    for (const auto& [m, c] : f.terms()) {
        BidegreePolynomial term = BidegreePolynomial::constant(n, c);
        for (std::size_t k = 0; k < m.alpha.size(); ++k) {
            for (int e = 0; e < m.alpha[k]; ++e)
                term = term * hol[k];
            for (int e = 0; e < m.beta[k]; ++e)
                term = term * anti[k];
        }
        out += term;
    }
    out.prune();
    return out;
}

ComplexEstimate l2_inner_mc(const BidegreePolynomial& f, const BidegreePolynomial& g, const McConfig& cfg)
{
    require_same_n(f.n(), g.n(), "l2_inner_mc");
    return mc_expectation_complex(
        [&](const UnitaryMatrix& u) { return evaluate(f, u) * std::conj(evaluate(g, u)); }, f.n(), cfg);
}

ComplexEstimate project_10_mc(const BidegreePolynomial& f, const UnitaryMatrix& probe, const McConfig& cfg)
{
    const int n = f.n();
    require_same_n(n, static_cast<int>(probe.size()), "project_10_mc");
    const DenseMatrix p = probe.mat();
    return mc_expectation_complex(
        [&](const UnitaryMatrix& v) {
            return static_cast<double>(n) * evaluate(f, v) * (p * v.mat().adjoint()).trace();
        },
        n, cfg);
}

complex_t kernel_t10(const UnitaryMatrix& u)
{
    return static_cast<double>(u.size()) * pclab::trace(u);
}

// --- the linear model --------------------------------------------------------------

Eigen::VectorXcd linear_coefficients(const BidegreePolynomial& f)
{
    const int n = f.n();
    const Eigen::Index block = n * n;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * block);
    for (const auto& [m, value] : f.terms()) {
        const int p = m.holomorphic_degree();
        const int q = m.antiholomorphic_degree();
        if (p + q != 1)
            throw std::invalid_argument("linear_coefficients: polynomial is not in h_(1,0) + h_(0,1)");
        const auto& exps = p == 1 ? m.alpha : m.beta;
        const auto k = static_cast<Eigen::Index>(std::find(exps.begin(), exps.end(), 1) - exps.begin());
        c(p == 1 ? k : block + k) = value;
    }
    return c;
}

BidegreePolynomial from_linear_coefficients(int n, const Eigen::VectorXcd& coeffs)
{
    const Eigen::Index block = n * n;
    if (coeffs.size() != 2 * block)
        throw std::invalid_argument("from_linear_coefficients: expected 2n^2 coordinates");
    BidegreePolynomial f(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Eigen::Index k = i * n + j;
            f.add_term(Monomial::z(n, i, j), coeffs(k));
            f.add_term(Monomial::zbar(n, i, j), coeffs(block + k));
        }
    return f;
}

EndomorphismMatrix::EndomorphismMatrix(DenseMatrix m) : m_(std::move(m))
{
    if (m_.rows() < 1 || m_.rows() != m_.cols())
        throw std::invalid_argument("EndomorphismMatrix: must be square and nonempty");
    if (!m_.allFinite())
        throw std::invalid_argument("EndomorphismMatrix: non-finite entry");
}

EndomorphismMatrix representation_matrix(const GroupElement& g)
{
    const Eigen::Index n = g.u.size();
    const Eigen::Index block = n * n;
    const DenseMatrix& u = g.u.mat();
    const DenseMatrix& v = g.v.mat();
    DenseMatrix r = DenseMatrix::Zero(2 * block, 2 * block);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index l = 0; l < n; ++l)
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    const complex_t w = u(i, k) * v(l, j);
                    r(k * n + l, i * n + j) = w;
                    r(block + k * n + l, block + i * n + j) = std::conj(w);
                }
    return EndomorphismMatrix(std::move(r));
}

EndomorphismMatrix block_projection(int n)
{
    const Eigen::Index block = n * n;
    DenseMatrix p = DenseMatrix::Zero(2 * block, 2 * block);
    p.topLeftCorner(block, block).setIdentity();
    return EndomorphismMatrix(std::move(p));
}

double max_deviation(const EndomorphismMatrix& a, const EndomorphismMatrix& b)
{
    if (a.dim() != b.dim())
        throw std::invalid_argument("max_deviation: dimension mismatch");
    return (a.mat() - b.mat()).cwiseAbs().maxCoeff();
}

double idempotence_defect(const EndomorphismMatrix& p)
{
    return (p.mat() * p.mat() - p.mat()).cwiseAbs().maxCoeff();
}

RudinResult rudin_average(const EndomorphismMatrix& q0, int n, const McConfig& cfg)
{
    if (n < 1)
        throw std::invalid_argument("rudin_average: n must be >= 1");
    const Eigen::Index block = static_cast<Eigen::Index>(n) * n;
    if (q0.dim() != 2 * block)
        throw std::invalid_argument("rudin_average: Q0 must be 2n^2 x 2n^2");
    if (cfg.n_samples < 2)
        throw std::invalid_argument("rudin_average: needs n_samples >= 2");

    constexpr double tol = 1e-8;
    const DenseMatrix& q = q0.mat();
    const double idem = (q * q - q).cwiseAbs().maxCoeff();
    const double top_left = (q.topLeftCorner(block, block) - DenseMatrix::Identity(block, block)).cwiseAbs().maxCoeff();
    const double bottom = q.bottomRows(block).cwiseAbs().maxCoeff();
    if (idem > tol || top_left > tol || bottom > tol) {
        std::ostringstream os;
        os << "rudin_average: Q0 is not a projection onto the h_(1,0) block (|Q0^2-Q0| = " << idem
           << ", |Q0_11 - Id| = " << top_left << ", |bottom rows| = " << bottom << ")";
        throw std::invalid_argument(os.str());
    }

    using Acc = Moments<Eigen::ArrayXXcd>;
    auto chunks = run_chunks<Acc>(cfg, [&](RngStream& rng, std::size_t, std::size_t count) {
        Acc acc;
        for (std::size_t s = 0; s < count; ++s) {
            const GroupElement g = sample_group_element(n, rng);
            const DenseMatrix t = representation_matrix(g.inverse()).mat() * q * representation_matrix(g).mat();
            acc.add(t.array());
        }
        return acc;
    });
    Acc total;
    for (const auto& c : chunks)
        total.merge(c);

    const double count = static_cast<double>(total.count);
    Eigen::MatrixXd se = (total.m2.real() / (count - 1.0)).sqrt().matrix() / std::sqrt(count);
    return RudinResult{EndomorphismMatrix(total.mean.matrix()), std::move(se), total.count};
}

} // namespace pclab::harmonics
