#include "pclab/haar.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace pclab {

unsigned default_worker_count()
{
    if (const char* env = std::getenv("PCLAB_THREADS")) {
        unsigned value = 0;
        const char* end = env + std::strlen(env);
        const auto [ptr, ec] = std::from_chars(env, end, value);
        if (ec == std::errc() && ptr == end && value > 0)
            return value;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ComplexMatrix sample_ginibre(Eigen::Index n, RngStream& rng)
{
    if (n < 1)
        throw std::invalid_argument("sample_ginibre: n must be >= 1");
    DenseMatrix m(n, n);
    // Row-major fill order so the stream layout does not depend on Eigen's storage.
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = rng.complex_normal();
    return ComplexMatrix(std::move(m));
}

UnitaryMatrix sample_haar_unitary(Eigen::Index n, RngStream& rng)
{
    try {
        return qr_phase_normalized(sample_ginibre(n, rng)).q;
    } catch (const NumericalError&) {
        // Singular Ginibre draws have probability zero; one retry, then give up.
        return qr_phase_normalized(sample_ginibre(n, rng)).q;
    }
}

std::vector<complex_t> sample_torus(std::size_t n, RngStream& rng)
{
    std::vector<complex_t> z(n);
    for (auto& zk : z)
        zk = std::polar(1.0, rng.angle());
    return z;
}

namespace {

void require_samples(std::size_t n_samples)
{
    if (n_samples < 2)
        throw std::invalid_argument("Monte Carlo estimate needs n_samples >= 2, got " + std::to_string(n_samples));
}

[[noreturn]] void throw_non_finite(std::size_t index)
{
    throw NonFiniteSample(index, "observable returned a non-finite value at sample " + std::to_string(index));
}

bool finite(complex_t z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

} // namespace

std::vector<ComplexEstimate> mc_expectations(std::span<const ComplexObservable> fs, Eigen::Index n,
                                             const McConfig& cfg)
{
    require_samples(cfg.n_samples);
    const std::size_t k = fs.size();
    auto chunks = run_chunks<std::vector<Moments<complex_t>>>(cfg, [&](RngStream& rng, std::size_t first,
                                                                        std::size_t count) {
        std::vector<Moments<complex_t>> acc(k);
        for (std::size_t s = 0; s < count; ++s) {
            const UnitaryMatrix u = sample_haar_unitary(n, rng);
            for (std::size_t i = 0; i < k; ++i) {
                const complex_t x = fs[i](u);
                if (!finite(x))
                    throw_non_finite(first + s);
                acc[i].add(x);
            }
        }
        return acc;
    });

    std::vector<ComplexEstimate> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Moments<complex_t>> column;
        column.reserve(chunks.size());
        for (const auto& c : chunks)
            column.push_back(c[i]);
        out.push_back(finish_estimate<complex_t>(column, cfg.master_seed));
    }
    return out;
}

ComplexEstimate mc_expectation_complex(const ComplexObservable& f, Eigen::Index n, const McConfig& cfg)
{
    return mc_expectations(std::span<const ComplexObservable>(&f, 1), n, cfg).front();
}

RealEstimate mc_expectation(const RealObservable& f, Eigen::Index n, const McConfig& cfg)
{
    const ComplexObservable g = [&f](const UnitaryMatrix& u) { return complex_t(f(u), 0.0); };
    const ComplexEstimate c = mc_expectation_complex(g, n, cfg);
    return RealEstimate{c.mean.real(), c.stderr_, c.n_samples, c.master_seed};
}

RealEstimate mc_torus_expectation(const TorusObservable& f, std::size_t n, const McConfig& cfg)
{
    require_samples(cfg.n_samples);
    if (n < 1)
        throw std::invalid_argument("mc_torus_expectation: n must be >= 1");
    auto chunks = run_chunks<Moments<complex_t>>(cfg, [&](RngStream& rng, std::size_t first, std::size_t count) {
        Moments<complex_t> acc;
        std::vector<complex_t> z(n);
        for (std::size_t s = 0; s < count; ++s) {
            for (auto& zk : z)
                zk = std::polar(1.0, rng.angle());
            const double x = f(z);
            if (!std::isfinite(x))
                throw_non_finite(first + s);
            acc.add(complex_t(x, 0.0));
        }
        return acc;
    });
    return finish_estimate<double>(chunks, cfg.master_seed);
}

} // namespace pclab
