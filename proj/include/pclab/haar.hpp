#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pclab/matrix_kernel.hpp"
#include "pclab/rng.hpp"

namespace pclab {

constexpr std::size_t kDefaultChunkSize = 4096;

/// Monte Carlo result. `stderr_` is the sample standard deviation (n-1
/// denominator) divided by sqrt(n_samples); for complex observables the
/// deviation is taken in modulus, sqrt(sum |x - mean|^2 / (n-1)).
template <class Scalar>
struct McEstimate {
    Scalar mean{};
    double stderr_ = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t master_seed = 0;
};

using RealEstimate = McEstimate<double>;
using ComplexEstimate = McEstimate<complex_t>;

/// Raised when an observable yields NaN/Inf; the message names the sample.
class NonFiniteSample : public std::runtime_error {
public:
    NonFiniteSample(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}
    std::size_t sample_index() const { return index_; }

private:
    std::size_t index_;
};

/// Knobs of the sampling engine. Results depend on (master_seed, n_samples,
/// chunk_size, stream_offset) only; `workers` changes wall time, never bits.
struct McConfig {
    std::size_t n_samples = 100000;
    std::uint64_t master_seed = 42;
    std::size_t chunk_size = kDefaultChunkSize;
    /// Added to each chunk's stream index so independent batches (e.g. rows of
    /// a table) can share a master seed without sharing random numbers.
    std::uint64_t stream_offset = 0;
    /// 0 = default_worker_count().
    unsigned workers = 0;
};

/// PCLAB_THREADS if set to a positive integer, else hardware concurrency.
unsigned default_worker_count();

// --- samplers ---------------------------------------------------------------

ComplexMatrix sample_ginibre(Eigen::Index n, RngStream& rng);
UnitaryMatrix sample_haar_unitary(Eigen::Index n, RngStream& rng);
/// n iid uniform points of the unit circle.
std::vector<complex_t> sample_torus(std::size_t n, RngStream& rng);

// --- streaming moments --------------------------------------------------------

/// Welford/Chan running mean and sum of squared deviations. `Value` is a
/// scalar or an Eigen array; squared deviation is |x - mean|^2 entrywise.
template <class Value>
struct Moments {
    std::size_t count = 0;
    Value mean{};
    Value m2{};

    void add(const Value& x);
    void merge(const Moments& other);
};

namespace detail {

inline double abs2(complex_t z) { return std::norm(z); }
inline double abs2(double x) { return x * x; }

template <class A>
auto abs2(const Eigen::ArrayBase<A>& a) { return a.abs2(); }

template <class Value>
void zero_like(Value& target, const Value& shape)
{
    if constexpr (std::is_arithmetic_v<Value> || std::is_same_v<Value, complex_t>)
        target = Value{};
    else
        target = Value::Zero(shape.rows(), shape.cols());
}

} // namespace detail

template <class Value>
void Moments<Value>::add(const Value& x)
{
    if (count == 0) {
        detail::zero_like(mean, x);
        detail::zero_like(m2, x);
    }
    ++count;
    const Value delta = x - mean;
    mean += delta / static_cast<double>(count);
    const Value delta2 = x - mean;
    if constexpr (std::is_same_v<Value, complex_t>)
        m2 += (std::conj(delta) * delta2).real();
    else if constexpr (std::is_arithmetic_v<Value>)
        m2 += delta * delta2;
    else
        m2 += (delta.conjugate() * delta2).real().template cast<typename Value::Scalar>();
}

template <class Value>
void Moments<Value>::merge(const Moments& other)
{
    if (other.count == 0)
        return;
    if (count == 0) {
        *this = other;
        return;
    }
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(other.count);
    const double total = na + nb;
    const Value delta = other.mean - mean;
    mean += delta * (nb / total);
    if constexpr (std::is_arithmetic_v<Value> || std::is_same_v<Value, complex_t>)
        m2 += other.m2 + Value(detail::abs2(delta) * (na * nb / total));
    else
        m2 += other.m2 + (detail::abs2(delta) * (na * nb / total)).template cast<typename Value::Scalar>();
    count += other.count;
}

// --- chunked deterministic engine ---------------------------------------------

/// Splits [0, n_samples) into chunks of `chunk_size`; chunk c draws from
/// RngStream(master_seed, stream_offset + c). `body(rng, first, count)` returns
/// a per-chunk result; results come back in chunk order. An exception thrown
/// by a chunk is rethrown after all workers stop; when several chunks fail,
/// the lowest-index one wins, so error reporting is deterministic too.
template <class ChunkResult, class Body>
std::vector<ChunkResult> run_chunks(const McConfig& cfg, Body&& body)
{
    if (cfg.chunk_size == 0)
        throw std::invalid_argument("chunk_size must be positive");
    const std::size_t n_chunks = (cfg.n_samples + cfg.chunk_size - 1) / cfg.chunk_size;
    std::vector<ChunkResult> results(n_chunks);
    std::vector<std::exception_ptr> errors(n_chunks);
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t c = next++; c < n_chunks; c = next++) {
            const std::size_t first = c * cfg.chunk_size;
            const std::size_t count = std::min(cfg.chunk_size, cfg.n_samples - first);
            RngStream rng(cfg.master_seed, cfg.stream_offset + c);
            try {
                results[c] = body(rng, first, count);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };

    const unsigned requested = cfg.workers == 0 ? default_worker_count() : cfg.workers;
    const auto n_workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, requested), std::max<std::size_t>(n_chunks, 1)));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned t = 0; t < n_workers; ++t)
            pool.emplace_back(worker);
    }

    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    return results;
}

/// Reduces per-chunk moments in chunk order into an estimate.
template <class Scalar>
McEstimate<Scalar> finish_estimate(const std::vector<Moments<complex_t>>& chunks, std::uint64_t seed)
{
    Moments<complex_t> total;
    for (const auto& c : chunks)
        total.merge(c);
    McEstimate<Scalar> est;
    if constexpr (std::is_same_v<Scalar, double>)
        est.mean = total.mean.real();
    else
        est.mean = total.mean;
    est.n_samples = total.count;
    est.master_seed = seed;
    est.stderr_ = total.count > 1
        ? std::sqrt(std::max(0.0, total.m2.real()) / static_cast<double>(total.count - 1))
              / std::sqrt(static_cast<double>(total.count))
        : 0.0;
    return est;
}

// --- expectation operators ------------------------------------------------------

using RealObservable = std::function<double(const UnitaryMatrix&)>;
using ComplexObservable = std::function<complex_t(const UnitaryMatrix&)>;
using TorusObservable = std::function<double(std::span<const complex_t>)>;

/// E f(U) over Haar-distributed U in U(n). Requires n_samples >= 2.
RealEstimate mc_expectation(const RealObservable& f, Eigen::Index n, const McConfig& cfg);
ComplexEstimate mc_expectation_complex(const ComplexObservable& f, Eigen::Index n, const McConfig& cfg);

inline RealEstimate mc_expectation(const RealObservable& f, Eigen::Index n, std::size_t n_samples,
                                   std::uint64_t master_seed, std::size_t chunk_size = kDefaultChunkSize)
{
    McConfig cfg;
    cfg.n_samples = n_samples;
    cfg.master_seed = master_seed;
    cfg.chunk_size = chunk_size;
    return mc_expectation(f, n, cfg);
}

/// Several observables evaluated on the same Haar draws, one estimate each.
std::vector<ComplexEstimate> mc_expectations(std::span<const ComplexObservable> fs, Eigen::Index n,
                                             const McConfig& cfg);

/// E f(z) over n iid uniform phases z_k on the unit circle.
RealEstimate mc_torus_expectation(const TorusObservable& f, std::size_t n, const McConfig& cfg);

} // namespace pclab
