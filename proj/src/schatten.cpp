#include "pclab/schatten.hpp"

#include <numeric>

namespace pclab::schatten {

double identity_tolerance(const TraceClassMatrix& a)
{
    return 1e-10 * std::max(1.0, static_cast<double>(a.size()) * a.matrix().max_abs());
}

double trace_norm(const TraceClassMatrix& a)
{
    const SvdResult s = svd(a.matrix());
    return std::accumulate(s.sigma.begin(), s.sigma.end(), 0.0);
}

DualityMaximizer duality_maximizer(const TraceClassMatrix& a)
{
    const SvdResult s = svd(a.matrix());
    UnitaryMatrix u = s.right * s.left.adjoint();
    const double value = std::abs((a.matrix().mat() * u.mat()).trace());
    return DualityMaximizer{std::move(u), value};
}

IsometryReport embedding_isometry_check(const TraceClassMatrix& a, const McConfig& cfg)
{
    if (cfg.n_samples < 1000)
        throw std::invalid_argument("embedding_isometry_check: needs at least 1000 samples, got "
                                    + std::to_string(cfg.n_samples));
    const Eigen::Index n = a.size();
    const DenseMatrix m = a.matrix().mat();

    auto chunks = run_chunks<double>(cfg, [&](RngStream& rng, std::size_t, std::size_t count) {
        double best = 0.0;
        for (std::size_t s = 0; s < count; ++s) {
            const UnitaryMatrix u = sample_haar_unitary(n, rng);
            best = std::max(best, std::abs((m * u.mat()).trace()));
        }
        return best;
    });

    IsometryReport r;
    r.norm = trace_norm(a);
    r.sampled_sup = chunks.empty() ? 0.0 : *std::max_element(chunks.begin(), chunks.end());
    r.maximizer_value = duality_maximizer(a).value;
    r.attained = std::abs(r.maximizer_value - r.norm) <= identity_tolerance(a);
    return r;
}

} // namespace pclab::schatten
