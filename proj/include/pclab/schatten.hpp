#pragma once

#include "pclab/haar.hpp"

namespace pclab::schatten {

/// Element of S_1(n): any finite square matrix, normed by the sum of its
/// singular values.
class TraceClassMatrix {
public:
    explicit TraceClassMatrix(ComplexMatrix a) : a_(std::move(a)) {}
    const ComplexMatrix& matrix() const { return a_; }
    Eigen::Index size() const { return a_.size(); }

private:
    ComplexMatrix a_;
};

double trace_norm(const TraceClassMatrix& a);

struct DualityMaximizer {
    UnitaryMatrix u;
    double value;   // |tr(A U)|
};

/// With A = W diag(s) V*, U = V W* attains sup_U |tr(A U)| = sum s_k.
DualityMaximizer duality_maximizer(const TraceClassMatrix& a);

struct IsometryReport {
    double norm;           // trace norm
    double sampled_sup;    // max |tr(A U)| over the Haar sample
    double maximizer_value;
    bool attained;         // |maximizer_value - norm| within 1e-10 relative
};

/// Checks that A -> [U -> tr(A U)] is norm preserving: the SVD maximizer hits
/// the trace norm and no Haar-sampled U exceeds it. n_samples >= 1000.
IsometryReport embedding_isometry_check(const TraceClassMatrix& a, const McConfig& cfg);

/// Absolute slack for exact identities: 1e-10 scaled by n * max|A| (at least 1e-10).
double identity_tolerance(const TraceClassMatrix& a);

} // namespace pclab::schatten
