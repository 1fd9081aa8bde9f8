#pragma once

#include <string>
#include <variant>

#include "pclab/haar.hpp"

namespace pclab::weingarten {

/// E[u_ij conj(u_kl)], indices 1-based.
struct SecondOrder {
    int i, j, k, l;
};

/// E|tr(A U)|^2.
struct TraceForm {
    ComplexMatrix a;
};

/// E[u11 u22 conj(u12 u21)]; needs n >= 2.
struct FourthExample {};

/// <f, g>_{L2} for f = u11^p conj(u22)^q and g = u11^p' conj(u22)^q', two
/// harmonics of different bidegree but equal total degree. Needs n >= 2.
struct OttoExample {
    int p, q, p_prime, q_prime;
};

using MomentKind = std::variant<SecondOrder, TraceForm, FourthExample, OttoExample>;

struct MomentSpec {
    MomentKind kind;
    int n;
};

/// Throws std::invalid_argument if the indices/dimension are out of range.
void validate_spec(const MomentSpec& spec);

/// One-line label, e.g. "second_order(1,1,1,1)".
std::string describe(const MomentSpec& spec);

complex_t moment2_exact(int n, int i, int j, int k, int l);
double trace_form_exact(const ComplexMatrix& a);
double fourth_moment_exact(int n);

/// Closed-form value of the Haar integral described by `spec`.
complex_t exact_value(const MomentSpec& spec);
/// The integrand U -> ... whose Haar mean is exact_value(spec).
ComplexObservable integrand(const MomentSpec& spec);

struct MomentReport {
    complex_t exact;
    ComplexEstimate estimate;
    /// |mean - exact| / stderr; 0 when both numerator and stderr vanish.
    double sigmas_away;
    bool passed(double sigmas = 4.0) const;
};

/// Monte Carlo check of exact_value(spec). n_samples >= 1000.
MomentReport validate_moment(const MomentSpec& spec, const McConfig& cfg);

} // namespace pclab::weingarten
