#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pclab/haar.hpp"

namespace pclab::constants {

/// The spaces whose projection constant the library can evaluate.
enum class Space {
    l2,               // l_2^n, closed form
    l1,               // l_1^n, Bessel integral
    linf_op,          // L(l_2^n) = S_inf(n), closed form
    hilbert_schmidt,  // S_2(n), closed form
    trace_class,      // S_1(n), n E|tr U|
    sum_10_01,        // h_(1,0) + h_(0,1), 2n E|Re tr U|
    torus_l1_mc,      // l_1^n, E|sum z_k| on the torus
};

std::string_view to_string(Space s);
/// Accepts the canonical names and the short CLI tags
/// (s1, hs, linf, sum, torus). Throws std::invalid_argument.
Space parse_space(std::string_view tag);
bool is_monte_carlo(Space s);

struct LambdaReport {
    Space space = Space::l2;
    int n = 1;
    double value = 0.0;
    /// Monte Carlo rows only (already scaled like `value`).
    std::optional<double> stderr_;
    std::optional<std::size_t> n_samples;
    std::optional<std::uint64_t> master_seed;
    /// Absolute numerical tolerance of a deterministic value (rounding or
    /// quadrature); 0 for Monte Carlo rows.
    double tolerance = 0.0;

    std::optional<double> lower_bound;
    std::optional<double> upper_bound;
    /// limit of value / normalizer as n -> infinity
    std::optional<double> limit_value;
    std::optional<double> limit_gap;
    double normalizer = 1.0;

    /// E|tr U|^2 on the same Haar draws (should be 1); unitary MC rows only.
    std::optional<RealEstimate> second_moment;

    /// lower - slack <= value <= upper + slack with slack = max(sigmas *
    /// stderr, tolerance).
    bool within_bounds(double sigmas = 4.0) const;
    /// |E|tr|^2 - 1| <= sigmas * stderr (true when no calibration was run).
    bool second_moment_ok(double sigmas = 4.0) const;
};

constexpr double kDefaultQuadTol = 1e-9;

double lambda_l2(int n);
double lambda_linf_op(int n);
double lambda_hilbert_schmidt(int n);

struct QuadratureResult {
    double value;
    double error_estimate;
    double truncation;   // upper integration limit T
};

/// int_0^inf (1 - J0(t)^n) / t^2 dt with J0 the standard Bessel function.
/// Throws NumericalError if the achieved error exceeds quad_tol.
QuadratureResult lambda_l1_quadrature(int n, double quad_tol = kDefaultQuadTol);
inline double lambda_l1(int n, double quad_tol = kDefaultQuadTol) { return lambda_l1_quadrature(n, quad_tol).value; }

/// (1 - J0(t)^n) / t^2, evaluated without cancellation near 0.
double l1_integrand(double t, int n);

/// Stream offset used for dimension n, so a row's draws do not depend on
/// which other rows are computed.
std::uint64_t stream_offset_for(int n);

LambdaReport lambda_s1_mc(int n, const McConfig& cfg);
LambdaReport lambda_sum_mc(int n, const McConfig& cfg);
LambdaReport torus_l1_mc(int n, const McConfig& cfg);

/// Closed-form/quadrature row for the deterministic spaces.
LambdaReport closed_form_report(Space space, int n, double quad_tol = kDefaultQuadTol);

/// One report per n (n_list nonempty, strictly ascending, entries >= 1).
std::vector<LambdaReport> convergence_table(Space space, const std::vector<int>& n_list, const McConfig& cfg,
                                            double quad_tol = kDefaultQuadTol);

} // namespace pclab::constants
