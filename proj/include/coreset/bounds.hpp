#pragma once

#include "coreset/frank_wolfe.hpp"

#include <string>

namespace coreset {

/// Which exponent the Frank-Wolfe rate uses: the theorem display carries
/// beta^(-2(m-1)), the appendix derivation beta^(-2(m-2)). The appendix form
/// is the looser of the two and the default.
enum class RateVariant { appendix, theorem_text };

std::string to_string(RateVariant variant);
RateVariant rate_variant_from_string(const std::string& name);

/// Geometric constants of the rate bound, per hull vertex plus their maxima.
struct BoundConstants {
    Eigen::VectorXd sigma_i;  // sum_n p_n ||u_n||
    Eigen::VectorXd eta_i;    // sqrt(1 - ||L^(i)||^2 / sigma^2)
    Eigen::VectorXd beta_i;   // sqrt(1 - r^2 / (sigma^2 eta_bar^2)), clamped to [0,1]
    Eigen::VectorXd radius_i; // boundary distance r^(i)
    double eta_bar = 0.0;     // max_{n,m} ||u_n/||u_n|| - u_m/||u_m||||
    double sigma_hat = 0.0;
    double eta_hat = 0.0;
    double beta_hat = 0.0;
};

/// Computes all rate constants in projected space. Throws
/// DegenerateInstanceError when every row has zero norm.
BoundConstants compute_constants(const ProjectionSpace& space, const ConvexHull& hull);

/// Frank-Wolfe error bound after m iterations (m = 1 is the initialization
/// bound sigma_hat * eta_hat). Non-increasing in m.
double theorem1_rate(const BoundConstants& constants, Eigen::Index m,
                     RateVariant variant = RateVariant::appendix);

struct BoundConfig {
    double xi = 0.5;     // sub-Gaussian parameter; 1/2 covers zero-one losses
    double delta = 0.05; // confidence level
    RateVariant variant = RateVariant::appendix;
    std::uint64_t seed = 0; // echoed into the report for auditability
};

/// Everything a bound evaluation produces: the two upper-bound terms, the
/// directly computable and as-printed second-term variants, the Monte-Carlo
/// risk estimate they are compared against, and the constants behind them.
struct BoundReport {
    BoundConstants constants;
    double theorem1_rate_value = 0.0;
    double epsilon_proj = 0.0; // sqrt((2 xi^2 / J) log(2 N^2 / delta))
    double bound_I = 0.0;
    double bound_II = 0.0;      // headline: the directly computable form
    double bound_II_eq20 = 0.0; // sqrt(||u(w)-u(p)||^2 + ||w-p||_1^2 eps)
    double bound_II_eq21 = 0.0; // sqrt(rate + ||w-p||_1^2 eps), rate as printed
    double expected_risk_estimate = 0.0;
    Eigen::Index coreset_size = 0;
    Eigen::Index m = 0;
    Eigen::Index n_data = 0;
    Eigen::Index n_samples = 0;
    BoundConfig config;
};

/// Evaluates the Theorem 2 bounds for a completed Algorithm 1 run.
/// Throws ConfigError for delta outside (0,1) or xi <= 0.
BoundReport theorem2_bounds(const ProjectionSpace& space, const ConvexHull& hull,
                            const CoresetSolution& solution, const BoundConfig& config);

struct CheckRecord {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double limit = 0.0;
};

struct VerificationResult {
    std::vector<CheckRecord> checks;
    bool all_passed() const;
};

/// Aggregates the guarantees into one pass/fail record: risk within the
/// bound, the rate certificate along the trace, objective monotonicity, and
/// polytope feasibility. Failures are data, not exceptions.
VerificationResult verify_bound(const ProjectionSpace& space, const ConvexHull& hull,
                                const CoresetSolution& solution, const BoundReport& report);

} // namespace coreset
