#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "divret/matrix.hpp"
#include "divret/portfolio.hpp"
#include "divret/return_stats.hpp"

namespace divret {

/// Per-asset statistics plus the asset's covariance with the rebalanced portfolio.
struct AssetBreakdown {
    std::string label;
    double weight = 0.0;
    SeriesStats stats;
    double covariance_with_portfolio = 0.0;

    bool operator==(const AssetBreakdown&) const = default;
};

/// Result of a formula that does not follow from the others and is kept
/// only for comparison. Always flagged untrusted.
struct UntrustedEstimate {
    double value = 0.0;
    bool untrusted = true;
    std::string caveat;

    bool operator==(const UntrustedEstimate&) const = default;
};

extern const char* const kAverageCorrelationCaveat;

struct DecompositionReport {
    std::vector<AssetBreakdown> assets;
    SeriesStats portfolio;
    double strategic_return = 0.0;
    /// portfolio.geometric_mean - strategic_return, from a full rebalanced simulation.
    double diversification_return_exact = 0.0;
    double dr_covariance_approx = 0.0;
    double dr_variance_reduction_approx = 0.0;
    double dr_correlation_approx = 0.0;
    /// Largest pairwise gap among the three approximation routes above.
    double approximation_discrepancy = 0.0;
    double average_variance = 0.0;
    double average_correlation = 0.0;
    UntrustedEstimate dr_erb_harvey;
    PortfolioPolicy policy;

    bool operator==(const DecompositionReport&) const = default;
};

/// Weighted average of asset geometric means, sum_i w_i g_i.
[[nodiscard]] double strategic_return(std::span<const double> weights,
                                      std::span<const double> asset_geometric_means);

/// Geometric mean of the rebalanced portfolio minus its strategic return.
[[nodiscard]] double diversification_return_exact(const ReturnMatrix& matrix,
                                                  std::span<const double> weights);

/// 1/2 sum_i w_i (var_i - cov_ip).
[[nodiscard]] double dr_covariance_approx(std::span<const double> weights,
                                          std::span<const double> variances,
                                          std::span<const double> covariances_with_portfolio);

/// 1/2 (sum_i w_i var_i - var_p).
[[nodiscard]] double dr_variance_reduction_approx(std::span<const double> weights,
                                                  std::span<const double> variances,
                                                  double portfolio_variance);

/// 1/2 (sum_i w_i s_i^2 - sum_ij w_i w_j rho_ij s_i s_j). The correlation
/// matrix must be symmetric with a unit diagonal.
[[nodiscard]] double dr_correlation_approx(std::span<const double> weights,
                                           std::span<const double> std_devs,
                                           const SquareMatrix& correlations);

/// Correlation form with every rho_ij = 1: 1/2 (sum w_i s_i^2 - (sum w_i s_i)^2).
[[nodiscard]] double dr_perfectly_correlated(std::span<const double> weights,
                                             std::span<const double> std_devs);

/// 1/2 (1 - 1/N) avg_var (1 - avg_rho), evaluated literally and flagged.
[[nodiscard]] UntrustedEstimate dr_erb_harvey(std::size_t n_assets, double average_variance,
                                              double average_correlation);

/**
 * @brief Full decomposition of a rebalanced portfolio.
 *
 * Simulates the rebalanced portfolio, computes the exact diversification
 * return, and evaluates every approximation from population statistics of
 * the realized returns. Each approximation is computed through its own
 * formula path; their mutual gap is recorded in approximation_discrepancy.
 */
[[nodiscard]] DecompositionReport decompose(const ReturnMatrix& matrix,
                                            std::span<const double> weights);

/// As above; throws ValidationError for anything but a rebalanced policy.
[[nodiscard]] DecompositionReport decompose(const ReturnMatrix& matrix,
                                            const PortfolioPolicy& policy);

}  // namespace divret
