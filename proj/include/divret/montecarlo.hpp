#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "divret/matrix.hpp"
#include "divret/portfolio.hpp"

namespace divret {

enum class ReturnModel {
    Lognormal,  ///< ln(1+r) normal, located at ln(1+g)
    Normal,     ///< r normal with mean g + sigma^2/2
    TwoPoint,   ///< r = u or d with probability 1/2 each
};

[[nodiscard]] std::string_view to_string(ReturnModel model) noexcept;
/// Accepts lognormal, normal, twopoint.
[[nodiscard]] ReturnModel parse_return_model(std::string_view name);

struct GeneratorConfig {
    std::size_t n_assets = 1;
    std::size_t n_periods = 1;
    double target_geometric_mean = 0.0;
    double target_std_dev = 0.0;
    /// nullopt means uncorrelated assets.
    std::optional<SquareMatrix> correlation;
    ReturnModel model = ReturnModel::Lognormal;
    /// Rescale each asset's gross returns so its realized geometric mean
    /// equals the target exactly.
    bool exact_g_mode = true;
    std::uint64_t seed = 0;

    bool operator==(const GeneratorConfig&) const = default;
};

struct GeneratedReturns {
    ReturnMatrix returns;
    /// NORMAL model only: periods redrawn because some return was <= -100%.
    std::size_t resampled_draws = 0;
};

/// Log-scale s with (e^{s^2} - 1) e^{2 mu + s^2} = sigma^2, mu = ln(1 + g).
[[nodiscard]] double lognormal_log_scale(double target_geometric_mean, double target_std_dev);

struct TwoPointLevels {
    double up = 0.0;
    double down = 0.0;
};

/// u, d with (1+u)(1+d) = (1+g)^2 and (u - d) / 2 = sigma.
[[nodiscard]] TwoPointLevels two_point_levels(double target_geometric_mean, double target_std_dev);

/**
 * @brief Draws a synthetic return matrix.
 *
 * Each period draws n_assets standard normals in asset order, multiplies them
 * by a square-root factor of the correlation matrix (when given) and maps
 * them through the model. The two-point model takes the sign of the variate,
 * so its correlation is a Gaussian copula, not rho itself. Identical configs
 * give bit-identical matrices.
 */
[[nodiscard]] GeneratedReturns generate_returns(const GeneratorConfig& config);

/// Seed for trial `trial_index` of a run seeded with `base_seed`
/// (splitmix64 finalizer over base_seed + (trial_index + 1) * golden gamma).
[[nodiscard]] std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) noexcept;

struct TrialDistribution {
    std::vector<double> per_trial_geometric_means;
    double mean = 0.0;
    double std_error = 0.0;  ///< sample std / sqrt(trials); 0 for one trial
    std::size_t trials = 0;
    PortfolioPolicy policy;
    /// Average over trials and assets of the realized population std dev.
    double mean_realized_std_dev = 0.0;
    std::size_t resampled_draws = 0;

    bool operator==(const TrialDistribution&) const = default;
};

/**
 * @brief Repeated equal-weight portfolio simulations on fresh synthetic data.
 *
 * Trial k generates returns with trial_seed(config.seed, k). Trials may run on
 * `threads` workers (0 picks the hardware concurrency); results are identical
 * to a sequential run.
 */
[[nodiscard]] TrialDistribution water_into_wine(const GeneratorConfig& config, std::size_t trials,
                                                PolicyMode policy_mode, unsigned threads = 0);

/// 1/2 sum_i w_i (1 - w_i) var_i, the uncorrelated-asset prediction.
[[nodiscard]] double dr_prediction_uncorrelated(std::span<const double> weights,
                                                std::span<const double> variances);

}  // namespace divret
