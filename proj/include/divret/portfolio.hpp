#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace divret {

/**
 * @brief T periods x N assets of simple returns, stored row-major.
 *
 * An optional availability schedule gives, per asset, the first period in
 * which it exists. Entries before that period are ignored (stored as NaN).
 * Every entry at or after an asset's first period must be finite and > -1.
 */
class ReturnMatrix {
public:
    ReturnMatrix(std::size_t periods, std::size_t assets, std::vector<double> returns,
                 std::vector<std::string> asset_labels = {},
                 std::optional<std::vector<std::size_t>> availability = std::nullopt,
                 std::vector<std::string> period_labels = {});

    /// Builds a matrix from per-asset columns of equal length.
    static ReturnMatrix from_columns(const std::vector<std::vector<double>>& columns,
                                     std::vector<std::string> asset_labels = {});

    [[nodiscard]] std::size_t periods() const noexcept { return periods_; }
    [[nodiscard]] std::size_t assets() const noexcept { return assets_; }

    [[nodiscard]] double operator()(std::size_t t, std::size_t i) const
    {
        return returns_[t * assets_ + i];
    }
    [[nodiscard]] std::span<const double> row(std::size_t t) const
    {
        return {returns_.data() + t * assets_, assets_};
    }

    /// Returns of asset i from its first available period onward.
    [[nodiscard]] std::vector<double> column(std::size_t i) const;

    [[nodiscard]] std::size_t first_period(std::size_t i) const;
    [[nodiscard]] bool available(std::size_t t, std::size_t i) const { return t >= first_period(i); }

    [[nodiscard]] const std::vector<std::string>& asset_labels() const noexcept { return labels_; }
    [[nodiscard]] const std::vector<std::string>& period_labels() const noexcept { return period_labels_; }
    [[nodiscard]] const std::optional<std::vector<std::size_t>>& availability() const noexcept
    {
        return availability_;
    }

private:
    std::size_t periods_;
    std::size_t assets_;
    std::vector<double> returns_;
    std::vector<std::string> labels_;
    std::optional<std::vector<std::size_t>> availability_;
    std::vector<std::string> period_labels_;
};

enum class PolicyMode {
    Rebalanced,       ///< reset to target weights at every period end
    BuyAndHold,       ///< initial dollars never traded
    IndexRebalanced,  ///< 1/N_t over currently available assets, every period
    IndexBuyIn,       ///< drift; a newcomer is bought with 1/N of the portfolio
};

[[nodiscard]] std::string_view to_string(PolicyMode mode) noexcept;
/// Accepts the CLI spellings: rebalanced, buyhold, index-rebalanced, index-buyin.
[[nodiscard]] PolicyMode parse_policy_mode(std::string_view name);

struct PortfolioPolicy {
    PolicyMode mode = PolicyMode::Rebalanced;
    /// Target (rebalanced) or initial (buy-and-hold) weights. Ignored by the
    /// index modes, which use equal weights over available assets.
    std::vector<double> target_weights;

    bool operator==(const PortfolioPolicy&) const = default;
};

/// Tolerance on |sum(w) - 1| accepted for weight vectors.
inline constexpr double kWeightSumTolerance = 1e-12;

/// Throws ValidationError unless w has `expected` finite, non-negative
/// entries summing to 1 within kWeightSumTolerance.
void validate_weights(std::span<const double> weights, std::size_t expected);

struct SimulationResult {
    std::vector<double> portfolio_returns;          ///< length T
    std::vector<double> wealth_path;                ///< length T+1, starts at 1
    std::vector<std::vector<double>> weight_path;   ///< (T+1) x N start-of-period weights
    std::vector<double> turnover;                   ///< length T, trades at each period end

    bool operator==(const SimulationResult&) const = default;
};

/**
 * @brief Runs the wealth recursion for one policy over a return matrix.
 *
 * Row t of weight_path holds the weights in force during period t; row T
 * holds the weights after the final period-end trade. Portfolio return in
 * period t is sum_i w_ti r_ti over assets in the portfolio. Trades are
 * frictionless and never change portfolio value.
 *
 * REBALANCED and BUY_AND_HOLD require every asset to be available from
 * period 0. Index modes require an availability schedule with at least one
 * asset available at period 0; an asset with first period a joins at the end
 * of period a-1.
 */
[[nodiscard]] SimulationResult simulate(const ReturnMatrix& matrix, const PortfolioPolicy& policy);

/// Same as simulate(matrix, policy).weight_path.
[[nodiscard]] std::vector<std::vector<double>> weight_trajectory(const ReturnMatrix& matrix,
                                                                 const PortfolioPolicy& policy);

/// Closed-form buy-and-hold geometric return: (sum_i f_i (1+g_i)^T)^(1/T) - 1.
[[nodiscard]] double buy_and_hold_geometric(std::span<const double> initial_weights,
                                            std::span<const double> asset_geometric_means,
                                            std::size_t periods);

/// First-order buy-and-hold return sum_i f_i g_i, valid when g_i T << 1.
[[nodiscard]] double linearized_buy_and_hold(std::span<const double> initial_weights,
                                             std::span<const double> asset_geometric_means);

}  // namespace divret
