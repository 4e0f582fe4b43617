#include "divret/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "divret/error.hpp"
#include "divret/return_stats.hpp"

namespace divret {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<double> normalized(const std::vector<double>& holdings)
{
    const double total = std::accumulate(holdings.begin(), holdings.end(), 0.0);
    std::vector<double> w(holdings.size());
    for (std::size_t i = 0; i < holdings.size(); ++i) {
        w[i] = holdings[i] / total;
    }
    return w;
}

double abs_difference(const std::vector<double>& a, const std::vector<double>& b)
{
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += std::abs(a[i] - b[i]);
    }
    return acc;
}

bool is_index_mode(PolicyMode mode)
{
    return mode == PolicyMode::IndexRebalanced || mode == PolicyMode::IndexBuyIn;
}

void check_policy(const ReturnMatrix& matrix, const PortfolioPolicy& policy)
{
    if (is_index_mode(policy.mode)) {
        const auto& schedule = matrix.availability();
        if (!schedule) {
            throw ValidationError(std::string(to_string(policy.mode)) +
                                  " requires an availability schedule on the return matrix");
        }
        bool any_at_start = false;
        for (std::size_t first : *schedule) {
            any_at_start = any_at_start || first == 0;
        }
        if (!any_at_start) {
            throw ValidationError("index modes need at least one asset available at period 0");
        }
        return;
    }
    validate_weights(policy.target_weights, matrix.assets());
    for (std::size_t i = 0; i < matrix.assets(); ++i) {
        if (matrix.first_period(i) != 0) {
            throw ValidationError("asset '" + matrix.asset_labels()[i] +
                                  "' is not available from period 0; use an index policy");
        }
    }
}

std::vector<double> equal_over_active(const std::vector<bool>& active)
{
    const auto n = static_cast<double>(std::count(active.begin(), active.end(), true));
    std::vector<double> w(active.size(), 0.0);
    for (std::size_t i = 0; i < active.size(); ++i) {
        if (active[i]) {
            w[i] = 1.0 / n;
        }
    }
    return w;
}

}  // namespace

ReturnMatrix::ReturnMatrix(std::size_t periods, std::size_t assets, std::vector<double> returns,
                           std::vector<std::string> asset_labels,
                           std::optional<std::vector<std::size_t>> availability,
                           std::vector<std::string> period_labels)
    : periods_(periods),
      assets_(assets),
      returns_(std::move(returns)),
      labels_(std::move(asset_labels)),
      availability_(std::move(availability)),
      period_labels_(std::move(period_labels))
{
    if (periods_ == 0 || assets_ == 0) {
        throw ValidationError("return matrix needs at least one period and one asset");
    }
    if (returns_.size() != periods_ * assets_) {
        throw ValidationError("return matrix: expected " + std::to_string(periods_ * assets_) +
                              " entries, got " + std::to_string(returns_.size()));
    }
    if (labels_.empty()) {
        for (std::size_t i = 0; i < assets_; ++i) {
            labels_.push_back("asset" + std::to_string(i + 1));
        }
    } else if (labels_.size() != assets_) {
        throw ValidationError("return matrix: asset label count does not match asset count");
    }
    if (!period_labels_.empty() && period_labels_.size() != periods_) {
        throw ValidationError("return matrix: period label count does not match period count");
    }
    if (availability_) {
        if (availability_->size() != assets_) {
            throw ValidationError("return matrix: availability schedule size does not match asset count");
        }
        for (std::size_t first : *availability_) {
            if (first >= periods_) {
                throw ValidationError("return matrix: asset becomes available after the last period");
            }
        }
    }
    for (std::size_t t = 0; t < periods_; ++t) {
        for (std::size_t i = 0; i < assets_; ++i) {
            double& r = returns_[t * assets_ + i];
            if (t < first_period(i)) {
                r = kMissing;
                continue;
            }
            if (!std::isfinite(r) || r <= -1.0) {
                throw ValidationError("return matrix: entry (period " + std::to_string(t) + ", asset " +
                                      labels_[i] + ") must be finite and above -100%");
            }
        }
    }
}

ReturnMatrix ReturnMatrix::from_columns(const std::vector<std::vector<double>>& columns,
                                        std::vector<std::string> asset_labels)
{
    if (columns.empty() || columns.front().empty()) {
        throw ValidationError("return matrix needs at least one period and one asset");
    }
    const std::size_t periods = columns.front().size();
    std::vector<double> flat(periods * columns.size());
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].size() != periods) {
            throw ValidationError("return matrix: columns have different lengths");
        }
        for (std::size_t t = 0; t < periods; ++t) {
            flat[t * columns.size() + i] = columns[i][t];
        }
    }
    return ReturnMatrix(periods, columns.size(), std::move(flat), std::move(asset_labels));
}

std::size_t ReturnMatrix::first_period(std::size_t i) const
{
    return availability_ ? (*availability_)[i] : 0;
}

std::vector<double> ReturnMatrix::column(std::size_t i) const
{
    std::vector<double> out;
    out.reserve(periods_ - first_period(i));
    for (std::size_t t = first_period(i); t < periods_; ++t) {
        out.push_back((*this)(t, i));
    }
    return out;
}

std::string_view to_string(PolicyMode mode) noexcept
{
    switch (mode) {
        case PolicyMode::Rebalanced: return "rebalanced";
        case PolicyMode::BuyAndHold: return "buyhold";
        case PolicyMode::IndexRebalanced: return "index-rebalanced";
        case PolicyMode::IndexBuyIn: return "index-buyin";
    }
    return "unknown";
}

PolicyMode parse_policy_mode(std::string_view name)
{
    for (auto mode : {PolicyMode::Rebalanced, PolicyMode::BuyAndHold, PolicyMode::IndexRebalanced,
                      PolicyMode::IndexBuyIn}) {
        if (name == to_string(mode)) {
            return mode;
        }
    }
    throw ValidationError("unknown policy '" + std::string(name) + "'");
}

void validate_weights(std::span<const double> weights, std::size_t expected)
{
    if (weights.size() != expected) {
        throw ValidationError("expected " + std::to_string(expected) + " weights, got " +
                              std::to_string(weights.size()));
    }
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ValidationError("weights must be finite and non-negative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTolerance) {
        throw ValidationError("weights must sum to 1");
    }
}

SimulationResult simulate(const ReturnMatrix& matrix, const PortfolioPolicy& policy)
{
    check_policy(matrix, policy);

    const std::size_t periods = matrix.periods();
    const std::size_t n = matrix.assets();

    std::vector<bool> active(n, true);
    if (is_index_mode(policy.mode)) {
        for (std::size_t i = 0; i < n; ++i) {
            active[i] = matrix.first_period(i) == 0;
        }
    }

    // Holdings are proportional to dollars per asset; weights are holdings
    // over their sum. Buy-and-hold holdings are f_i * prod(1 + r_i) exactly.
    std::vector<double> weights = is_index_mode(policy.mode) ? equal_over_active(active)
                                                             : policy.target_weights;
    std::vector<double> holdings = weights;

    SimulationResult result;
    result.portfolio_returns.reserve(periods);
    result.wealth_path.reserve(periods + 1);
    result.weight_path.reserve(periods + 1);
    result.turnover.reserve(periods);
    result.wealth_path.push_back(1.0);
    result.weight_path.push_back(weights);

    for (std::size_t t = 0; t < periods; ++t) {
        double portfolio_return = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (active[i]) {
                portfolio_return += weights[i] * matrix(t, i);
            }
        }
        result.portfolio_returns.push_back(portfolio_return);
        result.wealth_path.push_back(result.wealth_path.back() * (1.0 + portfolio_return));

        for (std::size_t i = 0; i < n; ++i) {
            if (active[i]) {
                holdings[i] *= 1.0 + matrix(t, i);
            }
        }
        const std::vector<double> drifted = normalized(holdings);

        switch (policy.mode) {
            case PolicyMode::Rebalanced:
                weights = policy.target_weights;
                holdings = weights;
                break;
            case PolicyMode::BuyAndHold:
                weights = drifted;
                break;
            case PolicyMode::IndexRebalanced:
                for (std::size_t i = 0; i < n; ++i) {
                    active[i] = active[i] || matrix.first_period(i) == t + 1;
                }
                weights = equal_over_active(active);
                holdings = weights;
                break;
            case PolicyMode::IndexBuyIn: {
                std::size_t newcomers = 0;
                std::size_t count = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    newcomers += matrix.first_period(i) == t + 1 ? 1 : 0;
                    count += active[i] ? 1 : 0;
                }
                if (newcomers > 0) {
                    // k newcomers out of N: sell k/N pro-rata, each newcomer gets 1/N.
                    const double total = std::accumulate(holdings.begin(), holdings.end(), 0.0);
                    const auto size_after = static_cast<double>(count + newcomers);
                    const double keep = 1.0 - static_cast<double>(newcomers) / size_after;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (active[i]) {
                            holdings[i] *= keep;
                        } else if (matrix.first_period(i) == t + 1) {
                            holdings[i] = total / size_after;
                            active[i] = true;
                        }
                    }
                }
                weights = normalized(holdings);
                break;
            }
        }
        result.turnover.push_back(abs_difference(weights, drifted));
        result.weight_path.push_back(weights);
    }
    return result;
}

std::vector<std::vector<double>> weight_trajectory(const ReturnMatrix& matrix,
                                                   const PortfolioPolicy& policy)
{
    return simulate(matrix, policy).weight_path;
}

double buy_and_hold_geometric(std::span<const double> initial_weights,
                              std::span<const double> asset_geometric_means, std::size_t periods)
{
    validate_weights(initial_weights, asset_geometric_means.size());
    if (periods == 0) {
        throw ValidationError("buy_and_hold_geometric: period count must be at least 1");
    }
    const auto horizon = static_cast<double>(periods);
    double terminal = 0.0;
    for (std::size_t i = 0; i < initial_weights.size(); ++i) {
        const double g = asset_geometric_means[i];
        if (!(g > -1.0)) {
            throw ValidationError("buy_and_hold_geometric: geometric means must exceed -100%");
        }
        terminal += initial_weights[i] * std::pow(1.0 + g, horizon);
    }
    return std::pow(terminal, 1.0 / horizon) - 1.0;
}

double linearized_buy_and_hold(std::span<const double> initial_weights,
                               std::span<const double> asset_geometric_means)
{
    validate_weights(initial_weights, asset_geometric_means.size());
    return std::inner_product(initial_weights.begin(), initial_weights.end(),
                              asset_geometric_means.begin(), 0.0);
}

}  // namespace divret
