#include "divret/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "divret/error.hpp"

namespace divret {

const char* const kAverageCorrelationCaveat =
    "untrusted: the average-variance/average-correlation shortcut does not follow from the "
    "correlation form and wrongly gives zero for perfectly correlated assets with unequal "
    "volatilities";

namespace {

constexpr double kMatrixTolerance = 1e-12;

void require_same_size(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw ValidationError(std::string(what) + ": input length mismatch");
    }
}

double weighted_sum(std::span<const double> weights, std::span<const double> values)
{
    return std::inner_product(weights.begin(), weights.end(), values.begin(), 0.0);
}

}  // namespace

double strategic_return(std::span<const double> weights, std::span<const double> asset_geometric_means)
{
    validate_weights(weights, asset_geometric_means.size());
    return weighted_sum(weights, asset_geometric_means);
}

double diversification_return_exact(const ReturnMatrix& matrix, std::span<const double> weights)
{
    const PortfolioPolicy policy{PolicyMode::Rebalanced, {weights.begin(), weights.end()}};
    const SimulationResult sim = simulate(matrix, policy);
    std::vector<double> asset_g(matrix.assets());
    for (std::size_t i = 0; i < matrix.assets(); ++i) {
        asset_g[i] = geometric_mean(matrix.column(i));
    }
    return geometric_mean(sim.portfolio_returns) - strategic_return(weights, asset_g);
}

double dr_covariance_approx(std::span<const double> weights, std::span<const double> variances,
                            std::span<const double> covariances_with_portfolio)
{
    require_same_size(weights.size(), variances.size(), "dr_covariance_approx");
    require_same_size(weights.size(), covariances_with_portfolio.size(), "dr_covariance_approx");
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i] * (variances[i] - covariances_with_portfolio[i]);
    }
    return 0.5 * acc;
}

double dr_variance_reduction_approx(std::span<const double> weights, std::span<const double> variances,
                                    double portfolio_variance)
{
    require_same_size(weights.size(), variances.size(), "dr_variance_reduction_approx");
    return 0.5 * (weighted_sum(weights, variances) - portfolio_variance);
}

double dr_correlation_approx(std::span<const double> weights, std::span<const double> std_devs,
                             const SquareMatrix& correlations)
{
    const std::size_t n = weights.size();
    require_same_size(n, std_devs.size(), "dr_correlation_approx");
    require_same_size(n, correlations.size(), "dr_correlation_approx");
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(correlations(i, i) - 1.0) > kMatrixTolerance) {
            throw ValidationError("correlation matrix must have a unit diagonal");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(correlations(i, j) - correlations(j, i)) > kMatrixTolerance) {
                throw ValidationError("correlation matrix must be symmetric");
            }
        }
    }
    double weighted_var = 0.0;
    double portfolio_var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        weighted_var += weights[i] * std_devs[i] * std_devs[i];
        for (std::size_t j = 0; j < n; ++j) {
            portfolio_var += weights[i] * weights[j] * correlations(i, j) * std_devs[i] * std_devs[j];
        }
    }
    return 0.5 * (weighted_var - portfolio_var);
}

double dr_perfectly_correlated(std::span<const double> weights, std::span<const double> std_devs)
{
    require_same_size(weights.size(), std_devs.size(), "dr_perfectly_correlated");
    double weighted_var = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        weighted_var += weights[i] * std_devs[i] * std_devs[i];
    }
    const double weighted_sd = weighted_sum(weights, std_devs);
    return 0.5 * (weighted_var - weighted_sd * weighted_sd);
}

UntrustedEstimate dr_erb_harvey(std::size_t n_assets, double average_variance, double average_correlation)
{
    if (n_assets < 2) {
        throw ValidationError("dr_erb_harvey: needs at least two assets");
    }
    const double n = static_cast<double>(n_assets);
    return {0.5 * (1.0 - 1.0 / n) * average_variance * (1.0 - average_correlation), true,
            kAverageCorrelationCaveat};
}

DecompositionReport decompose(const ReturnMatrix& matrix, std::span<const double> weights)
{
    const std::size_t n = matrix.assets();
    DecompositionReport report;
    report.policy = {PolicyMode::Rebalanced, {weights.begin(), weights.end()}};

    const SimulationResult sim = simulate(matrix, report.policy);
    report.portfolio = summarize(sim.portfolio_returns);

    std::vector<std::vector<double>> columns(n);
    std::vector<double> asset_g(n);
    std::vector<double> variances(n);
    std::vector<double> std_devs(n);
    std::vector<double> cov_with_portfolio(n);
    for (std::size_t i = 0; i < n; ++i) {
        columns[i] = matrix.column(i);
        AssetBreakdown asset;
        asset.label = matrix.asset_labels()[i];
        asset.weight = weights[i];
        asset.stats = summarize(columns[i]);
        asset.covariance_with_portfolio = covariance(columns[i], sim.portfolio_returns);
        asset_g[i] = asset.stats.geometric_mean;
        variances[i] = asset.stats.variance;
        std_devs[i] = asset.stats.std_dev;
        cov_with_portfolio[i] = asset.covariance_with_portfolio;
        report.assets.push_back(std::move(asset));
    }

    report.strategic_return = strategic_return(weights, asset_g);
    report.diversification_return_exact = report.portfolio.geometric_mean - report.strategic_return;

    // Zero-volatility assets get rho = 0 off the diagonal; their terms carry
    // a factor s_i = 0 either way.
    SquareMatrix rho = SquareMatrix::identity(n);
    double rho_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double r = 0.0;
            if (variances[i] > 0.0 && variances[j] > 0.0) {
                r = covariance(columns[i], columns[j]) / (std_devs[i] * std_devs[j]);
            }
            rho(i, j) = r;
            rho(j, i) = r;
            rho_sum += 2.0 * r;
        }
    }

    report.dr_covariance_approx = dr_covariance_approx(weights, variances, cov_with_portfolio);
    report.dr_variance_reduction_approx =
        dr_variance_reduction_approx(weights, variances, report.portfolio.variance);
    report.dr_correlation_approx = dr_correlation_approx(weights, std_devs, rho);
    const double approx[] = {report.dr_covariance_approx, report.dr_variance_reduction_approx,
                             report.dr_correlation_approx};
    report.approximation_discrepancy = *std::max_element(std::begin(approx), std::end(approx)) -
                                       *std::min_element(std::begin(approx), std::end(approx));

    report.average_variance = std::accumulate(variances.begin(), variances.end(), 0.0) /
                              static_cast<double>(n);
    if (n >= 2) {
        report.average_correlation = rho_sum / static_cast<double>(n * (n - 1));
        report.dr_erb_harvey = dr_erb_harvey(n, report.average_variance, report.average_correlation);
    } else {
        report.average_correlation = 1.0;
        report.dr_erb_harvey = {0.0, true, kAverageCorrelationCaveat};
    }
    return report;
}

DecompositionReport decompose(const ReturnMatrix& matrix, const PortfolioPolicy& policy)
{
    if (policy.mode != PolicyMode::Rebalanced) {
        throw ValidationError(
            "diversification return is only defined for a rebalanced portfolio; for '" +
            std::string(to_string(policy.mode)) +
            "' use buy_and_hold_geometric (CLI: buyhold-closed-form) instead");
    }
    return decompose(matrix, policy.target_weights);
}

}  // namespace divret
