#include "divret/return_stats.hpp"

#include <cmath>
#include <numeric>

#include "divret/error.hpp"

namespace divret {

namespace {

void require_non_empty(std::span<const double> returns)
{
    if (returns.empty()) {
        throw ValidationError("empty series");
    }
}

void require_no_total_loss(std::span<const double> returns)
{
    for (double r : returns) {
        if (!std::isfinite(r)) {
            throw ValidationError("non-finite return");
        }
        if (r <= -1.0) {
            throw ValidationError("total loss: return at or below -100%");
        }
    }
}

double sum_log_gross(std::span<const double> returns)
{
    double acc = 0.0;
    for (double r : returns) {
        acc += std::log1p(r);
    }
    return acc;
}

}  // namespace

ReturnSeries::ReturnSeries(std::vector<double> values, std::string label)
    : values_(std::move(values)), label_(std::move(label))
{
    require_non_empty(values_);
    require_no_total_loss(values_);
}

double arithmetic_mean(std::span<const double> returns)
{
    require_non_empty(returns);
    return std::accumulate(returns.begin(), returns.end(), 0.0) /
           static_cast<double>(returns.size());
}

double geometric_mean(std::span<const double> returns)
{
    require_non_empty(returns);
    require_no_total_loss(returns);
    return std::expm1(sum_log_gross(returns) / static_cast<double>(returns.size()));
}

double wealth_ratio(std::span<const double> returns)
{
    require_non_empty(returns);
    require_no_total_loss(returns);
    double w = 1.0;
    for (double r : returns) {
        w *= 1.0 + r;
    }
    return w;
}

double covariance(std::span<const double> a, std::span<const double> b)
{
    require_non_empty(a);
    require_non_empty(b);
    if (a.size() != b.size()) {
        throw ValidationError("covariance: series length mismatch");
    }
    const double ma = arithmetic_mean(a);
    const double mb = arithmetic_mean(b);
    double acc = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        acc += (a[t] - ma) * (b[t] - mb);
    }
    return acc / static_cast<double>(a.size());
}

double variance(std::span<const double> returns)
{
    return covariance(returns, returns);
}

double std_dev(std::span<const double> returns)
{
    return std::sqrt(variance(returns));
}

double correlation(std::span<const double> a, std::span<const double> b)
{
    const double va = variance(a);
    const double vb = variance(b);
    if (va == 0.0 || vb == 0.0) {
        throw ValidationError("undefined correlation: zero variance input");
    }
    return covariance(a, b) / std::sqrt(va * vb);
}

SeriesStats summarize(std::span<const double> returns)
{
    SeriesStats s;
    s.arithmetic_mean = arithmetic_mean(returns);
    s.geometric_mean = geometric_mean(returns);
    s.variance = variance(returns);
    s.std_dev = std::sqrt(s.variance);
    s.wealth_ratio = wealth_ratio(returns);
    s.periods = returns.size();
    return s;
}

double approx_geometric_from_arithmetic(double mean, double variance) noexcept
{
    return mean - 0.5 * variance;
}

double compound_return_expansion(double mean, double variance)
{
    if (!(mean > -1.0)) {
        throw ValidationError("compound_return_expansion: mean return must exceed -100%");
    }
    const double gross = 1.0 + mean;
    return std::log1p(mean) - 0.5 * variance / (gross * gross);
}

}  // namespace divret
