#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace divret {

/**
 * @brief Ordered simple returns of one asset over consecutive holding periods.
 *
 * Values are decimal fractions (0.25 is +25%). Every value must be finite and
 * strictly greater than -1, and the series must hold at least one period.
 */
class ReturnSeries {
public:
    explicit ReturnSeries(std::vector<double> values, std::string label = {});

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
    std::string label_;
};

/// Summary statistics of a return series. Variance is the population variance.
struct SeriesStats {
    double arithmetic_mean = 0.0;
    double geometric_mean = 0.0;
    double variance = 0.0;
    double std_dev = 0.0;
    double wealth_ratio = 1.0;  ///< final value / initial value
    std::size_t periods = 0;

    bool operator==(const SeriesStats&) const = default;
};

// All functions below take decimal returns and throw ValidationError on
// empty input. Statistics are population statistics (divide by T).

[[nodiscard]] double arithmetic_mean(std::span<const double> returns);

/// (prod(1 + r_t))^(1/T) - 1. Throws when any return is <= -1 ("total loss").
[[nodiscard]] double geometric_mean(std::span<const double> returns);

/// prod(1 + r_t).
[[nodiscard]] double wealth_ratio(std::span<const double> returns);

[[nodiscard]] double variance(std::span<const double> returns);
[[nodiscard]] double std_dev(std::span<const double> returns);

/// Population covariance. covariance(a, a) is bit-identical to variance(a).
[[nodiscard]] double covariance(std::span<const double> a, std::span<const double> b);

/// Pearson correlation; throws "undefined correlation" if either input has
/// zero variance.
[[nodiscard]] double correlation(std::span<const double> a, std::span<const double> b);

[[nodiscard]] SeriesStats summarize(std::span<const double> returns);

/// Volatility-drag approximation g ~ mean - variance / 2.
[[nodiscard]] double approx_geometric_from_arithmetic(double mean, double variance) noexcept;

/**
 * @brief Two-term expansion of the average compound (log) return about the
 * arithmetic mean: ln(1 + mean) - variance / (2 (1 + mean)^2).
 *
 * exp(C) - 1 agrees with approx_geometric_from_arithmetic() up to terms of
 * third order in the return scale. Requires mean > -1.
 */
[[nodiscard]] double compound_return_expansion(double mean, double variance);

}  // namespace divret
