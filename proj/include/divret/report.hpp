#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "divret/decomposition.hpp"
#include "divret/montecarlo.hpp"
#include "divret/portfolio.hpp"
#include "divret/return_stats.hpp"

namespace divret {

inline constexpr const char* kToolVersion = "divret 1.0.0";

enum class ReportFormat { Table, Json };

/// Accepts "table" or "json".
[[nodiscard]] ReportFormat parse_report_format(std::string_view name);

struct Provenance {
    std::optional<std::string> input;       ///< input CSV path
    std::optional<nlohmann::json> config;   ///< generator or argument echo
    std::optional<std::uint64_t> seed;
    std::string version = kToolVersion;

    bool operator==(const Provenance&) const = default;
};

/// Top-level JSON document: {command, provenance, result}.
struct ReportDocument {
    std::string command;
    Provenance provenance;
    nlohmann::json result;

    bool operator==(const ReportDocument&) const = default;
};

// JSON mapping. Rates are decimal fractions at full double precision.
void to_json(nlohmann::json& j, const SeriesStats& s);
void from_json(const nlohmann::json& j, SeriesStats& s);
void to_json(nlohmann::json& j, const PortfolioPolicy& p);
void from_json(const nlohmann::json& j, PortfolioPolicy& p);
void to_json(nlohmann::json& j, const SimulationResult& r);
void from_json(const nlohmann::json& j, SimulationResult& r);
void to_json(nlohmann::json& j, const AssetBreakdown& a);
void from_json(const nlohmann::json& j, AssetBreakdown& a);
void to_json(nlohmann::json& j, const UntrustedEstimate& e);
void from_json(const nlohmann::json& j, UntrustedEstimate& e);
void to_json(nlohmann::json& j, const DecompositionReport& r);
void from_json(const nlohmann::json& j, DecompositionReport& r);
void to_json(nlohmann::json& j, const TrialDistribution& d);
void from_json(const nlohmann::json& j, TrialDistribution& d);
void to_json(nlohmann::json& j, const GeneratorConfig& c);
void to_json(nlohmann::json& j, const Provenance& p);
void from_json(const nlohmann::json& j, Provenance& p);
void to_json(nlohmann::json& j, const ReportDocument& d);
void from_json(const nlohmann::json& j, ReportDocument& d);

/// Percent with two decimals; negatives in parentheses, e.g. "(0.95)".
[[nodiscard]] std::string format_percent(double rate);

struct Histogram {
    std::vector<double> edges;        ///< bins + 1 edges
    std::vector<std::size_t> counts;  ///< bins counts
};

/// Equal-width bins spanning [min, max]; the max value lands in the last bin.
[[nodiscard]] Histogram make_histogram(std::span<const double> values, std::size_t bins);
/// CSV with columns bin_lower,bin_upper,count.
[[nodiscard]] std::string histogram_csv(const Histogram& h);

// Text tables in the layout of a per-asset return table with footer rows.
[[nodiscard]] std::string render_stats_table(const ReturnMatrix& matrix);
[[nodiscard]] std::string render_decomposition_table(const ReturnMatrix& matrix,
                                                     const SimulationResult& sim,
                                                     const DecompositionReport& report);
[[nodiscard]] std::string render_simulation_table(const ReturnMatrix& matrix,
                                                  const SimulationResult& sim,
                                                  const PortfolioPolicy& policy);
[[nodiscard]] std::string render_distribution_table(const TrialDistribution& dist, double prediction);

}  // namespace divret
