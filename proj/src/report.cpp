#include "divret/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "divret/error.hpp"

namespace divret {

using nlohmann::json;

ReportFormat parse_report_format(std::string_view name)
{
    if (name == "table") {
        return ReportFormat::Table;
    }
    if (name == "json") {
        return ReportFormat::Json;
    }
    throw ValidationError("unknown format '" + std::string(name) + "' (expected table or json)");
}

void to_json(json& j, const SeriesStats& s)
{
    j = json{{"arithmetic_mean", s.arithmetic_mean}, {"geometric_mean", s.geometric_mean},
             {"variance", s.variance},               {"std_dev", s.std_dev},
             {"wealth_ratio", s.wealth_ratio},       {"periods", s.periods}};
}

void from_json(const json& j, SeriesStats& s)
{
    j.at("arithmetic_mean").get_to(s.arithmetic_mean);
    j.at("geometric_mean").get_to(s.geometric_mean);
    j.at("variance").get_to(s.variance);
    j.at("std_dev").get_to(s.std_dev);
    j.at("wealth_ratio").get_to(s.wealth_ratio);
    j.at("periods").get_to(s.periods);
}

void to_json(json& j, const PortfolioPolicy& p)
{
    j = json{{"mode", to_string(p.mode)}, {"target_weights", p.target_weights}};
}

void from_json(const json& j, PortfolioPolicy& p)
{
    p.mode = parse_policy_mode(j.at("mode").get<std::string>());
    j.at("target_weights").get_to(p.target_weights);
}

void to_json(json& j, const SimulationResult& r)
{
    j = json{{"portfolio_returns", r.portfolio_returns},
             {"wealth_path", r.wealth_path},
             {"weight_path", r.weight_path},
             {"turnover", r.turnover}};
}

void from_json(const json& j, SimulationResult& r)
{
    j.at("portfolio_returns").get_to(r.portfolio_returns);
    j.at("wealth_path").get_to(r.wealth_path);
    j.at("weight_path").get_to(r.weight_path);
    j.at("turnover").get_to(r.turnover);
}

void to_json(json& j, const AssetBreakdown& a)
{
    j = json{{"label", a.label},
             {"weight", a.weight},
             {"stats", a.stats},
             {"covariance_with_portfolio", a.covariance_with_portfolio}};
}

void from_json(const json& j, AssetBreakdown& a)
{
    j.at("label").get_to(a.label);
    j.at("weight").get_to(a.weight);
    j.at("stats").get_to(a.stats);
    j.at("covariance_with_portfolio").get_to(a.covariance_with_portfolio);
}

void to_json(json& j, const UntrustedEstimate& e)
{
    j = json{{"value", e.value}, {"untrusted", e.untrusted}, {"caveat", e.caveat}};
}

void from_json(const json& j, UntrustedEstimate& e)
{
    j.at("value").get_to(e.value);
    j.at("untrusted").get_to(e.untrusted);
    j.at("caveat").get_to(e.caveat);
}

void to_json(json& j, const DecompositionReport& r)
{
    j = json{{"assets", r.assets},
             {"portfolio", r.portfolio},
             {"strategic_return", r.strategic_return},
             {"diversification_return_exact", r.diversification_return_exact},
             {"dr_covariance_approx", r.dr_covariance_approx},
             {"dr_variance_reduction_approx", r.dr_variance_reduction_approx},
             {"dr_correlation_approx", r.dr_correlation_approx},
             {"approximation_discrepancy", r.approximation_discrepancy},
             {"average_variance", r.average_variance},
             {"average_correlation", r.average_correlation},
             {"dr_erb_harvey", r.dr_erb_harvey},
             {"policy", r.policy}};
}

void from_json(const json& j, DecompositionReport& r)
{
    j.at("assets").get_to(r.assets);
    j.at("portfolio").get_to(r.portfolio);
    j.at("strategic_return").get_to(r.strategic_return);
    j.at("diversification_return_exact").get_to(r.diversification_return_exact);
    j.at("dr_covariance_approx").get_to(r.dr_covariance_approx);
    j.at("dr_variance_reduction_approx").get_to(r.dr_variance_reduction_approx);
    j.at("dr_correlation_approx").get_to(r.dr_correlation_approx);
    j.at("approximation_discrepancy").get_to(r.approximation_discrepancy);
    j.at("average_variance").get_to(r.average_variance);
    j.at("average_correlation").get_to(r.average_correlation);
    j.at("dr_erb_harvey").get_to(r.dr_erb_harvey);
    j.at("policy").get_to(r.policy);
}

void to_json(json& j, const TrialDistribution& d)
{
    j = json{{"per_trial_geometric_means", d.per_trial_geometric_means},
             {"mean", d.mean},
             {"std_error", d.std_error},
             {"trials", d.trials},
             {"policy", d.policy},
             {"mean_realized_std_dev", d.mean_realized_std_dev},
             {"resampled_draws", d.resampled_draws}};
}

void from_json(const json& j, TrialDistribution& d)
{
    j.at("per_trial_geometric_means").get_to(d.per_trial_geometric_means);
    j.at("mean").get_to(d.mean);
    j.at("std_error").get_to(d.std_error);
    j.at("trials").get_to(d.trials);
    j.at("policy").get_to(d.policy);
    j.at("mean_realized_std_dev").get_to(d.mean_realized_std_dev);
    j.at("resampled_draws").get_to(d.resampled_draws);
}

void to_json(json& j, const GeneratorConfig& c)
{
    json correlation = "none";
    if (c.correlation) {
        correlation = json::array();
        for (std::size_t i = 0; i < c.correlation->size(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < c.correlation->size(); ++k) {
                row.push_back((*c.correlation)(i, k));
            }
            correlation.push_back(std::move(row));
        }
    }
    j = json{{"n_assets", c.n_assets},
             {"n_periods", c.n_periods},
             {"target_geometric_mean", c.target_geometric_mean},
             {"target_std_dev", c.target_std_dev},
             {"correlation", std::move(correlation)},
             {"model", to_string(c.model)},
             {"exact_g_mode", c.exact_g_mode},
             {"seed", c.seed}};
}

void to_json(json& j, const Provenance& p)
{
    j = json::object();
    if (p.input) {
        j["input"] = *p.input;
    }
    if (p.config) {
        j["config"] = *p.config;
    }
    j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
    j["version"] = p.version;
}

void from_json(const json& j, Provenance& p)
{
    p.input = j.contains("input") ? std::optional<std::string>(j.at("input").get<std::string>())
                                  : std::nullopt;
    p.config = j.contains("config") ? std::optional<json>(j.at("config")) : std::nullopt;
    const auto& seed = j.at("seed");
    p.seed = seed.is_null() ? std::nullopt : std::optional<std::uint64_t>(seed.get<std::uint64_t>());
    j.at("version").get_to(p.version);
}

void to_json(json& j, const ReportDocument& d)
{
    j = json{{"command", d.command}, {"provenance", d.provenance}, {"result", d.result}};
}

void from_json(const json& j, ReportDocument& d)
{
    j.at("command").get_to(d.command);
    j.at("provenance").get_to(d.provenance);
    d.result = j.at("result");
}

std::string format_percent(double rate)
{
    const double pct = rate * 100.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", std::abs(pct));
    const std::string digits(buf);
    if (pct < 0.0 && digits != "0.00") {
        return "(" + digits + ")";
    }
    return digits;
}

Histogram make_histogram(std::span<const double> values, std::size_t bins)
{
    if (values.empty() || bins == 0) {
        throw ValidationError("histogram needs values and at least one bin");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (hi == lo) {
        lo -= 0.5e-4;
        hi += 0.5e-4;
    }
    Histogram h;
    h.edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) {
        h.edges[b] = lo + width * static_cast<double>(b);
    }
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++h.counts[std::min(b, bins - 1)];
    }
    return h;
}

std::string histogram_csv(const Histogram& h)
{
    std::ostringstream out;
    out.precision(17);
    out << "bin_lower,bin_upper,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << '\n';
    }
    return out.str();
}

namespace {

/// Fixed-width text grid; first column left-aligned, the rest right-aligned.
class TextGrid {
public:
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    void rule() { rows_.emplace_back(); }

    [[nodiscard]] std::string str() const
    {
        std::vector<std::size_t> width;
        for (const auto& row : rows_) {
            width.resize(std::max(width.size(), row.size()), 0);
            for (std::size_t c = 0; c < row.size(); ++c) {
                width[c] = std::max(width[c], row[c].size());
            }
        }
        std::size_t total = 0;
        for (std::size_t w : width) {
            total += w + 2;
        }
        std::ostringstream out;
        for (const auto& row : rows_) {
            if (row.empty()) {
                out << std::string(total, '-') << '\n';
                continue;
            }
            std::string line;
            for (std::size_t c = 0; c < row.size(); ++c) {
                const std::string pad(width[c] - row[c].size(), ' ');
                line += c == 0 ? row[c] + pad : pad + row[c];
                line += "  ";
            }
            line.erase(line.find_last_not_of(' ') + 1);
            out << line << '\n';
        }
        return out.str();
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

std::string format_fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string format_cov_e4(double cov)
{
    const std::string digits = format_fixed(std::abs(cov * 1e4), 2);
    return cov < 0.0 && digits != "0.00" ? "(" + digits + ")" : digits;
}

std::string period_label(const ReturnMatrix& m, std::size_t t)
{
    return m.period_labels().empty() ? std::to_string(t + 1) : m.period_labels()[t];
}

std::string cell(const ReturnMatrix& m, std::size_t t, std::size_t i)
{
    return m.available(t, i) ? format_percent(m(t, i)) : "";
}

}  // namespace

std::string render_stats_table(const ReturnMatrix& matrix)
{
    TextGrid grid;
    grid.add({"Asset", "Periods", "Mean r (%)", "g (%)", "sigma (%)", "Wealth ratio"});
    grid.rule();
    for (std::size_t i = 0; i < matrix.assets(); ++i) {
        const SeriesStats s = summarize(matrix.column(i));
        grid.add({matrix.asset_labels()[i], std::to_string(s.periods), format_percent(s.arithmetic_mean),
                  format_percent(s.geometric_mean), format_percent(s.std_dev),
                  format_fixed(s.wealth_ratio, 4)});
    }
    return grid.str();
}

std::string render_decomposition_table(const ReturnMatrix& matrix, const SimulationResult& sim,
                                       const DecompositionReport& report)
{
    TextGrid grid;
    std::vector<std::string> header{"Period"};
    for (const auto& a : report.assets) {
        header.push_back(a.label + " (%)");
    }
    header.push_back("Portfolio (%)");
    grid.add(header);
    grid.rule();
    for (std::size_t t = 0; t < matrix.periods(); ++t) {
        std::vector<std::string> row{period_label(matrix, t)};
        for (std::size_t i = 0; i < matrix.assets(); ++i) {
            row.push_back(cell(matrix, t, i));
        }
        row.push_back(format_percent(sim.portfolio_returns[t]));
        grid.add(std::move(row));
    }
    grid.rule();

    auto footer = [&](const std::string& name, auto asset_value, std::string portfolio_value) {
        std::vector<std::string> row{name};
        for (const auto& a : report.assets) {
            row.push_back(asset_value(a));
        }
        row.push_back(std::move(portfolio_value));
        grid.add(std::move(row));
    };
    footer("Mean r (%)", [](const AssetBreakdown& a) { return format_percent(a.stats.arithmetic_mean); },
           format_percent(report.portfolio.arithmetic_mean));
    footer("g (%)", [](const AssetBreakdown& a) { return format_percent(a.stats.geometric_mean); },
           format_percent(report.portfolio.geometric_mean));
    footer("sigma (%)", [](const AssetBreakdown& a) { return format_percent(a.stats.std_dev); },
           format_percent(report.portfolio.std_dev));
    footer("cov(i,p) (1e-4)",
           [](const AssetBreakdown& a) { return format_cov_e4(a.covariance_with_portfolio); }, "");
    footer("Weight (%)", [](const AssetBreakdown& a) { return format_percent(a.weight); }, "");

    std::ostringstream out;
    out << grid.str() << '\n';
    TextGrid summary;
    summary.add({"Strategic return", format_percent(report.strategic_return) + "%"});
    summary.add({"Diversification return (exact)", format_percent(report.diversification_return_exact) + "%"});
    summary.add({"  ~ variance minus covariance with portfolio", format_percent(report.dr_covariance_approx) + "%"});
    summary.add({"  ~ weighted variance minus portfolio variance",
                 format_percent(report.dr_variance_reduction_approx) + "%"});
    summary.add({"  ~ correlation form", format_percent(report.dr_correlation_approx) + "%"});
    summary.add({"  ~ average-correlation shortcut (untrusted)", format_percent(report.dr_erb_harvey.value) + "%"});
    out << summary.str();
    out << "note: " << report.dr_erb_harvey.caveat << '\n';
    return out.str();
}

std::string render_simulation_table(const ReturnMatrix& matrix, const SimulationResult& sim,
                                    const PortfolioPolicy& policy)
{
    TextGrid grid;
    std::vector<std::string> header{"Period", "Return (%)", "Wealth"};
    for (const auto& label : matrix.asset_labels()) {
        header.push_back("w " + label + " (%)");
    }
    header.push_back("Turnover (%)");
    grid.add(header);
    grid.rule();

    auto weight_cells = [&](std::vector<std::string>& row, std::size_t t) {
        for (double w : sim.weight_path[t]) {
            row.push_back(format_percent(w));
        }
    };
    std::vector<std::string> start{"start", "", format_fixed(sim.wealth_path[0], 4)};
    weight_cells(start, 0);
    start.push_back("");
    grid.add(std::move(start));
    for (std::size_t t = 0; t < matrix.periods(); ++t) {
        std::vector<std::string> row{period_label(matrix, t), format_percent(sim.portfolio_returns[t]),
                                     format_fixed(sim.wealth_path[t + 1], 4)};
        weight_cells(row, t + 1);
        row.push_back(format_percent(sim.turnover[t]));
        grid.add(std::move(row));
    }

    std::ostringstream out;
    out << "policy: " << to_string(policy.mode) << '\n' << grid.str();
    out << "geometric mean: " << format_percent(geometric_mean(sim.portfolio_returns)) << "%\n";
    out << "final wealth:   " << format_fixed(sim.wealth_path.back(), 6) << '\n';
    return out.str();
}

std::string render_distribution_table(const TrialDistribution& dist, double prediction)
{
    TextGrid grid;
    grid.add({"Policy", std::string(to_string(dist.policy.mode))});
    grid.add({"Trials", std::to_string(dist.trials)});
    grid.add({"Mean geometric return (%)", format_percent(dist.mean)});
    grid.add({"Standard error (%)", format_fixed(dist.std_error * 100.0, 4)});
    grid.add({"Uncorrelated prediction (%)", format_percent(prediction)});
    grid.add({"Mean realized sigma (%)", format_percent(dist.mean_realized_std_dev)});
    grid.add({"Resampled draws", std::to_string(dist.resampled_draws)});
    return grid.str();
}

}  // namespace divret
