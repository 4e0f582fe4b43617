#include "divret/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>

#include "divret/csv.hpp"
#include "divret/decomposition.hpp"
#include "divret/error.hpp"
#include "divret/montecarlo.hpp"
#include "divret/portfolio.hpp"
#include "divret/report.hpp"

namespace divret {

namespace {

using nlohmann::json;

struct Options {
    std::string input;
    std::string unit = "percent";
    std::string format = "table";
    std::vector<double> weights;
    std::string policy;
    std::vector<double> geometric_means;
    std::size_t periods = 0;

    std::size_t assets = 0;
    double sigma = 0.0;
    double g = 0.0;
    std::string model = "lognormal";
    bool exact_g = false;
    std::string correlation = "none";
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string histogram;
    std::size_t bins = 50;
    unsigned threads = 0;
};

void emit_json(std::ostream& out, const std::string& command, Provenance provenance, json result)
{
    const ReportDocument doc{command, std::move(provenance), std::move(result)};
    out << json(doc).dump(2) << '\n';
}

Provenance input_provenance(const Options& o, json config)
{
    Provenance p;
    p.input = o.input;
    p.config = std::move(config);
    return p;
}

int cmd_stats(const Options& o, std::ostream& out)
{
    const ReturnMatrix matrix = parse_csv(o.input, parse_unit(o.unit));
    if (parse_report_format(o.format) == ReportFormat::Table) {
        out << render_stats_table(matrix);
        return kExitOk;
    }
    json assets = json::array();
    for (std::size_t i = 0; i < matrix.assets(); ++i) {
        assets.push_back({{"label", matrix.asset_labels()[i]},
                          {"first_period", matrix.first_period(i)},
                          {"stats", summarize(matrix.column(i))}});
    }
    emit_json(out, "stats", input_provenance(o, {{"unit", o.unit}}), {{"assets", assets}});
    return kExitOk;
}

int cmd_decompose(const Options& o, std::ostream& out)
{
    const ReportFormat format = parse_report_format(o.format);
    const ReturnMatrix matrix = parse_csv(o.input, parse_unit(o.unit));
    const PortfolioPolicy policy{PolicyMode::Rebalanced, o.weights};
    const DecompositionReport report = decompose(matrix, policy);
    if (format == ReportFormat::Table) {
        out << render_decomposition_table(matrix, simulate(matrix, policy), report);
        return kExitOk;
    }
    emit_json(out, "decompose", input_provenance(o, {{"unit", o.unit}, {"weights", o.weights}}), report);
    return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out)
{
    const ReportFormat format = parse_report_format(o.format);
    const PolicyMode mode = parse_policy_mode(o.policy);
    const bool index_mode = mode == PolicyMode::IndexRebalanced || mode == PolicyMode::IndexBuyIn;
    if (index_mode && !o.weights.empty()) {
        throw ValidationError("--weights cannot be combined with an index policy (equal weights are implied)");
    }
    if (!index_mode && o.weights.empty()) {
        throw ValidationError("--weights is required for policy '" + o.policy + "'");
    }
    const ReturnMatrix matrix = parse_csv(o.input, parse_unit(o.unit));
    const PortfolioPolicy policy{mode, o.weights};
    const SimulationResult sim = simulate(matrix, policy);
    if (format == ReportFormat::Table) {
        out << render_simulation_table(matrix, sim, policy);
        return kExitOk;
    }
    emit_json(out, "simulate",
              input_provenance(o, {{"unit", o.unit}, {"policy", o.policy}, {"weights", o.weights}}),
              {{"policy", policy},
               {"geometric_mean", geometric_mean(sim.portfolio_returns)},
               {"simulation", sim}});
    return kExitOk;
}

int cmd_buyhold(const Options& o, std::ostream& out)
{
    const ReportFormat format = parse_report_format(o.format);
    const double g = buy_and_hold_geometric(o.weights, o.geometric_means, o.periods);
    const double linear = linearized_buy_and_hold(o.weights, o.geometric_means);
    const double wealth = std::pow(1.0 + g, static_cast<double>(o.periods));
    if (format == ReportFormat::Table) {
        out << "Buy-and-hold geometric return: " << format_percent(g) << "%\n"
            << "Linearized (initial-weight average): " << format_percent(linear) << "%\n"
            << "Incremental return from weight drift: " << format_percent(g - linear) << "%\n"
            << "Wealth gain over " << o.periods << " periods: " << format_percent(wealth - 1.0) << "%\n";
        return kExitOk;
    }
    Provenance p;
    p.config = {{"weights", o.weights}, {"geometric_means", o.geometric_means}, {"periods", o.periods}};
    emit_json(out, "buyhold-closed-form", std::move(p),
              {{"geometric_mean", g}, {"linearized", linear}, {"wealth_ratio", wealth}});
    return kExitOk;
}

int cmd_montecarlo(const Options& o, std::ostream& out)
{
    const ReportFormat format = parse_report_format(o.format);
    const PolicyMode mode = parse_policy_mode(o.policy);
    if (mode != PolicyMode::Rebalanced && mode != PolicyMode::BuyAndHold) {
        throw ValidationError("montecarlo --policy must be rebalanced or buyhold");
    }
    GeneratorConfig config;
    config.n_assets = o.assets;
    config.n_periods = o.periods;
    config.target_geometric_mean = o.g;
    config.target_std_dev = o.sigma;
    config.model = parse_return_model(o.model);
    config.exact_g_mode = o.exact_g;
    config.seed = o.seed;
    if (o.correlation != "none") {
        config.correlation = parse_correlation_csv(o.correlation);
    }

    const TrialDistribution dist = water_into_wine(config, o.trials, mode, o.threads);
    const std::vector<double> weights(o.assets, 1.0 / static_cast<double>(o.assets));
    const std::vector<double> variances(o.assets, o.sigma * o.sigma);
    const double prediction = dr_prediction_uncorrelated(weights, variances);

    if (!o.histogram.empty()) {
        std::ofstream hist(o.histogram);
        if (!hist) {
            throw IoError("cannot write '" + o.histogram + "'");
        }
        hist << histogram_csv(make_histogram(dist.per_trial_geometric_means, o.bins));
    }

    if (format == ReportFormat::Table) {
        out << render_distribution_table(dist, prediction);
        return kExitOk;
    }
    Provenance p;
    p.config = {{"generator", config}, {"trials", o.trials}, {"policy", o.policy}};
    p.seed = o.seed;
    emit_json(out, "montecarlo", std::move(p),
              {{"distribution", dist}, {"prediction_uncorrelated", prediction}});
    return kExitOk;
}

void add_format(CLI::App* cmd, Options& o)
{
    cmd->add_option("--format", o.format, "Output format: table|json")->capture_default_str();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Rebalancing, buy-and-hold and diversification-return analytics", "divret"};
    app.require_subcommand(1);

    auto* stats = app.add_subcommand("stats", "Per-asset return statistics");
    stats->add_option("--input", o.input, "Return table (CSV)")->required();
    stats->add_option("--unit", o.unit, "percent|decimal")->capture_default_str();
    add_format(stats, o);

    auto* decomp = app.add_subcommand("decompose", "Strategic and diversification return of a rebalanced portfolio");
    decomp->add_option("--input", o.input, "Return table (CSV)")->required();
    decomp->add_option("--weights", o.weights, "Target weights, comma separated")->required()->delimiter(',');
    decomp->add_option("--unit", o.unit, "percent|decimal")->capture_default_str();
    add_format(decomp, o);

    auto* sim = app.add_subcommand("simulate", "Wealth, weight and turnover paths under a policy");
    sim->add_option("--input", o.input, "Return table (CSV)")->required();
    sim->add_option("--policy", o.policy, "rebalanced|buyhold|index-rebalanced|index-buyin")->required();
    sim->add_option("--weights", o.weights, "Target or initial weights, comma separated")->delimiter(',');
    sim->add_option("--unit", o.unit, "percent|decimal")->capture_default_str();
    add_format(sim, o);

    auto* bh = app.add_subcommand("buyhold-closed-form", "Closed-form buy-and-hold geometric return");
    bh->add_option("--weights", o.weights, "Initial weights, comma separated")->required()->delimiter(',');
    bh->add_option("--geometric-means", o.geometric_means, "Asset geometric means (decimal)")
        ->required()
        ->delimiter(',');
    bh->add_option("--periods", o.periods, "Number of holding periods")->required();
    add_format(bh, o);

    auto* mc = app.add_subcommand("montecarlo", "Repeated equal-weight portfolios on synthetic returns");
    mc->add_option("--assets", o.assets, "Number of assets")->required();
    mc->add_option("--periods", o.periods, "Periods per trial")->required();
    mc->add_option("--sigma", o.sigma, "Target std dev of simple returns (decimal)")->required();
    mc->add_option("--g", o.g, "Target geometric mean (decimal)")->required();
    mc->add_option("--model", o.model, "lognormal|normal|twopoint")->capture_default_str();
    mc->add_flag("--exact-g", o.exact_g, "Force each asset's realized geometric mean to the target");
    mc->add_option("--correlation", o.correlation, "none or a CSV correlation matrix")->capture_default_str();
    mc->add_option("--trials", o.trials, "Number of trials")->required();
    mc->add_option("--seed", o.seed, "Base seed")->required();
    mc->add_option("--policy", o.policy, "rebalanced|buyhold")->required();
    mc->add_option("--histogram", o.histogram, "Write a CSV histogram of trial returns to this file");
    mc->add_option("--bins", o.bins, "Histogram bins")->capture_default_str()->check(CLI::PositiveNumber);
    mc->add_option("--threads", o.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    add_format(mc, o);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        const auto* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << active->help();
        return kExitValidation;
    }

    try {
        if (*stats) {
            return cmd_stats(o, out);
        }
        if (*decomp) {
            return cmd_decompose(o, out);
        }
        if (*sim) {
            return cmd_simulate(o, out);
        }
        if (*bh) {
            return cmd_buyhold(o, out);
        }
        return cmd_montecarlo(o, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

}  // namespace divret
