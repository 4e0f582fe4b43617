#include <doctest.h>

#include <string>
#include <vector>

#include "divret/csv.hpp"
#include "divret/error.hpp"
#include "divret/report.hpp"

using namespace divret;
using nlohmann::json;

namespace {

template <typename T>
T round_trip(const T& value)
{
    return json::parse(json(value).dump()).get<T>();
}

ReturnMatrix table1()
{
    return parse_csv(std::string(DIVRET_TEST_DATA) + "/table1.csv");
}

}  // namespace

TEST_CASE("json round trips are lossless")
{
    const ReturnMatrix m = table1();
    const std::vector<double> w{0.5, 0.5};

    const DecompositionReport report = decompose(m, w);
    CHECK(round_trip(report) == report);

    const SimulationResult sim = simulate(m, {PolicyMode::BuyAndHold, w});
    CHECK(round_trip(sim) == sim);

    GeneratorConfig c;
    c.n_assets = 5;
    c.n_periods = 10;
    c.target_std_dev = 0.2;
    c.seed = 42;
    const TrialDistribution dist = water_into_wine(c, 7, PolicyMode::Rebalanced, 1);
    CHECK(round_trip(dist) == dist);

    ReportDocument doc;
    doc.command = "decompose";
    doc.provenance.input = "returns.csv";
    doc.provenance.config = json{{"weights", w}};
    doc.result = report;
    CHECK(round_trip(doc) == doc);

    ReportDocument bare;
    bare.command = "buyhold-closed-form";
    const json j = bare;
    CHECK(j.at("provenance").at("seed").is_null());
    CHECK(j.at("provenance").at("version") == kToolVersion);
    CHECK(round_trip(bare) == bare);
}

TEST_CASE("decomposition json carries the untrusted shortcut")
{
    const json j = decompose(table1(), std::vector<double>{0.5, 0.5});
    CHECK(j.at("dr_erb_harvey").at("untrusted") == true);
    CHECK_FALSE(j.at("dr_erb_harvey").at("caveat").get<std::string>().empty());
    CHECK(j.at("diversification_return_exact").get<double>() == doctest::Approx(0.011171038772578634));
}

TEST_CASE("format_percent")
{
    CHECK(format_percent(0.0331937) == "3.32");
    CHECK(format_percent(-0.0095139) == "(0.95)");
    CHECK(format_percent(-0.00001) == "0.00");
    CHECK(format_percent(0.0) == "0.00");
    CHECK(format_percent(1.5) == "150.00");
}

TEST_CASE("histogram")
{
    const std::vector<double> v{0.0, 0.1, 0.2, 0.3, 0.4, 0.4};
    const Histogram h = make_histogram(v, 4);
    REQUIRE(h.edges.size() == 5);
    CHECK(h.edges.front() == 0.0);
    CHECK(h.edges.back() == 0.4);
    std::size_t total = 0;
    for (auto c : h.counts) {
        total += c;
    }
    CHECK(total == v.size());
    CHECK(h.counts.back() >= 2);

    const Histogram flat = make_histogram(std::vector<double>{1.0, 1.0}, 3);
    CHECK(flat.counts[1] + flat.counts[2] + flat.counts[0] == 2);

    const std::string csv = histogram_csv(h);
    CHECK(csv.rfind("bin_lower,bin_upper,count\n", 0) == 0);
    CHECK_THROWS_AS((void)make_histogram(std::vector<double>{}, 3), ValidationError);
    CHECK_THROWS_AS((void)make_histogram(v, 0), ValidationError);
}

TEST_CASE("decomposition table layout")
{
    const ReturnMatrix m = table1();
    const std::vector<double> w{0.5, 0.5};
    const std::string text =
        render_decomposition_table(m, simulate(m, {PolicyMode::Rebalanced, w}), decompose(m, w));
    CHECK(text.find("S&P 500 (%)") != std::string::npos);
    CHECK(text.find("(9.10)") != std::string::npos);
    CHECK(text.find("117.35") != std::string::npos);
    CHECK(text.find("(32.69)") != std::string::npos);
    CHECK(text.find("3.32%") != std::string::npos);
    CHECK(text.find("1.12%") != std::string::npos);
    CHECK(text.find("1.04%") != std::string::npos);
    CHECK(text.find("untrusted") != std::string::npos);
}

TEST_CASE("other tables")
{
    const ReturnMatrix m = table1();
    const std::string stats = render_stats_table(m);
    CHECK(stats.find("(0.95)") != std::string::npos);
    CHECK(stats.find("7.59") != std::string::npos);

    const PortfolioPolicy p{PolicyMode::BuyAndHold, {0.5, 0.5}};
    const std::string sim = render_simulation_table(m, simulate(m, p), p);
    CHECK(sim.find("policy: buyhold") != std::string::npos);

    TrialDistribution d;
    d.trials = 3;
    d.mean = 0.0387;
    const std::string dist = render_distribution_table(d, 0.043875);
    CHECK(dist.find("3.87") != std::string::npos);
    CHECK(dist.find("4.39") != std::string::npos);
}
