#include <doctest.h>

#include <cmath>
#include <vector>

#include "divret/error.hpp"
#include "divret/montecarlo.hpp"
#include "divret/return_stats.hpp"
#include "oracles.hpp"

using namespace divret;

namespace {

GeneratorConfig zero_growth_config(std::uint64_t seed)
{
    GeneratorConfig c;
    c.n_assets = 40;
    c.n_periods = 45;
    c.target_geometric_mean = 0.0;
    c.target_std_dev = 0.30;
    c.model = ReturnModel::Lognormal;
    c.exact_g_mode = true;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("lognormal calibration matches quadrature")
{
    for (double g : {-0.05, 0.0, 0.07}) {
        for (double sigma : {0.05, 0.30, 0.80}) {
            const double s = lognormal_log_scale(g, sigma);
            CHECK(oracle::lognormal_sd_by_quadrature(std::log1p(g), s) == doctest::Approx(sigma).epsilon(1e-7));
        }
    }
    CHECK(lognormal_log_scale(0.03, 0.0) == 0.0);
}

TEST_CASE("two-point levels")
{
    const auto lv = two_point_levels(0.02, 0.25);
    CHECK((1.0 + lv.up) * (1.0 + lv.down) == doctest::Approx(1.02 * 1.02).epsilon(1e-14));
    CHECK(0.5 * (lv.up - lv.down) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(lv.down > -1.0);
    const auto flat = two_point_levels(0.04, 0.0);
    CHECK(flat.up == doctest::Approx(0.04));
    CHECK(flat.down == doctest::Approx(0.04));
}

TEST_CASE("zero volatility gives a constant matrix under every model")
{
    for (auto model : {ReturnModel::Lognormal, ReturnModel::Normal, ReturnModel::TwoPoint}) {
        GeneratorConfig c;
        c.n_assets = 3;
        c.n_periods = 8;
        c.target_geometric_mean = 0.05;
        c.target_std_dev = 0.0;
        c.model = model;
        c.seed = 9;
        const auto gen = generate_returns(c);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(geometric_mean(gen.returns.column(i)) == doctest::Approx(0.05).epsilon(1e-15));
            for (double r : gen.returns.column(i)) {
                CHECK(r == 0.05);
            }
        }
    }
}

TEST_CASE("exact-g mode pins each column's wealth ratio")
{
    for (auto model : {ReturnModel::Lognormal, ReturnModel::Normal, ReturnModel::TwoPoint}) {
        auto c = zero_growth_config(123);
        c.model = model;
        const auto gen = generate_returns(c);
        for (std::size_t i = 0; i < c.n_assets; ++i) {
            CHECK(std::abs(static_cast<double>(oracle::product_gross(gen.returns.column(i))) - 1.0) < 1e-12);
        }
    }
    auto c = zero_growth_config(5);
    c.target_geometric_mean = 0.04;
    const auto gen = generate_returns(c);
    CHECK(geometric_mean(gen.returns.column(7)) == doctest::Approx(0.04).epsilon(1e-13));
}

TEST_CASE("realized volatility is near the target")
{
    double total = 0.0;
    const int trials = 50;
    for (int k = 0; k < trials; ++k) {
        const auto gen = generate_returns(zero_growth_config(trial_seed(77, k)));
        double sd = 0.0;
        for (std::size_t i = 0; i < 40; ++i) {
            sd += std::sqrt(oracle::population_cov(gen.returns.column(i), gen.returns.column(i)));
        }
        total += sd / 40.0;
    }
    CHECK(std::abs(total / trials - 0.30) <= 0.02);

    // Without exact-g and over long horizons the sample std approaches sigma.
    for (auto model : {ReturnModel::Lognormal, ReturnModel::Normal, ReturnModel::TwoPoint}) {
        GeneratorConfig c;
        c.n_assets = 4;
        c.n_periods = 40000;
        c.target_geometric_mean = 0.03;
        c.target_std_dev = 0.2;
        c.model = model;
        c.exact_g_mode = false;
        c.seed = 2;
        const auto gen = generate_returns(c);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std_dev(gen.returns.column(i)) == doctest::Approx(0.2).epsilon(0.02));
        }
    }
}

TEST_CASE("generation is deterministic and seed-sensitive")
{
    const auto a = generate_returns(zero_growth_config(1));
    const auto b = generate_returns(zero_growth_config(1));
    const auto c = generate_returns(zero_growth_config(2));
    bool same = true;
    bool differs = false;
    for (std::size_t t = 0; t < 45; ++t) {
        for (std::size_t i = 0; i < 40; ++i) {
            same = same && a.returns(t, i) == b.returns(t, i);
            differs = differs || a.returns(t, i) != c.returns(t, i);
        }
    }
    CHECK(same);
    CHECK(differs);
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
    CHECK(trial_seed(1, 5) == trial_seed(1, 5));
}

TEST_CASE("correlated draws")
{
    GeneratorConfig c;
    c.n_assets = 3;
    c.n_periods = 20000;
    c.target_std_dev = 0.1;
    c.exact_g_mode = false;
    c.seed = 4;
    SquareMatrix rho = SquareMatrix::identity(3);
    rho(0, 1) = rho(1, 0) = 0.6;
    rho(0, 2) = rho(2, 0) = -0.3;
    rho(1, 2) = rho(2, 1) = 0.0;
    c.correlation = rho;
    const auto gen = generate_returns(c);
    CHECK(correlation(gen.returns.column(0), gen.returns.column(1)) == doctest::Approx(0.6).epsilon(0.05));
    CHECK(correlation(gen.returns.column(0), gen.returns.column(2)) == doctest::Approx(-0.3).epsilon(0.1));

    // Singular but PSD (all ones) is accepted and yields identical columns.
    c.correlation = SquareMatrix(3, 1.0);
    c.n_periods = 50;
    const auto ones = generate_returns(c);
    for (std::size_t t = 0; t < 50; ++t) {
        CHECK(ones.returns(t, 0) == doctest::Approx(ones.returns(t, 2)).epsilon(1e-12));
    }

    SquareMatrix bad = SquareMatrix::identity(3);
    bad(0, 1) = bad(1, 0) = 0.9;
    bad(0, 2) = bad(2, 0) = 0.9;
    bad(1, 2) = bad(2, 1) = -0.9;
    c.correlation = bad;
    CHECK_THROWS_WITH_AS((void)generate_returns(c), "correlation matrix is not positive semi-definite",
                         ValidationError);
    c.correlation = SquareMatrix::identity(2);
    CHECK_THROWS_AS((void)generate_returns(c), ValidationError);
}

TEST_CASE("normal model counts resampled periods")
{
    GeneratorConfig c;
    c.n_assets = 2;
    c.n_periods = 2000;
    c.target_std_dev = 0.6;
    c.model = ReturnModel::Normal;
    c.exact_g_mode = false;
    c.seed = 3;
    const auto gen = generate_returns(c);
    CHECK(gen.resampled_draws > 0);
    for (std::size_t i = 0; i < 2; ++i) {
        for (double r : gen.returns.column(i)) {
            CHECK(r > -1.0);
        }
    }
    CHECK(generate_returns(zero_growth_config(1)).resampled_draws == 0);
}

TEST_CASE("invalid generator configs")
{
    GeneratorConfig c;
    c.n_assets = 0;
    CHECK_THROWS_AS((void)generate_returns(c), ValidationError);
    c.n_assets = 1;
    c.target_std_dev = -0.1;
    CHECK_THROWS_AS((void)generate_returns(c), ValidationError);
    c.target_std_dev = 0.1;
    c.target_geometric_mean = -1.0;
    CHECK_THROWS_AS((void)generate_returns(c), ValidationError);
    CHECK_THROWS_AS(parse_return_model("cauchy"), ValidationError);
    CHECK_THROWS_AS((void)water_into_wine(zero_growth_config(1), 0, PolicyMode::Rebalanced), ValidationError);
    CHECK_THROWS_AS((void)water_into_wine(zero_growth_config(1), 3, PolicyMode::IndexBuyIn), ValidationError);
}

TEST_CASE("dr_prediction_uncorrelated")
{
    CHECK(dr_prediction_uncorrelated(std::vector<double>(40, 1.0 / 40.0), std::vector<double>(40, 0.09)) ==
          doctest::Approx(0.043875).epsilon(1e-12));
    CHECK(dr_prediction_uncorrelated(std::vector<double>{1.0}, std::vector<double>{0.09}) == 0.0);
    CHECK(dr_prediction_uncorrelated(std::vector<double>{0.5, 0.5}, std::vector<double>{0.050625, 0.050625}) ==
          doctest::Approx(0.01265625));
    CHECK_THROWS_AS(dr_prediction_uncorrelated(std::vector<double>{0.6, 0.6}, std::vector<double>{0.1, 0.1}),
                    ValidationError);
}

TEST_CASE("water_into_wine")
{
    SUBCASE("parallel run equals sequential run")
    {
        const auto seq = water_into_wine(zero_growth_config(10), 64, PolicyMode::Rebalanced, 1);
        const auto par = water_into_wine(zero_growth_config(10), 64, PolicyMode::Rebalanced, 4);
        CHECK(seq == par);
        CHECK(seq.trials == 64);
        CHECK(seq.per_trial_geometric_means.size() == 64);
    }

    SUBCASE("buy-and-hold of zero-growth assets is zero in every trial")
    {
        const auto d = water_into_wine(zero_growth_config(3), 200, PolicyMode::BuyAndHold);
        for (double g : d.per_trial_geometric_means) {
            CHECK(std::abs(g) < 1e-10);
        }
    }

    SUBCASE("rebalancing earns a positive return with zero-growth assets")
    {
        const auto d = water_into_wine(zero_growth_config(8), 1000, PolicyMode::Rebalanced);
        CHECK(d.mean > 5.0 * d.std_error);
        const double prediction =
            dr_prediction_uncorrelated(std::vector<double>(40, 1.0 / 40.0), std::vector<double>(40, 0.09));
        CHECK(std::abs(d.mean - prediction) <= 0.15 * prediction);
    }

    SUBCASE("different seeds agree within a few standard errors")
    {
        const auto a = water_into_wine(zero_growth_config(100), 1000, PolicyMode::Rebalanced);
        const auto b = water_into_wine(zero_growth_config(200), 1000, PolicyMode::Rebalanced);
        CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.std_error, b.std_error));
    }

    SUBCASE("no volatility means no diversification return")
    {
        auto c = zero_growth_config(1);
        c.target_std_dev = 0.0;
        c.target_geometric_mean = 0.02;
        for (auto mode : {PolicyMode::Rebalanced, PolicyMode::BuyAndHold}) {
            const auto d = water_into_wine(c, 20, mode);
            for (double g : d.per_trial_geometric_means) {
                CHECK(g == doctest::Approx(0.02).epsilon(1e-14));
            }
        }
    }
}
