#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "divret/error.hpp"
#include "divret/return_stats.hpp"
#include "oracles.hpp"

using namespace divret;

namespace {

const std::vector<double> kSp500 = {-0.0910, -0.1189, -0.2210, 0.2868, 0.1088,
                                    0.0491,  0.1579,  0.0549,  -0.3700, 0.2646};

std::vector<double> scaled(const std::vector<double>& r, double lambda)
{
    std::vector<double> out(r);
    for (double& x : out) {
        x *= lambda;
    }
    return out;
}

}  // namespace

TEST_CASE("arithmetic_mean")
{
    CHECK(arithmetic_mean(std::vector<double>{0.50, -0.50}) == doctest::Approx(0.0));
    CHECK(arithmetic_mean(std::vector<double>{0.10}) == 0.10);
    CHECK(arithmetic_mean(kSp500) == doctest::Approx(0.0121).epsilon(0.005));
    CHECK_THROWS_WITH_AS(arithmetic_mean(std::vector<double>{}), "empty series", ValidationError);
}

TEST_CASE("geometric_mean")
{
    // Wealth ratio 0.75 over two periods.
    CHECK(geometric_mean(std::vector<double>{0.50, -0.50}) == doctest::Approx(std::sqrt(0.75) - 1.0).epsilon(1e-14));
    CHECK(wealth_ratio(std::vector<double>{0.50, -0.50}) == doctest::Approx(0.75));
    CHECK(std::abs(geometric_mean(std::vector<double>{0.25, -0.20})) < 1e-15);
    CHECK(geometric_mean(kSp500) == doctest::Approx(-0.0095139183696904).epsilon(1e-12));

    CHECK_THROWS_AS(geometric_mean(std::vector<double>{0.1, -1.0}), ValidationError);
    CHECK_THROWS_AS(geometric_mean(std::vector<double>{-1.5}), ValidationError);
    CHECK_THROWS_AS(geometric_mean(std::vector<double>{}), ValidationError);
}

TEST_CASE("variance and covariance use population statistics")
{
    CHECK(std::sqrt(variance(kSp500)) == doctest::Approx(0.2002878768173451).epsilon(1e-12));
    CHECK(variance(std::vector<double>{0.05, 0.05, 0.05}) < 1e-30);
    CHECK(variance(std::vector<double>{0.25, -0.20}) == doctest::Approx(0.050625).epsilon(1e-14));
    CHECK(covariance(kSp500, kSp500) == variance(kSp500));

    CHECK_THROWS_AS(covariance(std::vector<double>{0.1, 0.2}, std::vector<double>{0.1}), ValidationError);
    CHECK_THROWS_AS(variance(std::vector<double>{}), ValidationError);
}

TEST_CASE("covariance against the printed portfolio column")
{
    const std::vector<double> printed_portfolio = {0.0558, -0.0384, -0.0265, 0.1558, 0.0929,
                                                   0.0571, 0.0882,  0.0765,  -0.0648, 0.0677};
    const std::vector<double> treasuries = {0.2027, 0.0421, 0.1679, 0.0248, 0.0770,
                                            0.0650, 0.0185, 0.0981, 0.2403, -0.1292};
    CHECK(covariance(kSp500, printed_portfolio) * 1e4 == doctest::Approx(117.33).epsilon(0.005 / 117.33));
    CHECK(covariance(treasuries, printed_portfolio) * 1e4 == doctest::Approx(-32.69).epsilon(0.005 / 32.69));
}

TEST_CASE("correlation")
{
    CHECK(correlation(std::vector<double>{0.25, -0.10}, std::vector<double>{0.50, -0.20}) == doctest::Approx(1.0));
    CHECK(correlation(kSp500, kSp500) == doctest::Approx(1.0));
    CHECK(correlation(std::vector<double>{0.25, -0.20}, std::vector<double>{-0.20, 0.25}) == doctest::Approx(-1.0));
    CHECK_THROWS_WITH_AS(correlation(std::vector<double>{0.1, 0.1}, std::vector<double>{0.1, 0.2}),
                         "undefined correlation: zero variance input", ValidationError);
}

TEST_CASE("ReturnSeries validates its invariants")
{
    CHECK_THROWS_AS(ReturnSeries({}), ValidationError);
    CHECK_THROWS_AS(ReturnSeries({0.1, -1.0}), ValidationError);
    const ReturnSeries s({0.1, -0.05}, "x");
    CHECK(s.size() == 2);
    CHECK(s.label() == "x");
}

TEST_CASE("approx_geometric_from_arithmetic")
{
    CHECK(approx_geometric_from_arithmetic(0.0121, 0.2003 * 0.2003) == doctest::Approx(-0.00796004).epsilon(1e-6));
    CHECK(approx_geometric_from_arithmetic(0.07, 0.0) == 0.07);
    CHECK(approx_geometric_from_arithmetic(0.0464, 0.0651 * 0.0651) == doctest::Approx(0.04428).epsilon(1e-3));
}

TEST_CASE("compound_return_expansion")
{
    CHECK(compound_return_expansion(0.05, 0.0) == doctest::Approx(std::log(1.05)));
    CHECK(std::expm1(compound_return_expansion(0.05, 0.0)) == doctest::Approx(0.05));
    CHECK(compound_return_expansion(0.0121, 0.2003 * 0.2003) == doctest::Approx(-0.0075584).epsilon(1e-4));
    CHECK(compound_return_expansion(0.0, 0.09) == doctest::Approx(-0.045));
    CHECK_THROWS_AS(compound_return_expansion(-1.0, 0.01), ValidationError);
}

TEST_CASE("property: AM-GM and wealth consistency on random series")
{
    std::mt19937_64 rng(20101201);
    std::uniform_int_distribution<std::size_t> len(1, 80);
    for (int k = 0; k < 1000; ++k) {
        const auto r = oracle::random_series(rng, len(rng), -0.6, 0.9);
        const double g = geometric_mean(r);
        CHECK(g <= arithmetic_mean(r) + 1e-15);
        const double rebuilt = std::pow(1.0 + g, static_cast<double>(r.size()));
        const auto direct = static_cast<double>(oracle::product_gross(r));
        CHECK(std::abs(rebuilt - direct) <= 1e-12 * direct);
    }
    // Equality iff constant.
    const std::vector<double> flat(7, 0.031);
    CHECK(geometric_mean(flat) == doctest::Approx(arithmetic_mean(flat)).epsilon(1e-15));
}

TEST_CASE("property: covariance is bilinear")
{
    std::mt19937_64 rng(7);
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 2 + k % 40;
        const auto a = oracle::random_series(rng, n, -0.3, 0.3);
        const auto b = oracle::random_series(rng, n, -0.3, 0.3);
        const auto c = oracle::random_series(rng, n, -0.3, 0.3);
        const double alpha = 0.7;
        const double beta = -1.3;
        std::vector<double> mix(n);
        for (std::size_t t = 0; t < n; ++t) {
            mix[t] = alpha * a[t] + beta * b[t];
        }
        CHECK(std::abs(covariance(mix, c) - (alpha * covariance(a, c) + beta * covariance(b, c))) < 1e-12);
        CHECK(std::abs(covariance(a, b) - oracle::population_cov(a, b)) < 1e-15);
    }
}

TEST_CASE("property: drag approximation error is third order in the return scale")
{
    const double lambdas[] = {1.0, 0.5, 0.25, 0.125};
    double err[4];
    for (int k = 0; k < 4; ++k) {
        const auto s = scaled(kSp500, lambdas[k]);
        err[k] = std::abs(geometric_mean(s) - approx_geometric_from_arithmetic(arithmetic_mean(s), variance(s)));
    }
    for (int k = 0; k < 3; ++k) {
        CHECK(std::log2(err[k] / err[k + 1]) >= 2.9);
    }

    // Random moderate-volatility series: err / lambda^3 stays bounded, where a
    // second-order error would double it at every halving.
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const auto r = oracle::random_series(rng, 2 + trial % 50, -0.3, 0.4);
        double q[4];
        for (int k = 0; k < 4; ++k) {
            const auto s = scaled(r, lambdas[k]);
            const double e = geometric_mean(s) - approx_geometric_from_arithmetic(arithmetic_mean(s), variance(s));
            q[k] = std::abs(e) / std::pow(lambdas[k], 3);
        }
        CHECK(q[3] <= 1.5 * std::max({q[0], q[1], q[2]}));
    }
}

TEST_CASE("property: compound expansion matches the drag approximation to third order")
{
    const double lambdas[] = {1.0, 0.5, 0.25, 0.125};
    const double mean = arithmetic_mean(kSp500);
    const double var = variance(kSp500);
    double err[4];
    for (int k = 0; k < 4; ++k) {
        const double m = mean * lambdas[k];
        const double v = var * lambdas[k] * lambdas[k];
        err[k] = std::abs(std::expm1(compound_return_expansion(m, v)) - approx_geometric_from_arithmetic(m, v));
    }
    for (int k = 0; k < 3; ++k) {
        CHECK(std::log2(err[k] / err[k + 1]) >= 2.9);
    }
}
