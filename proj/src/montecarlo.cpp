#include "divret/montecarlo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "divret/error.hpp"
#include "divret/return_stats.hpp"

namespace divret {

namespace {

constexpr double kCorrelationTolerance = 1e-10;
constexpr std::size_t kMaxResamplesPerPeriod = 1'000'000;

void validate_config(const GeneratorConfig& c)
{
    if (c.n_assets == 0 || c.n_periods == 0) {
        throw ValidationError("generator: need at least one asset and one period");
    }
    if (!std::isfinite(c.target_std_dev) || c.target_std_dev < 0.0) {
        throw ValidationError("generator: target std dev must be finite and non-negative");
    }
    if (!std::isfinite(c.target_geometric_mean) || c.target_geometric_mean <= -1.0) {
        throw ValidationError("generator: target geometric mean must exceed -100%");
    }
}

// Returns B with B * B^T = C, via the symmetric eigendecomposition so that
// singular (positive semi-definite) matrices are accepted.
Eigen::MatrixXd correlation_factor(const SquareMatrix& c, std::size_t n)
{
    if (c.size() != n) {
        throw ValidationError("correlation matrix size does not match asset count");
    }
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(c(i, i) - 1.0) > kCorrelationTolerance) {
            throw ValidationError("correlation matrix must have a unit diagonal");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::isfinite(c(i, j)) || std::abs(c(i, j)) > 1.0 + kCorrelationTolerance ||
                std::abs(c(i, j) - c(j, i)) > kCorrelationTolerance) {
                throw ValidationError("correlation matrix must be symmetric with entries in [-1, 1]");
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c(i, j);
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) {
        throw ValidationError("correlation matrix eigendecomposition failed");
    }
    Eigen::VectorXd values = eig.eigenvalues();
    if (values.minCoeff() < -kCorrelationTolerance) {
        throw ValidationError("correlation matrix is not positive semi-definite");
    }
    values = values.cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * values.asDiagonal();
}

std::uint64_t splitmix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::string_view to_string(ReturnModel model) noexcept
{
    switch (model) {
        case ReturnModel::Lognormal: return "lognormal";
        case ReturnModel::Normal: return "normal";
        case ReturnModel::TwoPoint: return "twopoint";
    }
    return "unknown";
}

ReturnModel parse_return_model(std::string_view name)
{
    for (auto model : {ReturnModel::Lognormal, ReturnModel::Normal, ReturnModel::TwoPoint}) {
        if (name == to_string(model)) {
            return model;
        }
    }
    throw ValidationError("unknown return model '" + std::string(name) + "'");
}

double lognormal_log_scale(double target_geometric_mean, double target_std_dev)
{
    // With x = e^{s^2}: x^2 - x - sigma^2 / (1+g)^2 = 0.
    const double gross = 1.0 + target_geometric_mean;
    const double c = (target_std_dev * target_std_dev) / (gross * gross);
    const double x = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * c));
    return std::sqrt(std::log(x));
}

TwoPointLevels two_point_levels(double target_geometric_mean, double target_std_dev)
{
    const double gross = 1.0 + target_geometric_mean;
    const double up_gross = target_std_dev + std::hypot(target_std_dev, gross);
    const double down_gross = up_gross - 2.0 * target_std_dev;
    return {up_gross - 1.0, down_gross - 1.0};
}

GeneratedReturns generate_returns(const GeneratorConfig& config)
{
    validate_config(config);
    const std::size_t n = config.n_assets;
    const std::size_t periods = config.n_periods;
    const double g = config.target_geometric_mean;
    const double sigma = config.target_std_dev;

    std::optional<Eigen::MatrixXd> factor;
    if (config.correlation) {
        factor = correlation_factor(*config.correlation, n);
    }

    std::vector<double> flat(periods * n, g);
    std::size_t resampled = 0;
    if (sigma == 0.0) {
        return {ReturnMatrix(periods, n, std::move(flat)), 0};
    }

    std::mt19937_64 engine(config.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));

    const double log_location = std::log1p(g);
    const double log_scale = config.model == ReturnModel::Lognormal ? lognormal_log_scale(g, sigma) : 0.0;
    const double normal_mean = g + 0.5 * sigma * sigma;
    const TwoPointLevels levels = two_point_levels(g, sigma);

    for (std::size_t t = 0; t < periods; ++t) {
        double* row = flat.data() + t * n;
        for (std::size_t attempt = 0;; ++attempt) {
            for (Eigen::Index i = 0; i < z.size(); ++i) {
                z[i] = normal(engine);
            }
            x = factor ? Eigen::VectorXd(*factor * z) : z;
            bool ok = true;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = x[static_cast<Eigen::Index>(i)];
                switch (config.model) {
                    case ReturnModel::Lognormal: row[i] = std::expm1(log_location + log_scale * v); break;
                    case ReturnModel::Normal: row[i] = normal_mean + sigma * v; break;
                    case ReturnModel::TwoPoint: row[i] = v >= 0.0 ? levels.up : levels.down; break;
                }
                ok = ok && row[i] > -1.0;
            }
            if (ok) {
                break;
            }
            ++resampled;
            if (attempt + 1 >= kMaxResamplesPerPeriod) {
                throw ValidationError("normal model: cannot draw returns above -100% for this sigma");
            }
        }
    }

    if (config.exact_g_mode) {
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> col(periods);
            for (std::size_t t = 0; t < periods; ++t) {
                col[t] = flat[t * n + i];
            }
            const double scale = (1.0 + g) / (1.0 + geometric_mean(col));
            for (std::size_t t = 0; t < periods; ++t) {
                flat[t * n + i] = (1.0 + col[t]) * scale - 1.0;
            }
        }
    }
    return {ReturnMatrix(periods, n, std::move(flat)), resampled};
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial_index) noexcept
{
    return splitmix64(base_seed + (trial_index + 1) * 0x9E3779B97F4A7C15ULL);
}

TrialDistribution water_into_wine(const GeneratorConfig& config, std::size_t trials,
                                  PolicyMode policy_mode, unsigned threads)
{
    if (trials == 0) {
        throw ValidationError("water_into_wine: need at least one trial");
    }
    if (policy_mode != PolicyMode::Rebalanced && policy_mode != PolicyMode::BuyAndHold) {
        throw ValidationError("water_into_wine: policy must be rebalanced or buyhold");
    }
    validate_config(config);
    if (config.correlation) {
        // Fail early instead of once per worker.
        (void)correlation_factor(*config.correlation, config.n_assets);
    }

    const PortfolioPolicy policy{policy_mode,
                                 std::vector<double>(config.n_assets, 1.0 / static_cast<double>(config.n_assets))};

    std::vector<double> geo(trials);
    std::vector<double> realized_sd(trials);
    std::vector<std::size_t> resampled(trials);

    auto run_trial = [&](std::size_t k) {
        GeneratorConfig trial_config = config;
        trial_config.seed = trial_seed(config.seed, k);
        const GeneratedReturns gen = generate_returns(trial_config);
        geo[k] = geometric_mean(simulate(gen.returns, policy).portfolio_returns);
        double sd = 0.0;
        for (std::size_t i = 0; i < config.n_assets; ++i) {
            sd += std_dev(gen.returns.column(i));
        }
        realized_sd[k] = sd / static_cast<double>(config.n_assets);
        resampled[k] = gen.resampled_draws;
    };

    unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
    if (workers <= 1) {
        for (std::size_t k = 0; k < trials; ++k) {
            run_trial(k);
        }
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = w; k < trials; k += workers) {
                        run_trial(k);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
        for (const auto& e : errors) {
            if (e) {
                std::rethrow_exception(e);
            }
        }
    }

    TrialDistribution dist;
    dist.trials = trials;
    dist.policy = policy;
    dist.mean = arithmetic_mean(geo);
    dist.std_error = trials > 1 ? std::sqrt(variance(geo) * static_cast<double>(trials) /
                                            static_cast<double>(trials - 1)) /
                                      std::sqrt(static_cast<double>(trials))
                                : 0.0;
    dist.mean_realized_std_dev = arithmetic_mean(realized_sd);
    for (std::size_t r : resampled) {
        dist.resampled_draws += r;
    }
    dist.per_trial_geometric_means = std::move(geo);
    return dist;
}

double dr_prediction_uncorrelated(std::span<const double> weights, std::span<const double> variances)
{
    validate_weights(weights, variances.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i] * (1.0 - weights[i]) * variances[i];
    }
    return 0.5 * acc;
}

}  // namespace divret
