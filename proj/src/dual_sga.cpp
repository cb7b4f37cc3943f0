#include "mqh/dual_sga.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqh/errors.hpp"

namespace mqh {

namespace {

void check_dims(std::size_t zeta, std::size_t reduced, std::size_t masses) {
    if (zeta != reduced || zeta != masses)
        throw DimensionMismatch("dual dimensions disagree: zeta " + std::to_string(zeta) +
                                ", reduced " + std::to_string(reduced) + ", masses " +
                                std::to_string(masses));
}

// Index of the first minimizer of reduced - zeta, or -1 when the minimum is
// nonnegative.
int first_negative_argmin(std::span<const double> zeta, std::span<const double> reduced_row) {
    int arg = -1;
    double best = 0.0;
    for (std::size_t n = 0; n < zeta.size(); ++n) {
        const double d = reduced_row[n] - zeta[n];
        if (d < best) {
            best = d;
            arg = static_cast<int>(n);
        }
    }
    return arg;
}

struct Welford {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    double std_error() const {
        if (n < 2) return 0.0;
        return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
    }
};

double quantile_sorted(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) throw EmptyBatch("quantile of empty sample");
    if (level <= 0.0) return sorted.front();
    const std::size_t m = sorted.size();
    std::size_t k = static_cast<std::size_t>(std::ceil(level * static_cast<double>(m)));
    k = std::min(std::max<std::size_t>(k, 1), m);
    return sorted[k - 1];
}

}  // namespace

void SgaConfig::validate() const {
    if (max_iter < 1) throw Error("sga: max_iter must be >= 1");
    if (batch < 1) throw Error("sga: batch must be >= 1");
    if (!(eta0 > 0.0)) throw Error("sga: eta0 must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0)) throw Error("sga: beta1 must lie in (0,1)");
    if (!(beta2 > 0.0 && beta2 < 1.0)) throw Error("sga: beta2 must lie in (0,1)");
    if (!(epsilon > 0.0)) throw Error("sga: epsilon must be positive");
    if (!(stop_tol > 0.0)) throw Error("sga: stop_tol must be positive");
    if (pilot_size < 1) throw Error("sga: pilot_size must be >= 1");
}

double dual_sample_value(std::span<const double> zeta, std::span<const double> reduced_row,
                         std::span<const double> upper_masses) {
    check_dims(zeta.size(), reduced_row.size(), upper_masses.size());
    double linear = 0.0;
    double worst = 0.0;
    for (std::size_t n = 0; n < zeta.size(); ++n) {
        linear += zeta[n] * upper_masses[n];
        worst = std::min(worst, reduced_row[n] - zeta[n]);
    }
    return linear + worst;
}

double dual_sample_value(const DualPoint& zeta, std::span<const double> reduced_row,
                         const DiscreteMeasure& mu) {
    const std::vector<double> masses = mu.upper_masses();
    return dual_sample_value(zeta.zeta(), reduced_row, masses);
}

void supergradient_sample(std::span<const double> zeta, std::span<const double> reduced_row,
                          std::span<const double> upper_masses, std::span<double> out) {
    check_dims(zeta.size(), reduced_row.size(), upper_masses.size());
    for (std::size_t n = 0; n < zeta.size(); ++n) out[n] = upper_masses[n];
    const int arg = first_negative_argmin(zeta, reduced_row);
    if (arg >= 0) out[static_cast<std::size_t>(arg)] -= 1.0;
}

std::vector<double> supergradient_sample(const DualPoint& zeta,
                                         std::span<const double> reduced_row,
                                         const DiscreteMeasure& mu) {
    const std::vector<double> masses = mu.upper_masses();
    std::vector<double> out(zeta.zeta().size());
    supergradient_sample(zeta.zeta(), reduced_row, masses, out);
    return out;
}

McEstimate dual_estimate(const DualPoint& zeta, const CostMatrix& costs,
                         const DiscreteMeasure& mu) {
    if (costs.rows == 0) throw EmptyBatch("dual_estimate: empty cost matrix");
    if (zeta.size() != costs.levels - 1 || mu.size() != costs.levels)
        throw DimensionMismatch("dual_estimate: zeta/mu do not match the cost matrix");
    const std::vector<double> masses = mu.upper_masses();
    Welford acc;
    for (std::size_t i = 0; i < costs.rows; ++i)
        acc.add(dual_sample_value(zeta.zeta(), costs.reduced_row(i), masses));
    return {acc.mean, acc.std_error()};
}

namespace {

// One scenario of the training stream, evaluated straight into a reduced row.
struct ScenarioKitchen {
    const BsParams& params;
    const PayoffLadder& ladder;
    CounterRng rng;
    double sqrt_t, lambda, x_drift, g_drift;
    std::vector<double> g;

    ScenarioKitchen(const BsParams& p, const PayoffLadder& l, SeededStream s)
        : params(p),
          ladder(l),
          rng(s),
          sqrt_t(std::sqrt(p.horizon)),
          lambda(p.risk_premium()),
          x_drift((p.drift - 0.5 * p.sigma * p.sigma) * p.horizon),
          g_drift(-0.5 * lambda * lambda * p.horizon),
          g(static_cast<std::size_t>(l.size())) {}

    // Fills row with Gamma*(g^{n+1} - g^1) for counter i; returns Gamma*g^1.
    double reduced_row(std::uint64_t i, std::span<double> row) {
        const double w = sqrt_t * rng.normal(i);
        const double x = params.x0 * std::exp(x_drift + params.sigma * w);
        const double gamma = std::exp(g_drift - lambda * w);
        ladder.evaluate_into(x, g);
        const double base = gamma * g[0];
        for (std::size_t n = 0; n + 1 < g.size(); ++n) row[n] = gamma * g[n + 1] - base;
        return base;
    }
};

std::vector<double> initial_point(const SgaConfig& config, const BsParams& params,
                                  const PayoffLadder& ladder, const DiscreteMeasure& mu,
                                  const StreamPlan& plan) {
    const int dim = ladder.size() - 1;
    const ScenarioBatch pilot =
        simulate_bs(params, static_cast<std::size_t>(config.pilot_size), plan.pilot());
    const CostMatrix costs = build_costs(ladder, pilot);

    std::vector<double> start(static_cast<std::size_t>(dim), 0.0);
    if (config.init == DualInit::pilot_mean) {
        for (std::size_t i = 0; i < costs.rows; ++i) {
            const auto row = costs.reduced_row(i);
            for (int n = 0; n < dim; ++n) start[static_cast<std::size_t>(n)] += row[n];
        }
        for (double& s : start) s /= static_cast<double>(costs.rows);
        return project_to_cone(start);
    }

    std::vector<double> column(costs.rows);
    if (config.init == DualInit::pilot_quantile) {
        // Component n starts at the F_mu(n+2)... survival-of-upper-level
        // quantile of its own reduced column: exact for two-level ladders,
        // scale-aware in general.
        for (int n = 0; n < dim; ++n) {
            for (std::size_t i = 0; i < costs.rows; ++i) column[i] = costs.reduced_row(i)[n];
            std::sort(column.begin(), column.end());
            start[static_cast<std::size_t>(n)] = quantile_sorted(column, mu.survival(n + 2));
        }
        return project_to_cone(start);
    }

    // uniform_random: coordinate n uniform on [0, max pilot reduced column n].
    const CounterRng extra(SeededStream{plan.seed, plan.base + 4});
    for (int n = 0; n < dim; ++n) {
        double hi = 0.0;
        for (std::size_t i = 0; i < costs.rows; ++i) hi = std::max(hi, costs.reduced_row(i)[n]);
        start[static_cast<std::size_t>(n)] =
            hi * extra.uniform(static_cast<std::uint64_t>(n));
    }
    return project_to_cone(start);
}

}  // namespace

SgaResult adam_run(const SgaConfig& config, const BsParams& params, const PayoffLadder& ladder,
                   const DiscreteMeasure& mu, std::optional<DualPoint> zeta0) {
    config.validate();
    if (mu.size() != ladder.size())
        throw DimensionMismatch("adam_run: measure has " + std::to_string(mu.size()) +
                                " levels, ladder has " + std::to_string(ladder.size()));
    SgaResult result;
    const int dim = ladder.size() - 1;
    if (dim == 0) {
        result.zeta_star = DualPoint();
        return result;
    }

    const StreamPlan plan{config.seed, 0};
    std::vector<double> zeta = zeta0 ? zeta0->zeta()
                                     : initial_point(config, params, ladder, mu, plan);
    if (static_cast<int>(zeta.size()) != dim)
        throw DimensionMismatch("adam_run: zeta0 has wrong dimension");

    const std::vector<double> masses = mu.upper_masses();
    std::vector<double> mom1(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> mom2(static_cast<std::size_t>(dim), 0.0);
    std::vector<double> grad(static_cast<std::size_t>(dim));
    std::vector<double> row(static_cast<std::size_t>(dim));
    std::vector<double> next(static_cast<std::size_t>(dim));

    ScenarioKitchen kitchen(params, ladder, plan.training());
    const std::size_t batch = static_cast<std::size_t>(config.batch);
    double beta1_pow = 1.0;
    double beta2_pow = 1.0;

    int used = 0;
    for (int m = 1; m <= config.max_iter; ++m) {
        // Batch-average supergradient: the mass vector minus the hit
        // frequency of each active minimum.
        std::fill(grad.begin(), grad.end(), 0.0);
        const std::uint64_t offset = static_cast<std::uint64_t>(m - 1) * batch;
        for (std::size_t b = 0; b < batch; ++b) {
            kitchen.reduced_row(offset + b, row);
            const int arg = first_negative_argmin(zeta, row);
            if (arg >= 0) grad[static_cast<std::size_t>(arg)] += 1.0;
        }
        for (int n = 0; n < dim; ++n) {
            const std::size_t k = static_cast<std::size_t>(n);
            grad[k] = masses[k] - grad[k] / static_cast<double>(batch);
        }

        beta1_pow *= config.beta1;
        beta2_pow *= config.beta2;
        double eta = config.eta0;
        if (config.schedule == StepSchedule::inverse_t) eta /= static_cast<double>(m);
        else if (config.schedule == StepSchedule::inverse_sqrt) eta /= std::sqrt(static_cast<double>(m));

        for (int n = 0; n < dim; ++n) {
            const std::size_t k = static_cast<std::size_t>(n);
            mom1[k] = config.beta1 * mom1[k] + (1.0 - config.beta1) * grad[k];
            mom2[k] = config.beta2 * mom2[k] + (1.0 - config.beta2) * grad[k] * grad[k];
            const double m_hat = mom1[k] / (1.0 - beta1_pow);
            const double v_hat = mom2[k] / (1.0 - beta2_pow);
            // Ascent: the integrand is concave and grad is a supergradient.
            next[k] = zeta[k] + eta * m_hat / (std::sqrt(v_hat) + config.epsilon);
        }
        next = project_to_cone(next);

        double step = 0.0;
        for (int n = 0; n < dim; ++n)
            step = std::max(step, std::fabs(next[static_cast<std::size_t>(n)] -
                                            zeta[static_cast<std::size_t>(n)]));
        zeta = next;
        used = m;
        if (config.record_trace) result.trace.push_back({zeta, step});
        if (step < config.stop_tol) {
            result.stopped_early = true;
            break;
        }
    }
    result.iterations_used = used;
    result.zeta_star = DualPoint::from_feasible(std::move(zeta));
    return result;
}

PriceEstimate price_on_batch(const DualPoint& zeta_star, const PayoffLadder& ladder,
                             const DiscreteMeasure& mu, const ScenarioBatch& batch) {
    if (batch.size() == 0) throw EmptyBatch("price_on_batch: empty batch");
    if (zeta_star.size() != ladder.size() - 1 || mu.size() != ladder.size())
        throw DimensionMismatch("price_on_batch: dimensions disagree");
    const std::vector<double> masses = mu.upper_masses();
    const std::span<const double> zeta = zeta_star.zeta();
    std::vector<double> g(static_cast<std::size_t>(ladder.size()));
    std::vector<double> row(static_cast<std::size_t>(ladder.size() - 1));

    Welford combined;
    double base_sum = 0.0;
    double dual_sum = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        ladder.evaluate_into(batch.x_terminal[i], g);
        const double gamma = batch.kernel[i];
        const double base = gamma * g[0];
        for (std::size_t n = 0; n + 1 < g.size(); ++n) row[n] = gamma * g[n + 1] - base;
        const double dual = row.empty() ? 0.0 : dual_sample_value(zeta, row, masses);
        base_sum += base;
        dual_sum += dual;
        combined.add(base + dual);
    }
    PriceEstimate est;
    est.sample_count = batch.size();
    est.base_term = base_sum / static_cast<double>(batch.size());
    est.dual_term = dual_sum / static_cast<double>(batch.size());
    est.value = est.base_term + est.dual_term;
    est.std_error = combined.std_error();
    return est;
}

PriceEstimate price_with_ci(const DualPoint& zeta_star, const BsParams& params,
                            const PayoffLadder& ladder, const DiscreteMeasure& mu,
                            std::size_t eval_count, SeededStream stream) {
    if (eval_count == 0) throw EmptyBatch("price_with_ci: eval_count must be >= 1");
    const ScenarioBatch batch = simulate_bs(params, eval_count, stream);
    return price_on_batch(zeta_star, ladder, mu, batch);
}

}  // namespace mqh
