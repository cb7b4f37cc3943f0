#include "mqh/market.hpp"

#include <cmath>

#include "mqh/errors.hpp"
#include "mqh/normal.hpp"

namespace mqh {

BsParams::BsParams(double x0_, double drift_, double sigma_, double rate_, double horizon_)
    : x0(x0_), drift(drift_), sigma(sigma_), rate(rate_), horizon(horizon_) {
    if (!(x0 > 0.0)) throw Error("BsParams: x0 must be positive");
    if (!(sigma > 0.0)) throw Error("BsParams: sigma must be positive");
    if (!(horizon > 0.0)) throw Error("BsParams: horizon must be positive");
}

double ScenarioBatch::max_reconstruction_error(const BsParams& params) const {
    const double lambda = params.risk_premium();
    const double t = params.horizon;
    const double x_drift = (params.drift - 0.5 * params.sigma * params.sigma) * t;
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        const double w = brownian[i];
        const double x = params.x0 * std::exp(x_drift + params.sigma * w);
        const double g = std::exp(-lambda * w - 0.5 * lambda * lambda * t);
        const double ex = std::fabs(x_terminal[i] - x) / x;
        const double eg = std::fabs(kernel[i] - g) / g;
        worst = std::max(worst, std::max(ex, eg));
    }
    return worst;
}

ScenarioBatch simulate_bs(const BsParams& params, std::size_t count, SeededStream stream) {
    if (count == 0) throw EmptyBatch("simulate_bs: count must be >= 1");
    ScenarioBatch batch;
    batch.stream = stream;
    batch.x_terminal.resize(count);
    batch.kernel.resize(count);
    batch.brownian.resize(count);

    const CounterRng rng(stream);
    const double t = params.horizon;
    const double sqrt_t = std::sqrt(t);
    const double lambda = params.risk_premium();
    const double x_drift = (params.drift - 0.5 * params.sigma * params.sigma) * t;
    const double g_drift = -0.5 * lambda * lambda * t;
    for (std::size_t i = 0; i < count; ++i) {
        const double w = sqrt_t * rng.normal(i);
        batch.brownian[i] = w;
        batch.x_terminal[i] = params.x0 * std::exp(x_drift + params.sigma * w);
        batch.kernel[i] = std::exp(g_drift - lambda * w);
    }
    return batch;
}

double bs_vanilla_price(const BsParams& params, PayoffKind kind, double strike) {
    if (strike < 0.0) throw Error("bs_vanilla_price: strike must be nonnegative");
    if (kind == PayoffKind::zero) return 0.0;
    const double t = params.horizon;
    const double forward = params.x0 * std::exp(params.rate * t);
    if (strike == 0.0) return kind == PayoffKind::call ? forward : 0.0;
    const double vol = params.sigma * std::sqrt(t);
    const double d1 = (std::log(params.x0 / strike) + (params.rate + 0.5 * params.sigma * params.sigma) * t) / vol;
    const double d2 = d1 - vol;
    if (kind == PayoffKind::call) return forward * normal_cdf(d1) - strike * normal_cdf(d2);
    return strike * normal_cdf(-d2) - forward * normal_cdf(-d1);
}

}  // namespace mqh
