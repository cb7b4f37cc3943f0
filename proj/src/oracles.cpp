#include "mqh/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "mqh/errors.hpp"
#include "mqh/normal.hpp"

namespace mqh {

namespace {

void check_gamma(std::span<const double> gamma, const DiscreteMeasure& mu) {
    if (static_cast<int>(gamma.size()) != mu.size())
        throw DimensionMismatch("offsets and measure disagree: " + std::to_string(gamma.size()) +
                                " vs " + std::to_string(mu.size()));
    for (std::size_t n = 0; n + 1 < gamma.size(); ++n)
        if (!(gamma[n] < gamma[n + 1]))
            throw MonotonicityViolation("offsets must be strictly increasing");
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

}  // namespace

double pnl_ot_semianalytic(const BsParams& params, PayoffKind base, double strike,
                           std::span<const double> gamma, const DiscreteMeasure& mu) {
    check_gamma(gamma, mu);
    const double lambda = params.risk_premium();
    if (lambda == 0.0)
        throw DegenerateKernel(
            "risk premium is zero: the kernel law has an atom, use pnl_ot_mc instead");
    const double shift = lambda * std::sqrt(params.horizon);
    const int n_levels = mu.size();

    // Kernel-weighted mass of the band assigned to each level. A_n accumulates
    // the target masses; the sign of the risk premium orients the bands.
    double value = bs_vanilla_price(params, base, strike);
    double cum = 0.0;
    double prev_edge = 0.0;
    for (int n = 1; n <= n_levels; ++n) {
        cum += mu.atom(n);
        const double a = std::min(cum, 1.0);
        double edge;
        if (a >= 1.0) {
            edge = 1.0;
        } else if (lambda > 0.0) {
            edge = normal_cdf(normal_quantile(a) + shift);
        } else {
            edge = 1.0 - normal_cdf(-normal_quantile(a) + shift);
        }
        value += gamma[static_cast<std::size_t>(n - 1)] * (edge - prev_edge);
        prev_edge = edge;
    }
    return value;
}

McEstimate pnl_ot_mc(const ScenarioBatch& batch, PayoffKind base, double strike,
                     std::span<const double> gamma, const DiscreteMeasure& mu) {
    check_gamma(gamma, mu);
    const std::size_t m = batch.size();
    if (m == 0) throw EmptyBatch("pnl_ot_mc: empty batch");

    // Sort scenario indices by decreasing kernel (ties broken by index so the
    // estimate is deterministic).
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (batch.kernel[a] != batch.kernel[b]) return batch.kernel[a] > batch.kernel[b];
        return a < b;
    });

    const PayoffLevel payoff{base, strike, 0.0};
    std::vector<double> cuts(static_cast<std::size_t>(mu.size()));
    double cum = 0.0;
    for (int n = 1; n <= mu.size(); ++n) {
        cum += mu.atom(n);
        cuts[static_cast<std::size_t>(n - 1)] = cum;
    }
    cuts.back() = 1.0;

    Welford acc;
    int level = 0;
    for (std::size_t rank = 0; rank < m; ++rank) {
        const double u = static_cast<double>(rank + 1) / static_cast<double>(m);
        while (u > cuts[static_cast<std::size_t>(level)] + 1e-15) ++level;
        const std::size_t i = order[rank];
        acc.add(batch.kernel[i] *
                (payoff(batch.x_terminal[i]) + gamma[static_cast<std::size_t>(level)]));
    }
    return {acc.mean, acc.std_error()};
}

double qh_dual_1d(const ScenarioBatch& batch, const PayoffLadder& ladder, double p) {
    if (batch.size() == 0) throw EmptyBatch("qh_dual_1d: empty batch");
    if (ladder.size() != 2) throw Error("qh_dual_1d: needs a two-level ladder");
    const PayoffLevel& lower = ladder.levels()[0];
    if (lower.kind != PayoffKind::zero || lower.offset != 0.0)
        throw Error("qh_dual_1d: lower level must be identically zero");
    if (p < 0.0 || p > 1.0) throw Error("qh_dual_1d: p must lie in [0,1]");

    const PayoffLevel& upper = ladder.levels()[1];
    std::vector<double> v(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i)
        v[i] = batch.kernel[i] * upper(batch.x_terminal[i]);
    std::sort(v.begin(), v.end());

    double threshold = 0.0;
    if (p > 0.0) {
        std::size_t k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(v.size())));
        k = std::min(std::max<std::size_t>(k, 1), v.size());
        threshold = v[k - 1];
    }
    double value = threshold * p;
    double negative_part = 0.0;
    for (double x : v) negative_part += std::min(x - threshold, 0.0);
    return value + negative_part / static_cast<double>(v.size());
}

}  // namespace mqh
