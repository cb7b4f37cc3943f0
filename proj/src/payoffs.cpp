#include "mqh/payoffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mqh/errors.hpp"

namespace mqh {

namespace {

double asymptotic_slope(const PayoffLevel& l) {
    return l.kind == PayoffKind::call ? 1.0 : 0.0;
}

// Exact nonnegativity check of g_{n+1} - g_n on [0, inf): the difference is
// piecewise linear with kinks only at the two strikes.
void check_pair_monotone(const PayoffLevel& lo, const PayoffLevel& hi, int n) {
    std::vector<double> points{0.0};
    if (lo.kind != PayoffKind::zero) points.push_back(lo.strike);
    if (hi.kind != PayoffKind::zero) points.push_back(hi.strike);
    for (double x : points) {
        if (hi(x) < lo(x))
            throw MonotonicityViolation("ladder decreases between levels " + std::to_string(n) +
                                        " and " + std::to_string(n + 1) + " at x = " +
                                        std::to_string(x));
    }
    if (asymptotic_slope(hi) < asymptotic_slope(lo))
        throw MonotonicityViolation("ladder decreases between levels " + std::to_string(n) +
                                    " and " + std::to_string(n + 1) + " for large x");
}

void check_grid_monotone(const std::vector<PayoffLevel>& levels, double scale) {
    const double step = scale / 1000.0;
    for (double x = 0.0; x <= 10.0 * scale; x += step) {
        double prev = levels.front()(x);
        for (std::size_t n = 1; n < levels.size(); ++n) {
            const double cur = levels[n](x);
            if (cur < prev)
                throw MonotonicityViolation("ladder decreases at grid point x = " +
                                            std::to_string(x));
            prev = cur;
        }
    }
}

}  // namespace

PayoffLadder PayoffLadder::from_levels(std::vector<PayoffLevel> levels, double grid_scale) {
    if (levels.empty()) throw Error("ladder needs at least one level");
    for (const auto& l : levels) {
        if (l.kind != PayoffKind::zero && l.strike < 0.0)
            throw Error("ladder strike must be nonnegative");
    }
    for (std::size_t n = 0; n + 1 < levels.size(); ++n)
        check_pair_monotone(levels[n], levels[n + 1], static_cast<int>(n + 1));
    if (grid_scale > 0.0) check_grid_monotone(levels, grid_scale);
    return PayoffLadder(std::move(levels), false);
}

PayoffLadder PayoffLadder::pnl(PayoffKind base, double strike,
                               const std::vector<double>& offsets) {
    if (offsets.empty()) throw Error("pnl ladder needs at least one offset");
    if (base != PayoffKind::zero && strike < 0.0) throw Error("ladder strike must be nonnegative");
    for (std::size_t n = 0; n + 1 < offsets.size(); ++n) {
        if (!(offsets[n] < offsets[n + 1]))
            throw MonotonicityViolation("pnl offsets must be strictly increasing");
    }
    std::vector<PayoffLevel> levels;
    levels.reserve(offsets.size());
    for (double c : offsets) levels.push_back({base, strike, c});
    return PayoffLadder(std::move(levels), true);
}

std::vector<double> PayoffLadder::evaluate(double x) const {
    std::vector<double> out(static_cast<std::size_t>(size()));
    evaluate_into(x, out);
    return out;
}

void PayoffLadder::evaluate_into(double x, std::span<double> out) const {
    if (x < 0.0) throw Error("ladder evaluated at negative price");
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < levels_.size(); ++n) {
        out[n] = levels_[n](x);
        if (out[n] < prev)
            throw MonotonicityViolation("ladder output decreases at level " +
                                        std::to_string(n + 1));
        prev = out[n];
    }
}

CostMatrix build_costs(const PayoffLadder& ladder, const ScenarioBatch& batch) {
    if (batch.size() == 0) throw EmptyBatch("build_costs: empty batch");
    const int n_levels = ladder.size();
    CostMatrix costs;
    costs.rows = batch.size();
    costs.levels = n_levels;
    costs.values.resize(costs.rows * static_cast<std::size_t>(n_levels));
    costs.reduced.resize(costs.rows * static_cast<std::size_t>(n_levels - 1));

    std::vector<double> g(static_cast<std::size_t>(n_levels));
    for (std::size_t i = 0; i < costs.rows; ++i) {
        ladder.evaluate_into(batch.x_terminal[i], g);
        const double gamma = batch.kernel[i];
        double* value_row = costs.values.data() + i * static_cast<std::size_t>(n_levels);
        double* reduced_row = costs.reduced.data() + i * static_cast<std::size_t>(n_levels - 1);
        for (int n = 0; n < n_levels; ++n) value_row[n] = gamma * g[static_cast<std::size_t>(n)];
        // Computed as the exact column difference so the reduced-row identity
        // holds without floating-point slack; nonnegative since Gamma > 0 and
        // multiplication by a positive factor preserves the order.
        for (int n = 0; n + 1 < n_levels; ++n) reduced_row[n] = value_row[n + 1] - value_row[0];
    }
    return costs;
}

}  // namespace mqh
