#ifndef MQH_PAYOFFS_HPP
#define MQH_PAYOFFS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "mqh/market.hpp"

namespace mqh {

// One rung of a ladder: vanilla payoff plus a constant offset.
struct PayoffLevel {
    PayoffKind kind = PayoffKind::zero;
    double strike = 0.0;
    double offset = 0.0;

    double operator()(double x) const {
        switch (kind) {
            case PayoffKind::call: return (x > strike ? x - strike : 0.0) + offset;
            case PayoffKind::put: return (x < strike ? strike - x : 0.0) + offset;
            default: return offset;
        }
    }
};

// Monotone claim ladder g^1 <= ... <= g^N on [0, infinity). Monotonicity is
// certified at construction: the pairwise differences are piecewise linear,
// so checking the breakpoints and the asymptotic slope is exact. A dense-grid
// sweep over [0, 10*scale] (step scale/1000) guards future payoff kinds.
class PayoffLadder {
  public:
    static PayoffLadder from_levels(std::vector<PayoffLevel> levels, double grid_scale = 0.0);

    // PnL-hedging form: every level is the same vanilla claim shifted by a
    // strictly increasing offset.
    static PayoffLadder pnl(PayoffKind base, double strike, const std::vector<double>& offsets);

    int size() const { return static_cast<int>(levels_.size()); }
    const std::vector<PayoffLevel>& levels() const { return levels_; }

    // Values (g^1(x), ..., g^N(x)); rechecks monotonicity of the output.
    std::vector<double> evaluate(double x) const;
    // Hot-path variant, out.size() == size().
    void evaluate_into(double x, std::span<double> out) const;

    bool is_pnl_form() const { return pnl_form_; }

  private:
    PayoffLadder(std::vector<PayoffLevel> levels, bool pnl_form)
        : levels_(std::move(levels)), pnl_form_(pnl_form) {}
    std::vector<PayoffLevel> levels_;
    bool pnl_form_ = false;
};

// Per-scenario transport costs H^n = Gamma_T * g^n(X_T), plus the reduced
// columns H^{n+1} - H^1 used by the dual. Row-major storage.
struct CostMatrix {
    std::size_t rows = 0;
    int levels = 0;
    std::vector<double> values;   // rows x levels
    std::vector<double> reduced;  // rows x (levels - 1)

    std::span<const double> value_row(std::size_t i) const {
        return {values.data() + i * static_cast<std::size_t>(levels),
                static_cast<std::size_t>(levels)};
    }
    std::span<const double> reduced_row(std::size_t i) const {
        const std::size_t w = static_cast<std::size_t>(levels - 1);
        return {reduced.data() + i * w, w};
    }
};

CostMatrix build_costs(const PayoffLadder& ladder, const ScenarioBatch& batch);

}  // namespace mqh

#endif  // MQH_PAYOFFS_HPP
