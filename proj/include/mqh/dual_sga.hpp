#ifndef MQH_DUAL_SGA_HPP
#define MQH_DUAL_SGA_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mqh/market.hpp"
#include "mqh/measures.hpp"
#include "mqh/payoffs.hpp"

namespace mqh {

enum class StepSchedule { constant, inverse_t, inverse_sqrt };
enum class DualInit { pilot_quantile, pilot_mean, uniform_random };

struct SgaConfig {
    int max_iter = 100000;
    int batch = 256;
    double eta0 = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double stop_tol = 1e-6;
    StepSchedule schedule = StepSchedule::constant;
    DualInit init = DualInit::pilot_quantile;
    int pilot_size = 65536;
    bool record_trace = false;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SgaTraceEntry {
    std::vector<double> zeta;
    double step_inf_norm;
};

struct SgaResult {
    DualPoint zeta_star;
    int iterations_used = 0;
    bool stopped_early = false;
    std::vector<SgaTraceEntry> trace;  // filled only when record_trace is set
};

struct PriceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    double base_term = 0.0;  // mean of Gamma * g^1(X)
    double dual_term = 0.0;  // mean of the dual integrand at zeta_star
    std::size_t sample_count = 0;
};

// Per-sample dual integrand:
//   sum_n zeta^n * mass(level n+1)  +  min_n min(reduced^n - zeta^n, 0).
// Concave and piecewise linear in zeta; always bounded by the linear term.
double dual_sample_value(std::span<const double> zeta, std::span<const double> reduced_row,
                         std::span<const double> upper_masses);
double dual_sample_value(const DualPoint& zeta, std::span<const double> reduced_row,
                         const DiscreteMeasure& mu);

// Supergradient of the integrand above: component n is mass(level n+1), minus
// one at the smallest index attaining the minimum when that minimum is
// negative (the strict-before / weak-after tie rule).
void supergradient_sample(std::span<const double> zeta, std::span<const double> reduced_row,
                          std::span<const double> upper_masses, std::span<double> out);
std::vector<double> supergradient_sample(const DualPoint& zeta,
                                         std::span<const double> reduced_row,
                                         const DiscreteMeasure& mu);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Sample mean and standard error of the dual integrand over a cost matrix.
McEstimate dual_estimate(const DualPoint& zeta, const CostMatrix& costs,
                         const DiscreteMeasure& mu);

// Projected ADAM ascent of the dual objective. Every iteration draws a fresh
// batch from its own counter range, so the run is reproducible bit for bit.
// When zeta0 is absent the start point comes from a pilot batch per
// config.init.
SgaResult adam_run(const SgaConfig& config, const BsParams& params, const PayoffLadder& ladder,
                   const DiscreteMeasure& mu, std::optional<DualPoint> zeta0 = std::nullopt);

// Price estimate at a fixed dual point on a fresh evaluation batch.
PriceEstimate price_with_ci(const DualPoint& zeta_star, const BsParams& params,
                            const PayoffLadder& ladder, const DiscreteMeasure& mu,
                            std::size_t eval_count, SeededStream stream);

// Same estimate on a caller-supplied batch (lets an oracle share the batch).
PriceEstimate price_on_batch(const DualPoint& zeta_star, const PayoffLadder& ladder,
                             const DiscreteMeasure& mu, const ScenarioBatch& batch);

// Stream indices reserved per run so pilot, training and evaluation draws
// never overlap.
struct StreamPlan {
    std::uint64_t seed = 0;
    std::uint64_t base = 0;
    SeededStream pilot() const { return {seed, base + 1}; }
    SeededStream training() const { return {seed, base + 2}; }
    SeededStream evaluation() const { return {seed, base + 3}; }
};

}  // namespace mqh

#endif  // MQH_DUAL_SGA_HPP
