#ifndef MQH_FINITE_LP_HPP
#define MQH_FINITE_LP_HPP

#include <vector>

#include "mqh/measures.hpp"

namespace mqh {

// Explicit finite probability space with one cost column per target level.
struct FiniteInstance {
    std::vector<double> omega_weights;      // size M, strictly positive, sums to 1
    std::vector<std::vector<double>> cost;  // M rows of N costs
    DiscreteMeasure mu;

    FiniteInstance(std::vector<double> weights, std::vector<std::vector<double>> cost_rows,
                   DiscreteMeasure target);

    std::size_t scenario_count() const { return omega_weights.size(); }
    int level_count() const { return mu.size(); }
    bool rows_monotone() const;
};

// Optimal randomized assignment with its exact dual certificate.
struct FiniteSolution {
    double primal_value = 0.0;
    // assignment[i][n]: conditional mass scenario i sends to level n+1.
    // Rows sum to 1; the weight-averaged columns reproduce mu.
    std::vector<std::vector<double>> assignment;
    double dual_value = 0.0;
    std::vector<double> potentials;  // N nonnegative dual potentials
};

// Exact transportation LP between (omega_weights) and mu with the given cost.
// Solved in rational arithmetic (Bland pivoting), so the strong-duality gap
// of the returned certificate is zero up to double conversion.
FiniteSolution finite_kp_exact(const FiniteInstance& inst);

// Same solver on a raw target vector; zero target masses are allowed here.
FiniteSolution transport_lp(const std::vector<double>& weights,
                            const std::vector<std::vector<double>>& cost,
                            const std::vector<double>& target);

struct MongeResult {
    bool feasible = false;
    double value = 0.0;
};

// Brute-force Monge value over all maps scenario -> level whose push-forward
// equals mu exactly (relax = false) or dominates it (relax = true).
MongeResult finite_mp_exact(const FiniteInstance& inst, bool relax);

// Verifies on a rational grid of the simplex (denominator grid_denominator)
// that no measure dominating mu achieves a cheaper transport value: the
// saturation property for monotone cost rows.
bool finite_saturation_check(const FiniteInstance& inst, int grid_denominator);

}  // namespace mqh

#endif  // MQH_FINITE_LP_HPP
