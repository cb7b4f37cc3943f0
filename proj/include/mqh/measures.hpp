#ifndef MQH_MEASURES_HPP
#define MQH_MEASURES_HPP

#include <vector>

namespace mqh {

// Probability measure on the levels {1,...,N}. Levels are 1-based in the
// documentation; storage is 0-based.
class DiscreteMeasure {
  public:
    // Validating constructor: every atom must be strictly positive and the
    // atoms must sum to 1 within 1e-12.
    static DiscreteMeasure validated(std::vector<double> atoms);

    // Same normalization check, but atoms may be zero. Degenerate levels fall
    // outside the duality theorem's hypotheses; this entry point exists for
    // boundary experiments (e.g. quantile grids including p = 0 and p = 1).
    static DiscreteMeasure with_boundary_levels(std::vector<double> atoms);

    int size() const { return static_cast<int>(atoms_.size()); }
    const std::vector<double>& atoms() const { return atoms_; }
    double atom(int level) const;  // level in 1..N

    // Survival mass at a level: sum of atoms at that level and above.
    double survival(int level) const;  // level in 1..N

    // Masses of levels 2..N, the coefficients of the reduced dual variable.
    std::vector<double> upper_masses() const;

  private:
    explicit DiscreteMeasure(std::vector<double> atoms) : atoms_(std::move(atoms)) {}
    std::vector<double> atoms_;
};

inline DiscreteMeasure validate_measure(std::vector<double> atoms) {
    return DiscreteMeasure::validated(std::move(atoms));
}

// Survival function values F(1..N); F(1) = 1, nonincreasing, increments equal
// the atoms.
struct SurvivalCurve {
    std::vector<double> values;
};

SurvivalCurve survival_curve(const DiscreteMeasure& m);

// First-order stochastic dominance: F_nu >= F_mu at every level.
bool dominates(const DiscreteMeasure& nu, const DiscreteMeasure& mu);

// Euclidean projection onto the ordered nonnegative cone
// {0 <= z_1 <= ... <= z_k}: pool-adjacent-violators isotonic regression
// followed by clamping at zero (exact because the lower bound is a constant).
std::vector<double> project_to_cone(const std::vector<double>& v);

// Dual variable for the reduced maximization, constrained to the ordered
// nonnegative cone. May be empty (single-level ladders have no dual part).
class DualPoint {
  public:
    DualPoint() = default;

    // Projects onto the cone.
    static DualPoint projected(const std::vector<double>& v);
    // Accepts a point already in the cone within tolerance 1e-12.
    static DualPoint from_feasible(std::vector<double> v);

    int size() const { return static_cast<int>(zeta_.size()); }
    const std::vector<double>& zeta() const { return zeta_; }

  private:
    explicit DualPoint(std::vector<double> z) : zeta_(std::move(z)) {}
    std::vector<double> zeta_;
};

}  // namespace mqh

#endif  // MQH_MEASURES_HPP
