#ifndef MQH_VALIDATION_HPP
#define MQH_VALIDATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mqh/finite_lp.hpp"
#include "mqh/rng.hpp"

namespace mqh {

struct PropertyResult {
    std::string name;
    long passed = 0;
    long failed = 0;
    std::string detail;  // first failure description, empty when clean

    PropertyResult() = default;
    explicit PropertyResult(std::string property_name) : name(std::move(property_name)) {}
    bool ok() const { return failed == 0; }
};

// Random-instance generators shared by the validate command, the acceptance
// suite and the unit tests.
struct InstanceOptions {
    int min_scenarios = 2;
    int max_scenarios = 8;
    int min_levels = 2;
    int max_levels = 4;
    bool monotone_rows = true;
    // Uniform scenario weights with a target on the 1/M grid; the optimal
    // transport vertex is then integral by network-flow integrality.
    bool grid_aligned = false;
};

FiniteInstance random_finite_instance(RandomSequence& rs, const InstanceOptions& opts);

std::vector<PropertyResult> run_measures_suite(std::uint64_t seed);
std::vector<PropertyResult> run_duality_suite(std::uint64_t seed);
std::vector<PropertyResult> run_finite_suite(std::uint64_t seed, int zero_gap_instances = 1000,
                                             int saturation_instances = 200);
// Replays user-supplied instances through the zero-gap / ordering /
// saturation checks (saturation only for monotone rows).
std::vector<PropertyResult> run_instance_file_suite(const std::vector<FiniteInstance>& instances);

}  // namespace mqh

#endif  // MQH_VALIDATION_HPP
