#ifndef MQH_CONFIG_HPP
#define MQH_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mqh/dual_sga.hpp"
#include "mqh/finite_lp.hpp"
#include "mqh/market.hpp"
#include "mqh/measures.hpp"
#include "mqh/payoffs.hpp"

namespace mqh {

// Declarative ladder description, kept so configs echo back exactly.
struct LadderSpec {
    enum class Form { pnl, levels };
    Form form = Form::pnl;
    // pnl form
    PayoffKind base_kind = PayoffKind::call;
    double base_strike = 0.0;
    std::vector<double> offsets;
    // levels form
    std::vector<PayoffLevel> levels;

    PayoffLadder build(double grid_scale) const;
};

struct RunConfig {
    double x0 = 100.0, drift = 0.1, sigma = 0.2, rate = 0.0, horizon = 1.0;
    LadderSpec ladder;
    std::vector<double> mu_atoms;
    SgaConfig sga;
    std::size_t eval_count = 1000000;
    std::uint64_t seed = 0;
    std::optional<std::string> out;

    BsParams market() const { return BsParams(x0, drift, sigma, rate, horizon); }
    DiscreteMeasure build_mu() const { return DiscreteMeasure::validated(mu_atoms); }
    PayoffLadder build_ladder() const { return ladder.build(x0); }
};

// Strict parsers: unknown keys are rejected, errors carry the field path.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json run_config_to_json(const RunConfig& cfg);

struct RunReport {
    RunConfig config;
    PriceEstimate price;
    std::vector<double> zeta_star;
    int iterations_used = 0;
    bool stopped_early = false;
    std::optional<double> oracle_pnl_semianalytic;
    std::optional<double> oracle_qh_dual;
    double wall_clock_seconds = 0.0;
    std::string version;
};

// canonical = true omits the wall-clock field so outputs can be compared
// byte for byte across runs.
nlohmann::json report_to_json(const RunReport& report, bool canonical);
RunReport report_from_json(const nlohmann::json& j);

// Finite-instance JSON exchange for `mqh validate --instances`.
nlohmann::json finite_instance_to_json(const FiniteInstance& inst);
FiniteInstance finite_instance_from_json(const nlohmann::json& j);
std::vector<FiniteInstance> load_finite_instances(const std::string& path);

extern const char* const kVersion;

}  // namespace mqh

#endif  // MQH_CONFIG_HPP
