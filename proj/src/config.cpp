#include "mqh/config.hpp"

#include <fstream>
#include <set>

#include "mqh/errors.hpp"

namespace mqh {

const char* const kVersion = "mqh 1.0.0";

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& path, std::set<std::string> allowed) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) throw ConfigError(path + "." + item.key(), "unknown key");
    }
}

const json& require(const json& j, const std::string& path, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(path + "." + key, "missing");
    return *it;
}

double as_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError(path, "expected a number");
    return j.get<double>();
}

std::int64_t as_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::string as_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> as_number_array(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

PayoffKind parse_kind(const json& j, const std::string& path) {
    const std::string s = as_string(j, path);
    if (s == "call") return PayoffKind::call;
    if (s == "put") return PayoffKind::put;
    if (s == "zero") return PayoffKind::zero;
    throw ConfigError(path, "expected one of call|put|zero");
}

const char* kind_name(PayoffKind k) {
    switch (k) {
        case PayoffKind::call: return "call";
        case PayoffKind::put: return "put";
        default: return "zero";
    }
}

StepSchedule parse_schedule(const json& j, const std::string& path) {
    const std::string s = as_string(j, path);
    if (s == "constant") return StepSchedule::constant;
    if (s == "inverse_t") return StepSchedule::inverse_t;
    if (s == "inverse_sqrt") return StepSchedule::inverse_sqrt;
    throw ConfigError(path, "expected one of constant|inverse_t|inverse_sqrt");
}

const char* schedule_name(StepSchedule s) {
    switch (s) {
        case StepSchedule::inverse_t: return "inverse_t";
        case StepSchedule::inverse_sqrt: return "inverse_sqrt";
        default: return "constant";
    }
}

DualInit parse_init(const json& j, const std::string& path) {
    const std::string s = as_string(j, path);
    if (s == "pilot_quantile") return DualInit::pilot_quantile;
    if (s == "pilot_mean") return DualInit::pilot_mean;
    if (s == "uniform_random") return DualInit::uniform_random;
    throw ConfigError(path, "expected one of pilot_quantile|pilot_mean|uniform_random");
}

const char* init_name(DualInit i) {
    switch (i) {
        case DualInit::pilot_mean: return "pilot_mean";
        case DualInit::uniform_random: return "uniform_random";
        default: return "pilot_quantile";
    }
}

LadderSpec parse_ladder(const json& j, const std::string& path) {
    LadderSpec spec;
    const std::string form = as_string(require(j, path, "form"), path + ".form");
    if (form == "pnl") {
        check_keys(j, path, {"form", "base", "offsets"});
        spec.form = LadderSpec::Form::pnl;
        const json& base = require(j, path, "base");
        check_keys(base, path + ".base", {"kind", "strike"});
        spec.base_kind = parse_kind(require(base, path + ".base", "kind"), path + ".base.kind");
        spec.base_strike =
            as_number(require(base, path + ".base", "strike"), path + ".base.strike");
        spec.offsets = as_number_array(require(j, path, "offsets"), path + ".offsets");
    } else if (form == "levels") {
        check_keys(j, path, {"form", "levels"});
        spec.form = LadderSpec::Form::levels;
        const json& levels = require(j, path, "levels");
        if (!levels.is_array()) throw ConfigError(path + ".levels", "expected an array");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const std::string lp = path + ".levels[" + std::to_string(i) + "]";
            check_keys(levels[i], lp, {"kind", "strike", "offset"});
            PayoffLevel level;
            level.kind = parse_kind(require(levels[i], lp, "kind"), lp + ".kind");
            if (levels[i].contains("strike")) level.strike = as_number(levels[i]["strike"], lp + ".strike");
            if (levels[i].contains("offset")) level.offset = as_number(levels[i]["offset"], lp + ".offset");
            spec.levels.push_back(level);
        }
    } else {
        throw ConfigError(path + ".form", "expected pnl or levels");
    }
    return spec;
}

json ladder_to_json(const LadderSpec& spec) {
    json j;
    if (spec.form == LadderSpec::Form::pnl) {
        j["form"] = "pnl";
        j["base"] = {{"kind", kind_name(spec.base_kind)}, {"strike", spec.base_strike}};
        j["offsets"] = spec.offsets;
    } else {
        j["form"] = "levels";
        json levels = json::array();
        for (const auto& l : spec.levels)
            levels.push_back(
                {{"kind", kind_name(l.kind)}, {"strike", l.strike}, {"offset", l.offset}});
        j["levels"] = levels;
    }
    return j;
}

SgaConfig parse_sga(const json& j, const std::string& path) {
    check_keys(j, path,
               {"max_iter", "batch", "eta0", "stop_tol", "beta1", "beta2", "epsilon", "schedule",
                "init", "pilot_size", "record_trace"});
    SgaConfig sga;
    sga.max_iter = static_cast<int>(as_integer(require(j, path, "max_iter"), path + ".max_iter"));
    sga.batch = static_cast<int>(as_integer(require(j, path, "batch"), path + ".batch"));
    sga.eta0 = as_number(require(j, path, "eta0"), path + ".eta0");
    sga.stop_tol = as_number(require(j, path, "stop_tol"), path + ".stop_tol");
    if (j.contains("beta1")) sga.beta1 = as_number(j["beta1"], path + ".beta1");
    if (j.contains("beta2")) sga.beta2 = as_number(j["beta2"], path + ".beta2");
    if (j.contains("epsilon")) sga.epsilon = as_number(j["epsilon"], path + ".epsilon");
    if (j.contains("schedule")) sga.schedule = parse_schedule(j["schedule"], path + ".schedule");
    if (j.contains("init")) sga.init = parse_init(j["init"], path + ".init");
    if (j.contains("pilot_size"))
        sga.pilot_size = static_cast<int>(as_integer(j["pilot_size"], path + ".pilot_size"));
    if (j.contains("record_trace")) {
        if (!j["record_trace"].is_boolean())
            throw ConfigError(path + ".record_trace", "expected a boolean");
        sga.record_trace = j["record_trace"].get<bool>();
    }
    try {
        sga.validate();
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
    return sga;
}

json sga_to_json(const SgaConfig& sga) {
    return json{{"max_iter", sga.max_iter},
                {"batch", sga.batch},
                {"eta0", sga.eta0},
                {"stop_tol", sga.stop_tol},
                {"beta1", sga.beta1},
                {"beta2", sga.beta2},
                {"epsilon", sga.epsilon},
                {"schedule", schedule_name(sga.schedule)},
                {"init", init_name(sga.init)},
                {"pilot_size", sga.pilot_size},
                {"record_trace", sga.record_trace}};
}

}  // namespace

PayoffLadder LadderSpec::build(double grid_scale) const {
    if (form == Form::pnl) return PayoffLadder::pnl(base_kind, base_strike, offsets);
    return PayoffLadder::from_levels(levels, grid_scale);
}

RunConfig parse_run_config(const json& j) {
    check_keys(j, "config",
               {"schema_version", "market", "ladder", "mu", "sga", "eval_count", "seed", "out"});
    const auto version = as_integer(require(j, "config", "schema_version"), "config.schema_version");
    if (version != 1) throw ConfigError("config.schema_version", "unsupported version");

    RunConfig cfg;
    const json& market = require(j, "config", "market");
    check_keys(market, "config.market", {"x0", "drift", "sigma", "rate", "horizon"});
    cfg.x0 = as_number(require(market, "config.market", "x0"), "config.market.x0");
    cfg.drift = as_number(require(market, "config.market", "drift"), "config.market.drift");
    cfg.sigma = as_number(require(market, "config.market", "sigma"), "config.market.sigma");
    cfg.rate = as_number(require(market, "config.market", "rate"), "config.market.rate");
    cfg.horizon = as_number(require(market, "config.market", "horizon"), "config.market.horizon");

    cfg.ladder = parse_ladder(require(j, "config", "ladder"), "config.ladder");
    cfg.mu_atoms = as_number_array(require(j, "config", "mu"), "config.mu");
    cfg.sga = parse_sga(require(j, "config", "sga"), "config.sga");

    const auto eval_count = as_integer(require(j, "config", "eval_count"), "config.eval_count");
    if (eval_count < 1) throw ConfigError("config.eval_count", "must be >= 1");
    cfg.eval_count = static_cast<std::size_t>(eval_count);
    const auto seed = as_integer(require(j, "config", "seed"), "config.seed");
    if (seed < 0) throw ConfigError("config.seed", "must be nonnegative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.sga.seed = cfg.seed;
    if (j.contains("out")) cfg.out = as_string(j["out"], "config.out");

    // Re-validate every referenced module invariant now so failures carry a
    // config field, not a deep call stack.
    try {
        cfg.market();
    } catch (const Error& e) {
        throw ConfigError("config.market", e.what());
    }
    try {
        cfg.build_mu();
    } catch (const Error& e) {
        throw ConfigError("config.mu", e.what());
    }
    try {
        const PayoffLadder ladder = cfg.build_ladder();
        if (ladder.size() != static_cast<int>(cfg.mu_atoms.size()))
            throw ConfigError("config.mu",
                              "measure and ladder disagree on the number of levels");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError("config.ladder", e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    return parse_run_config(j);
}

json run_config_to_json(const RunConfig& cfg) {
    json j;
    j["schema_version"] = 1;
    j["market"] = {{"x0", cfg.x0},
                   {"drift", cfg.drift},
                   {"sigma", cfg.sigma},
                   {"rate", cfg.rate},
                   {"horizon", cfg.horizon}};
    j["ladder"] = ladder_to_json(cfg.ladder);
    j["mu"] = cfg.mu_atoms;
    j["sga"] = sga_to_json(cfg.sga);
    j["eval_count"] = cfg.eval_count;
    j["seed"] = cfg.seed;
    if (cfg.out) j["out"] = *cfg.out;
    return j;
}

json report_to_json(const RunReport& report, bool canonical) {
    json j;
    j["schema_version"] = 1;
    j["config"] = run_config_to_json(report.config);
    j["price"] = {{"value", report.price.value},
                  {"std_error", report.price.std_error},
                  {"base_term", report.price.base_term},
                  {"dual_term", report.price.dual_term},
                  {"sample_count", report.price.sample_count}};
    j["zeta_star"] = report.zeta_star;
    j["iterations_used"] = report.iterations_used;
    j["stopped_early"] = report.stopped_early;
    json oracle = json::object();
    if (report.oracle_pnl_semianalytic) oracle["pnl_ot_semianalytic"] = *report.oracle_pnl_semianalytic;
    if (report.oracle_qh_dual) oracle["qh_dual_1d"] = *report.oracle_qh_dual;
    j["oracle"] = oracle;
    if (!canonical) j["wall_clock_seconds"] = report.wall_clock_seconds;
    j["version"] = report.version;
    return j;
}

RunReport report_from_json(const json& j) {
    check_keys(j, "report",
               {"schema_version", "config", "price", "zeta_star", "iterations_used",
                "stopped_early", "oracle", "wall_clock_seconds", "version"});
    RunReport report;
    report.config = parse_run_config(require(j, "report", "config"));
    const json& price = require(j, "report", "price");
    check_keys(price, "report.price",
               {"value", "std_error", "base_term", "dual_term", "sample_count"});
    report.price.value = as_number(require(price, "report.price", "value"), "report.price.value");
    report.price.std_error =
        as_number(require(price, "report.price", "std_error"), "report.price.std_error");
    report.price.base_term =
        as_number(require(price, "report.price", "base_term"), "report.price.base_term");
    report.price.dual_term =
        as_number(require(price, "report.price", "dual_term"), "report.price.dual_term");
    report.price.sample_count = static_cast<std::size_t>(
        as_integer(require(price, "report.price", "sample_count"), "report.price.sample_count"));
    report.zeta_star = as_number_array(require(j, "report", "zeta_star"), "report.zeta_star");
    report.iterations_used = static_cast<int>(
        as_integer(require(j, "report", "iterations_used"), "report.iterations_used"));
    report.stopped_early = require(j, "report", "stopped_early").get<bool>();
    const json& oracle = require(j, "report", "oracle");
    check_keys(oracle, "report.oracle", {"pnl_ot_semianalytic", "qh_dual_1d"});
    if (oracle.contains("pnl_ot_semianalytic"))
        report.oracle_pnl_semianalytic =
            as_number(oracle["pnl_ot_semianalytic"], "report.oracle.pnl_ot_semianalytic");
    if (oracle.contains("qh_dual_1d"))
        report.oracle_qh_dual = as_number(oracle["qh_dual_1d"], "report.oracle.qh_dual_1d");
    if (j.contains("wall_clock_seconds"))
        report.wall_clock_seconds = as_number(j["wall_clock_seconds"], "report.wall_clock_seconds");
    report.version = as_string(require(j, "report", "version"), "report.version");
    return report;
}

json finite_instance_to_json(const FiniteInstance& inst) {
    json j;
    j["weights"] = inst.omega_weights;
    j["cost"] = inst.cost;
    j["mu"] = inst.mu.atoms();
    return j;
}

FiniteInstance finite_instance_from_json(const json& j) {
    check_keys(j, "instance", {"weights", "cost", "mu"});
    std::vector<double> weights = as_number_array(require(j, "instance", "weights"), "instance.weights");
    const json& cost_json = require(j, "instance", "cost");
    if (!cost_json.is_array()) throw ConfigError("instance.cost", "expected an array of rows");
    std::vector<std::vector<double>> cost;
    for (std::size_t i = 0; i < cost_json.size(); ++i)
        cost.push_back(as_number_array(cost_json[i], "instance.cost[" + std::to_string(i) + "]"));
    std::vector<double> mu = as_number_array(require(j, "instance", "mu"), "instance.mu");
    try {
        return FiniteInstance(std::move(weights), std::move(cost),
                              DiscreteMeasure::validated(std::move(mu)));
    } catch (const Error& e) {
        throw ConfigError("instance", e.what());
    }
}

std::vector<FiniteInstance> load_finite_instances(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("instances", "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("instances", std::string("invalid JSON: ") + e.what());
    }
    check_keys(j, "instances", {"schema_version", "instances"});
    const json& list = require(j, "instances", "instances");
    if (!list.is_array()) throw ConfigError("instances.instances", "expected an array");
    std::vector<FiniteInstance> out;
    for (const auto& item : list) out.push_back(finite_instance_from_json(item));
    return out;
}

}  // namespace mqh
