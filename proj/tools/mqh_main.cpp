#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mqh/config.hpp"
#include "mqh/errors.hpp"
#include "mqh/experiments.hpp"
#include "mqh/validation.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mqh::Error("cannot write " + path);
    out << content;
}

int cmd_price(const std::string& config_path, const std::string& out_override, bool canonical) {
    mqh::RunConfig cfg = mqh::load_run_config(config_path);
    if (!out_override.empty()) cfg.out = out_override;
    const mqh::RunReport report = mqh::run_price(cfg);
    const std::string text = mqh::report_to_json(report, canonical).dump(2) + "\n";
    if (cfg.out) {
        write_file(*cfg.out, text);
        std::cout << "price " << report.price.value << " (std " << report.price.std_error
                  << "), report written to " << *cfg.out << "\n";
    } else {
        std::cout << text;
    }
    return kExitOk;
}

int cmd_table1(const std::string& out_dir, double tol, std::uint64_t seed, bool serial) {
    mqh::Table1Options opts;
    opts.seed = seed;
    opts.parallel = !serial;
    const auto rows = mqh::run_table1(opts);
    write_file(out_dir + "/table1.csv", mqh::table1_csv(rows));

    json jrows = json::array();
    for (const auto& r : rows) {
        jrows.push_back({{"p2", r.p2},
                         {"p3", r.p3},
                         {"gamma2", r.gamma2},
                         {"gamma3", r.gamma3},
                         {"sga_price", r.sga_price},
                         {"sga_std", r.sga_std},
                         {"ot_solver", r.ot_solver},
                         {"abs_gap", r.abs_gap}});
    }
    json j{{"schema_version", 1}, {"seed", seed}, {"rows", jrows}, {"version", mqh::kVersion}};
    write_file(out_dir + "/table1.json", j.dump(2) + "\n");

    bool ok = true;
    for (const auto& r : rows) {
        const double rel = r.abs_gap / std::fabs(r.ot_solver);
        std::printf("p=(%.2f,%.2f) gamma=(%g,%g)  sga %.4f (%.4f)  ot %.4f  gap %.2e (%.3f%%)\n",
                    r.p2, r.p3, r.gamma2, r.gamma3, r.sga_price, r.sga_std, r.ot_solver, r.abs_gap,
                    100.0 * rel);
        if (rel > tol) ok = false;
    }
    if (!ok) {
        std::cerr << "table1: SGA/oracle gap above tolerance " << tol << "\n";
        return kExitPropertyFailure;
    }
    return kExitOk;
}

int cmd_figure_qh(const std::string& kind_name, const std::string& out_path, std::uint64_t seed,
                  bool serial) {
    mqh::FigureOptions opts;
    if (kind_name == "call") opts.kind = mqh::PayoffKind::call;
    else if (kind_name == "put") opts.kind = mqh::PayoffKind::put;
    else throw mqh::ConfigError("kind", "expected call or put");
    opts.seed = seed;
    opts.parallel = !serial;
    const auto rows = mqh::run_figure_qh(opts);
    const std::string path =
        out_path.empty() ? ("figure_qh_" + kind_name + ".csv") : out_path;
    write_file(path, mqh::figure_csv(rows));
    std::cout << "wrote " << path << " (" << rows.size() << " rows)\n";
    return kExitOk;
}

int report_suite(const std::vector<mqh::PropertyResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        std::printf("%-36s %6ld passed %6ld failed  %s\n", r.name.c_str(), r.passed, r.failed,
                    r.ok() ? "OK" : "FAIL");
        if (!r.ok()) {
            ++failures;
            std::printf("    first failure: %s\n", r.detail.c_str());
        }
    }
    return failures;
}

int cmd_validate(const std::string& suite, std::uint64_t seed, const std::string& instances_path) {
    int failures = 0;
    if (suite == "measures" || suite == "all") failures += report_suite(mqh::run_measures_suite(seed));
    if (suite == "duality" || suite == "all") failures += report_suite(mqh::run_duality_suite(seed));
    if (suite == "finite" || suite == "all") {
        if (!instances_path.empty()) {
            failures +=
                report_suite(mqh::run_instance_file_suite(mqh::load_finite_instances(instances_path)));
        } else {
            failures += report_suite(mqh::run_finite_suite(seed));
        }
    }
    if (suite != "measures" && suite != "duality" && suite != "finite" && suite != "all")
        throw mqh::ConfigError("suite", "expected measures|duality|finite|all");
    return failures == 0 ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiple quantile hedging pricer (semi-discrete transport dual + SGA)"};
    app.require_subcommand(1);

    std::string config_path, out_path, out_dir = ".", kind = "call", suite = "all",
                instances_path;
    double tol = 0.01;
    std::uint64_t seed = 1;
    bool canonical = false, serial = false;

    auto* price = app.add_subcommand("price", "Price one configuration and write a JSON report");
    price->add_option("--config", config_path, "Run configuration (JSON)")->required();
    price->add_option("--out", out_path, "Report path (defaults to stdout)");
    price->add_flag("--canonical", canonical, "Omit the wall-clock field for byte comparisons");

    auto* table = app.add_subcommand("table1", "PnL-hedging benchmark table (six configurations)");
    table->add_option("--out-dir", out_dir, "Output directory for table1.csv / table1.json");
    table->add_option("--tol", tol, "Relative SGA/oracle tolerance (default 0.01)");
    table->add_option("--seed", seed, "Master seed (default 1)");
    table->add_flag("--serial", serial, "Run rows sequentially");

    auto* figure = app.add_subcommand("figure-qh", "Quantile-hedging price curve over p = i/20");
    figure->add_option("--kind", kind, "call or put")->required();
    figure->add_option("--out", out_path, "CSV path (default figure_qh_<kind>.csv)");
    figure->add_option("--seed", seed, "Master seed (default 1)");
    figure->add_flag("--serial", serial, "Run rows sequentially");

    auto* validate = app.add_subcommand("validate", "Run the property suites");
    validate->add_option("--suite", suite, "measures|duality|finite|all (default all)");
    validate->add_option("--seed", seed, "Suite seed (default 1)");
    validate->add_option("--instances", instances_path, "Finite instances JSON to replay");

    CLI11_PARSE(app, argc, argv);

    try {
        if (price->parsed()) return cmd_price(config_path, out_path, canonical);
        if (table->parsed()) return cmd_table1(out_dir, tol, seed, serial);
        if (figure->parsed()) return cmd_figure_qh(kind, out_path, seed, serial);
        if (validate->parsed()) return cmd_validate(suite, seed, instances_path);
    } catch (const mqh::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const mqh::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalError;
    }
    return kExitOk;
}
