#ifndef MQH_EXPERIMENTS_HPP
#define MQH_EXPERIMENTS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mqh/config.hpp"

namespace mqh {

// Deterministic sub-seed for a tagged piece of a larger experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

// Full pricing pipeline: ADAM ascent, fresh-batch evaluation, and the
// applicable oracles (closed-form PnL value, quantile-hedging dual).
RunReport run_price(const RunConfig& cfg);

// One row of the PnL-hedging benchmark table.
struct Table1Row {
    double p2 = 0.0, p3 = 0.0;
    double gamma2 = 0.0, gamma3 = 0.0;
    double sga_price = 0.0;
    double sga_std = 0.0;
    double ot_solver = 0.0;  // closed-form value
    double abs_gap = 0.0;
};

struct Table1Options {
    std::uint64_t seed = 1;
    int max_iter = 100000;
    int batch = 256;
    double eta0 = 0.01;
    std::size_t eval_count = 1000000;
    bool parallel = true;
};

std::vector<Table1Row> run_table1(const Table1Options& opts);
std::string table1_csv(const std::vector<Table1Row>& rows);

// Benchmark market shared by the table and the quantile-hedging curves.
BsParams benchmark_market();

struct FigureRow {
    double p = 0.0;
    double sga_price = 0.0;
    double oracle_price = 0.0;
    double abs_gap = 0.0;
};

struct FigureOptions {
    PayoffKind kind = PayoffKind::call;
    std::uint64_t seed = 1;
    std::size_t eval_count = 1000000;
    bool parallel = true;
};

// Quantile-hedging price curve over p in {i/20 : 0 <= i <= 20}; the SGA price
// and the one-dimensional dual oracle share the evaluation batch.
std::vector<FigureRow> run_figure_qh(const FigureOptions& opts);
std::string figure_csv(const std::vector<FigureRow>& rows);

}  // namespace mqh

#endif  // MQH_EXPERIMENTS_HPP
