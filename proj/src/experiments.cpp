#include "mqh/experiments.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include "mqh/errors.hpp"
#include "mqh/oracles.hpp"

namespace mqh {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return detail::mix64(detail::mix64(seed + detail::kGolden) ^ detail::mix64(tag + 1));
}

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

bool is_qh_form(const PayoffLadder& ladder) {
    if (ladder.size() != 2) return false;
    const PayoffLevel& lower = ladder.levels()[0];
    return lower.kind == PayoffKind::zero && lower.offset == 0.0;
}

}  // namespace

RunReport run_price(const RunConfig& cfg) {
    const auto started = std::chrono::steady_clock::now();
    const BsParams market = cfg.market();
    const PayoffLadder ladder = cfg.build_ladder();
    const DiscreteMeasure mu = cfg.build_mu();

    SgaConfig sga = cfg.sga;
    sga.seed = cfg.seed;
    const SgaResult fit = adam_run(sga, market, ladder, mu);

    const StreamPlan plan{cfg.seed, 0};
    const ScenarioBatch eval = simulate_bs(market, cfg.eval_count, plan.evaluation());
    const PriceEstimate price = price_on_batch(fit.zeta_star, ladder, mu, eval);
    if (!std::isfinite(price.value) || !std::isfinite(price.std_error))
        throw Error("price estimate is not finite");

    RunReport report;
    report.config = cfg;
    report.price = price;
    report.zeta_star = fit.zeta_star.zeta();
    report.iterations_used = fit.iterations_used;
    report.stopped_early = fit.stopped_early;
    report.version = kVersion;

    if (ladder.is_pnl_form() && market.risk_premium() != 0.0) {
        std::vector<double> offsets;
        offsets.reserve(static_cast<std::size_t>(ladder.size()));
        for (const auto& level : ladder.levels()) offsets.push_back(level.offset);
        report.oracle_pnl_semianalytic = pnl_ot_semianalytic(
            market, ladder.levels().front().kind, ladder.levels().front().strike, offsets, mu);
    }
    if (is_qh_form(ladder)) report.oracle_qh_dual = qh_dual_1d(eval, ladder, mu.atom(2));

    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

BsParams benchmark_market() { return BsParams(100.0, 0.1, 0.2, 0.0, 1.0); }

namespace {

Table1Row run_table1_row(const Table1Options& opts, std::size_t index, double p2, double p3,
                         double gamma2, double gamma3) {
    const BsParams market = benchmark_market();
    const DiscreteMeasure mu = DiscreteMeasure::validated({1.0 - p2 - p3, p2, p3});
    const PayoffLadder ladder = PayoffLadder::pnl(PayoffKind::call, 100.0, {0.0, gamma2, gamma3});

    SgaConfig sga;
    sga.max_iter = opts.max_iter;
    sga.batch = opts.batch;
    sga.eta0 = opts.eta0;
    sga.seed = derive_seed(opts.seed, 0x7A00 + index);
    const SgaResult fit = adam_run(sga, market, ladder, mu);
    const StreamPlan plan{sga.seed, 0};
    const PriceEstimate price =
        price_with_ci(fit.zeta_star, market, ladder, mu, opts.eval_count, plan.evaluation());

    Table1Row row;
    row.p2 = p2;
    row.p3 = p3;
    row.gamma2 = gamma2;
    row.gamma3 = gamma3;
    row.sga_price = price.value;
    row.sga_std = price.std_error;
    row.ot_solver =
        pnl_ot_semianalytic(market, PayoffKind::call, 100.0, {{0.0, gamma2, gamma3}}, mu);
    row.abs_gap = std::fabs(row.sga_price - row.ot_solver);
    return row;
}

}  // namespace

std::vector<Table1Row> run_table1(const Table1Options& opts) {
    struct Cell {
        double p2, p3, gamma2, gamma3;
    };
    const std::vector<Cell> cells = {
        {0.3, 0.5, 10.0, 20.0},  {0.05, 0.05, 10.0, 20.0},  {0.05, 0.9, 10.0, 20.0},
        {0.3, 0.5, 10.0, 100.0}, {0.05, 0.05, 10.0, 100.0}, {0.05, 0.9, 10.0, 100.0}};

    std::vector<Table1Row> rows(cells.size());
    if (opts.parallel) {
        std::vector<std::future<Table1Row>> futures;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            futures.push_back(std::async(std::launch::async, [&, i] {
                return run_table1_row(opts, i, cells[i].p2, cells[i].p3, cells[i].gamma2,
                                      cells[i].gamma3);
            }));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) rows[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < cells.size(); ++i)
            rows[i] = run_table1_row(opts, i, cells[i].p2, cells[i].p3, cells[i].gamma2,
                                     cells[i].gamma3);
    }
    return rows;
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
    std::ostringstream out;
    out << "p2,p3,gamma2,gamma3,sga_price,sga_std,ot_solver,abs_gap\n";
    for (const auto& r : rows) {
        out << format_double(r.p2) << ',' << format_double(r.p3) << ',' << format_double(r.gamma2)
            << ',' << format_double(r.gamma3) << ',' << format_double(r.sga_price) << ','
            << format_double(r.sga_std) << ',' << format_double(r.ot_solver) << ','
            << format_double(r.abs_gap) << '\n';
    }
    return out.str();
}

namespace {

FigureRow run_figure_row(const FigureOptions& opts, int i) {
    const double p = static_cast<double>(i) / 20.0;
    const BsParams market = benchmark_market();
    const DiscreteMeasure mu = DiscreteMeasure::with_boundary_levels({1.0 - p, p});
    const PayoffLadder ladder = PayoffLadder::from_levels(
        {{PayoffKind::zero, 0.0, 0.0}, {opts.kind, 100.0, 0.0}}, market.x0);

    SgaConfig sga;
    if (opts.kind == PayoffKind::put) {
        sga.max_iter = 5000;
        sga.batch = 256;
    } else {
        sga.max_iter = 2500;
        sga.batch = 64;
    }
    sga.eta0 = 0.01;
    sga.seed = derive_seed(opts.seed, 0xF000 + static_cast<std::uint64_t>(i) +
                                          (opts.kind == PayoffKind::put ? 0x100 : 0));
    const SgaResult fit = adam_run(sga, market, ladder, mu);

    const StreamPlan plan{sga.seed, 0};
    const ScenarioBatch eval = simulate_bs(market, opts.eval_count, plan.evaluation());
    const PriceEstimate price = price_on_batch(fit.zeta_star, ladder, mu, eval);

    FigureRow row;
    row.p = p;
    row.sga_price = price.value;
    row.oracle_price = qh_dual_1d(eval, ladder, p);
    row.abs_gap = std::fabs(row.sga_price - row.oracle_price);
    return row;
}

}  // namespace

std::vector<FigureRow> run_figure_qh(const FigureOptions& opts) {
    std::vector<FigureRow> rows(21);
    if (opts.parallel) {
        std::vector<std::future<FigureRow>> futures;
        for (int i = 0; i <= 20; ++i)
            futures.push_back(std::async(std::launch::async,
                                         [&, i] { return run_figure_row(opts, i); }));
        for (int i = 0; i <= 20; ++i) rows[static_cast<std::size_t>(i)] = futures[static_cast<std::size_t>(i)].get();
    } else {
        for (int i = 0; i <= 20; ++i) rows[static_cast<std::size_t>(i)] = run_figure_row(opts, i);
    }
    return rows;
}

std::string figure_csv(const std::vector<FigureRow>& rows) {
    std::ostringstream out;
    out << "p,sga_price,oracle_price,abs_gap\n";
    for (const auto& r : rows) {
        out << format_double(r.p) << ',' << format_double(r.sga_price) << ','
            << format_double(r.oracle_price) << ',' << format_double(r.abs_gap) << '\n';
    }
    return out.str();
}

}  // namespace mqh
