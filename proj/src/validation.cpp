#include "mqh/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "mqh/config.hpp"
#include "mqh/dual_sga.hpp"
#include "mqh/errors.hpp"
#include "mqh/experiments.hpp"
#include "mqh/oracles.hpp"

namespace mqh {

namespace {

std::string describe_instance(const FiniteInstance& inst) {
    return finite_instance_to_json(inst).dump();
}

void record(PropertyResult& r, bool ok, const std::string& context) {
    if (ok) {
        ++r.passed;
    } else {
        ++r.failed;
        if (r.detail.empty()) r.detail = context;
    }
}

DiscreteMeasure random_measure(RandomSequence& rs, int n, double min_atom = 0.05) {
    std::vector<double> atoms(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& a : atoms) {
        a = rs.uniform(min_atom, 1.0);
        sum += a;
    }
    for (double& a : atoms) a /= sum;
    return DiscreteMeasure::validated(atoms);
}

// Shift a fraction of one atom to a higher level; the result dominates.
DiscreteMeasure shift_mass_up(RandomSequence& rs, const DiscreteMeasure& mu) {
    std::vector<double> atoms = mu.atoms();
    if (atoms.size() < 2) return mu;
    const int from = static_cast<int>(rs.uniform_int(0, static_cast<long long>(atoms.size()) - 2));
    const int to = static_cast<int>(rs.uniform_int(from + 1, static_cast<long long>(atoms.size()) - 1));
    const double amount = 0.5 * atoms[static_cast<std::size_t>(from)];
    atoms[static_cast<std::size_t>(from)] -= amount;
    atoms[static_cast<std::size_t>(to)] += amount;
    return DiscreteMeasure::validated(atoms);
}

std::vector<double> random_cone_point(RandomSequence& rs, int dim, double scale) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (double& x : v) x = rs.uniform(0.0, scale);
    std::sort(v.begin(), v.end());
    return v;
}

double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
    return worst;
}

double norm2_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

FiniteInstance random_finite_instance(RandomSequence& rs, const InstanceOptions& opts) {
    int n = static_cast<int>(rs.uniform_int(opts.min_levels, opts.max_levels));
    int m = static_cast<int>(rs.uniform_int(opts.min_scenarios, opts.max_scenarios));
    if (opts.grid_aligned && m < n) m = n;

    std::vector<double> weights(static_cast<std::size_t>(m));
    std::vector<double> atoms(static_cast<std::size_t>(n));
    if (opts.grid_aligned) {
        std::fill(weights.begin(), weights.end(), 1.0 / m);
        // Random composition of m into n positive parts.
        std::vector<int> cuts(static_cast<std::size_t>(m - 1));
        std::iota(cuts.begin(), cuts.end(), 1);
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            const std::size_t j = static_cast<std::size_t>(
                rs.uniform_int(static_cast<long long>(i), static_cast<long long>(cuts.size()) - 1));
            std::swap(cuts[i], cuts[j]);
        }
        std::vector<int> chosen(cuts.begin(), cuts.begin() + (n - 1));
        std::sort(chosen.begin(), chosen.end());
        int prev = 0;
        for (int k = 0; k < n; ++k) {
            const int next = (k == n - 1) ? m : chosen[static_cast<std::size_t>(k)];
            atoms[static_cast<std::size_t>(k)] = static_cast<double>(next - prev) / m;
            prev = next;
        }
    } else {
        double wsum = 0.0;
        for (double& w : weights) {
            w = rs.uniform(0.05, 1.0);
            wsum += w;
        }
        for (double& w : weights) w /= wsum;
        atoms = random_measure(rs, n).atoms();
    }

    std::vector<std::vector<double>> cost(static_cast<std::size_t>(m),
                                          std::vector<double>(static_cast<std::size_t>(n)));
    for (auto& row : cost) {
        if (opts.monotone_rows) {
            double level = rs.uniform(-1.0, 1.0);
            for (double& c : row) {
                c = level;
                level += rs.uniform(0.0, 1.0);
            }
        } else {
            for (double& c : row) c = rs.uniform(-1.0, 1.0);
        }
    }
    return FiniteInstance(std::move(weights), std::move(cost),
                          DiscreteMeasure::validated(std::move(atoms)));
}

std::vector<PropertyResult> run_measures_suite(std::uint64_t seed) {
    std::vector<PropertyResult> results;
    RandomSequence rs(seed, 11);

    {
        PropertyResult r{"survival-curve-invariants"};
        for (int k = 0; k < 500; ++k) {
            const int n = static_cast<int>(rs.uniform_int(1, 10));
            const DiscreteMeasure mu = random_measure(rs, n, 0.01);
            const SurvivalCurve curve = survival_curve(mu);
            bool ok = std::fabs(curve.values.front() - 1.0) <= 1e-12;
            for (int j = 1; j <= n && ok; ++j) {
                const double here = curve.values[static_cast<std::size_t>(j - 1)];
                const double next = (j == n) ? 0.0 : curve.values[static_cast<std::size_t>(j)];
                ok = here >= next - 1e-12 && std::fabs((here - next) - mu.atom(j)) <= 1e-12;
            }
            record(r, ok, "survival curve invariant violated");
        }
        results.push_back(std::move(r));
    }
    {
        PropertyResult r{"dominates-reflexive-transitive"};
        for (int k = 0; k < 300; ++k) {
            const int n = static_cast<int>(rs.uniform_int(2, 8));
            const DiscreteMeasure mu = random_measure(rs, n);
            const DiscreteMeasure nu = shift_mass_up(rs, mu);
            const DiscreteMeasure pi = shift_mass_up(rs, nu);
            record(r, dominates(mu, mu), "dominance is not reflexive");
            record(r, dominates(nu, mu) && dominates(pi, nu) && dominates(pi, mu),
                   "dominance chain broken (transitivity)");
        }
        results.push_back(std::move(r));
    }
    {
        PropertyResult r{"projection-idempotent-nonexpansive"};
        for (int k = 0; k < 300; ++k) {
            const int dim = static_cast<int>(rs.uniform_int(1, 8));
            std::vector<double> u(static_cast<std::size_t>(dim)), v(static_cast<std::size_t>(dim));
            for (double& x : u) x = rs.uniform(-2.0, 2.0);
            for (double& x : v) x = rs.uniform(-2.0, 2.0);
            const auto pu = project_to_cone(u);
            const auto pv = project_to_cone(v);
            record(r, inf_norm_diff(project_to_cone(pu), pu) <= 1e-10,
                   "projection is not idempotent");
            record(r, norm2_diff(pu, pv) <= norm2_diff(u, v) + 1e-10,
                   "projection is not nonexpansive");
            bool feasible = true;
            double prev = 0.0;
            for (double x : pu) {
                if (x < prev - 1e-12) feasible = false;
                prev = x;
            }
            record(r, feasible && (pu.empty() || pu.front() >= -1e-12),
                   "projection left the cone");
        }
        results.push_back(std::move(r));
    }
    {
        PropertyResult r{"projection-grid-optimal"};
        for (int dim = 1; dim <= 3; ++dim) {
            for (int k = 0; k < 10; ++k) {
                std::vector<double> v(static_cast<std::size_t>(dim));
                for (double& x : v) x = rs.uniform(-1.0, 1.0);
                const auto pv = project_to_cone(v);
                double projected = 0.0;
                for (int i = 0; i < dim; ++i)
                    projected += (v[static_cast<std::size_t>(i)] - pv[static_cast<std::size_t>(i)]) *
                                 (v[static_cast<std::size_t>(i)] - pv[static_cast<std::size_t>(i)]);
                // Exhaustive sweep of the feasible grid in [0,1]^dim.
                const int steps = 100;
                double best = std::numeric_limits<double>::infinity();
                std::vector<int> z(static_cast<std::size_t>(dim), 0);
                while (true) {
                    bool ordered = true;
                    for (int i = 1; i < dim; ++i)
                        if (z[static_cast<std::size_t>(i)] < z[static_cast<std::size_t>(i - 1)])
                            ordered = false;
                    if (ordered) {
                        double d = 0.0;
                        for (int i = 0; i < dim; ++i) {
                            const double zi = static_cast<double>(z[static_cast<std::size_t>(i)]) / steps;
                            d += (v[static_cast<std::size_t>(i)] - zi) * (v[static_cast<std::size_t>(i)] - zi);
                        }
                        best = std::min(best, d);
                    }
                    int idx = dim - 1;
                    while (idx >= 0 && z[static_cast<std::size_t>(idx)] == steps) {
                        z[static_cast<std::size_t>(idx)] = 0;
                        --idx;
                    }
                    if (idx < 0) break;
                    ++z[static_cast<std::size_t>(idx)];
                }
                record(r, projected <= best + 1e-12, "projection beaten by a grid point");
            }
        }
        results.push_back(std::move(r));
    }
    return results;
}

namespace {

struct RandomDualTriple {
    std::vector<double> zeta_a, zeta_b, row, masses;
};

RandomDualTriple random_dual_triple(RandomSequence& rs) {
    RandomDualTriple t;
    const int dim = static_cast<int>(rs.uniform_int(1, 4));
    t.zeta_a = random_cone_point(rs, dim, 5.0);
    t.zeta_b = random_cone_point(rs, dim, 5.0);
    t.row.resize(static_cast<std::size_t>(dim));
    for (double& h : t.row) h = rs.uniform(0.0, 5.0);
    std::sort(t.row.begin(), t.row.end());
    const DiscreteMeasure mu = random_measure(rs, dim + 1);
    t.masses = mu.upper_masses();
    return t;
}

}  // namespace

std::vector<PropertyResult> run_duality_suite(std::uint64_t seed) {
    std::vector<PropertyResult> results;
    RandomSequence rs(seed, 13);

    {
        PropertyResult concave{"per-sample-concavity"};
        PropertyResult supergrad{"supergradient-inequality"};
        PropertyResult upper{"dual-value-upper-bound"};
        for (int k = 0; k < 10000; ++k) {
            const RandomDualTriple t = random_dual_triple(rs);
            const double lambda = rs.uniform();
            std::vector<double> mix(t.zeta_a.size());
            for (std::size_t i = 0; i < mix.size(); ++i)
                mix[i] = lambda * t.zeta_a[i] + (1.0 - lambda) * t.zeta_b[i];
            const double wa = dual_sample_value(t.zeta_a, t.row, t.masses);
            const double wb = dual_sample_value(t.zeta_b, t.row, t.masses);
            const double wm = dual_sample_value(mix, t.row, t.masses);
            record(concave, wm >= lambda * wa + (1.0 - lambda) * wb - 1e-10,
                   "concavity violated");

            std::vector<double> grad(t.zeta_a.size());
            supergradient_sample(t.zeta_a, t.row, t.masses, grad);
            double bound = wa;
            for (std::size_t i = 0; i < grad.size(); ++i)
                bound += grad[i] * (t.zeta_b[i] - t.zeta_a[i]);
            record(supergrad, wb <= bound + 1e-10, "supergradient inequality violated");

            double linear = 0.0;
            for (std::size_t i = 0; i < t.zeta_a.size(); ++i) linear += t.zeta_a[i] * t.masses[i];
            record(upper, wa <= linear + 1e-12, "value above its linear bound");
        }
        results.push_back(std::move(concave));
        results.push_back(std::move(supergrad));
        results.push_back(std::move(upper));
    }

    {
        // Any batch-feasible randomized assignment must cost at least the
        // dual value evaluated on the same batch.
        PropertyResult r{"weak-duality-shared-batch"};
        for (int k = 0; k < 50; ++k) {
            const BsParams market = benchmark_market();
            const int n = static_cast<int>(rs.uniform_int(2, 4));
            std::vector<double> offsets{0.0};
            for (int j = 1; j < n; ++j)
                offsets.push_back(offsets.back() + rs.uniform(1.0, 30.0));
            const PayoffLadder ladder = PayoffLadder::pnl(PayoffKind::call, 100.0, offsets);
            const DiscreteMeasure mu = random_measure(rs, n);
            const ScenarioBatch batch = simulate_bs(
                market, 2000, SeededStream{derive_seed(seed, 0x90 + static_cast<std::uint64_t>(k)), 7});
            const CostMatrix costs = build_costs(ladder, batch);
            const DualPoint zeta =
                DualPoint::from_feasible(random_cone_point(rs, n - 1, 40.0));

            const double base = [&] {
                double s = 0.0;
                for (std::size_t i = 0; i < costs.rows; ++i) s += costs.value_row(i)[0];
                return s / static_cast<double>(costs.rows);
            }();
            const double dual = base + dual_estimate(zeta, costs, mu).mean;

            // Comonotone fractional assignment with exact empirical marginals.
            std::vector<std::size_t> order(batch.size());
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (batch.kernel[a] != batch.kernel[b]) return batch.kernel[a] > batch.kernel[b];
                return a < b;
            });
            std::vector<double> cuts(static_cast<std::size_t>(n));
            double acc = 0.0;
            for (int j = 1; j <= n; ++j) {
                acc += mu.atom(j);
                cuts[static_cast<std::size_t>(j - 1)] = acc;
            }
            cuts.back() = 1.0;
            const double m_count = static_cast<double>(batch.size());
            double primal = 0.0;
            for (std::size_t rank = 0; rank < batch.size(); ++rank) {
                const double lo = static_cast<double>(rank) / m_count;
                const double hi = static_cast<double>(rank + 1) / m_count;
                const auto row = costs.value_row(order[rank]);
                double prev_cut = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double cut = cuts[static_cast<std::size_t>(j)];
                    const double overlap =
                        std::max(0.0, std::min(hi, cut) - std::max(lo, prev_cut));
                    primal += overlap * row[j];
                    prev_cut = cut;
                }
            }
            record(r, primal >= dual - 1e-9 * (1.0 + std::fabs(primal)),
                   "empirical assignment cost below the dual value");
        }
        results.push_back(std::move(r));
    }

    {
        PropertyResult r{"adam-determinism"};
        for (int k = 0; k < 3; ++k) {
            SgaConfig sga;
            sga.max_iter = 200;
            sga.batch = 32;
            sga.seed = derive_seed(seed, 0xA0 + static_cast<std::uint64_t>(k));
            const BsParams market = benchmark_market();
            const PayoffLadder ladder =
                PayoffLadder::pnl(PayoffKind::call, 100.0, {0.0, 10.0, 20.0});
            const DiscreteMeasure mu = DiscreteMeasure::validated({0.2, 0.3, 0.5});
            const SgaResult a = adam_run(sga, market, ladder, mu);
            const SgaResult b = adam_run(sga, market, ladder, mu);
            record(r,
                   a.zeta_star.zeta() == b.zeta_star.zeta() &&
                       a.iterations_used == b.iterations_used &&
                       a.stopped_early == b.stopped_early,
                   "repeated run differs");
        }
        results.push_back(std::move(r));
    }

    {
        // Dominating targets cannot be cheaper to hedge (same seed and budget).
        PropertyResult r{"price-monotone-in-target"};
        const BsParams market = benchmark_market();
        const PayoffLadder ladder = PayoffLadder::pnl(PayoffKind::call, 100.0, {0.0, 10.0, 20.0});
        const std::vector<std::vector<double>> chain = {{0.5, 0.3, 0.2},
                                                        {0.4, 0.4, 0.2},
                                                        {0.3, 0.4, 0.3},
                                                        {0.2, 0.4, 0.4},
                                                        {0.1, 0.4, 0.5}};
        double prev_value = -std::numeric_limits<double>::infinity();
        double prev_err = 0.0;
        for (const auto& atoms : chain) {
            SgaConfig sga;
            sga.max_iter = 2000;
            sga.batch = 64;
            sga.seed = derive_seed(seed, 0xB0);
            const DiscreteMeasure mu = DiscreteMeasure::validated(atoms);
            const SgaResult fit = adam_run(sga, market, ladder, mu);
            const PriceEstimate price = price_with_ci(fit.zeta_star, market, ladder, mu, 100000,
                                                      SeededStream{derive_seed(seed, 0xB1), 3});
            record(r, price.value >= prev_value - 3.0 * (price.std_error + prev_err),
                   "price dropped along a dominance chain");
            prev_value = price.value;
            prev_err = price.std_error;
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<PropertyResult> run_finite_suite(std::uint64_t seed, int zero_gap_instances,
                                             int saturation_instances) {
    std::vector<PropertyResult> results;
    RandomSequence rs(seed, 17);

    PropertyResult gap{"finite-zero-duality-gap"};
    PropertyResult feas{"finite-assignment-feasibility"};
    PropertyResult order{"monge-kantorovich-order"};
    long integral_cases = 0;
    for (int k = 0; k < zero_gap_instances; ++k) {
        InstanceOptions opts;
        opts.grid_aligned = (k % 2 == 0);
        const FiniteInstance inst = random_finite_instance(rs, opts);
        const FiniteSolution sol = finite_kp_exact(inst);

        record(gap, std::fabs(sol.primal_value - sol.dual_value) <= 1e-9,
               "duality gap above 1e-9: " + describe_instance(inst));

        bool ok = true;
        for (int j = 0; j < inst.level_count(); ++j) {
            if (sol.potentials[static_cast<std::size_t>(j)] < -1e-12) ok = false;
        }
        std::vector<double> col(static_cast<std::size_t>(inst.level_count()), 0.0);
        for (std::size_t i = 0; i < inst.scenario_count(); ++i) {
            double row_sum = 0.0;
            for (int j = 0; j < inst.level_count(); ++j) {
                const double a = sol.assignment[i][static_cast<std::size_t>(j)];
                if (a < -1e-9) ok = false;
                row_sum += a;
                col[static_cast<std::size_t>(j)] += inst.omega_weights[i] * a;
            }
            if (std::fabs(row_sum - 1.0) > 1e-9) ok = false;
        }
        for (int j = 1; j <= inst.level_count(); ++j)
            if (std::fabs(col[static_cast<std::size_t>(j - 1)] - inst.mu.atom(j)) > 1e-9) ok = false;
        record(feas, ok, "assignment infeasible: " + describe_instance(inst));

        const MongeResult relaxed = finite_mp_exact(inst, true);
        const MongeResult exact = finite_mp_exact(inst, false);
        bool order_ok = relaxed.feasible && relaxed.value >= sol.primal_value - 1e-9;
        if (exact.feasible && relaxed.value > exact.value + 1e-9) order_ok = false;
        bool integral = true;
        for (const auto& row : sol.assignment)
            for (double a : row)
                if (std::fabs(a) > 1e-9 && std::fabs(a - 1.0) > 1e-9) integral = false;
        if (integral) {
            ++integral_cases;
            if (std::fabs(relaxed.value - sol.primal_value) > 1e-9) order_ok = false;
        }
        record(order, order_ok, "Monge/Kantorovich ordering violated: " + describe_instance(inst));
    }
    if (integral_cases == 0) {
        ++order.failed;
        if (order.detail.empty()) order.detail = "no instance exercised the integral-optimum branch";
    }
    results.push_back(std::move(gap));
    results.push_back(std::move(feas));
    results.push_back(std::move(order));

    {
        PropertyResult r{"saturation-on-dominance-grid"};
        for (int k = 0; k < saturation_instances; ++k) {
            InstanceOptions opts;
            opts.min_levels = 3;
            opts.max_levels = 3;
            opts.min_scenarios = 2;
            opts.max_scenarios = 6;
            opts.grid_aligned = false;
            FiniteInstance inst = random_finite_instance(rs, opts);
            // Move the target onto the 1/10 grid with positive parts.
            std::vector<int> parts{1, 1, 1};
            for (int extra = 0; extra < 7; ++extra)
                ++parts[static_cast<std::size_t>(rs.uniform_int(0, 2))];
            FiniteInstance grid_inst(
                inst.omega_weights, inst.cost,
                DiscreteMeasure::validated({parts[0] / 10.0, parts[1] / 10.0, parts[2] / 10.0}));
            record(r, finite_saturation_check(grid_inst, 10),
                   "dominating grid point cheaper than mu: " + describe_instance(grid_inst));
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::vector<PropertyResult> run_instance_file_suite(const std::vector<FiniteInstance>& instances) {
    std::vector<PropertyResult> results;
    PropertyResult gap{"finite-zero-duality-gap"};
    PropertyResult order{"monge-kantorovich-order"};
    PropertyResult saturation{"saturation-on-dominance-grid"};
    for (const FiniteInstance& inst : instances) {
        const FiniteSolution sol = finite_kp_exact(inst);
        record(gap, std::fabs(sol.primal_value - sol.dual_value) <= 1e-9,
               "duality gap above 1e-9: " + describe_instance(inst));
        const double maps = std::pow(static_cast<double>(inst.level_count()),
                                     static_cast<double>(inst.scenario_count()));
        if (maps <= 1e6) {
            const MongeResult relaxed = finite_mp_exact(inst, true);
            record(order, relaxed.feasible && relaxed.value >= sol.primal_value - 1e-9,
                   "Monge/Kantorovich ordering violated: " + describe_instance(inst));
        }
        if (inst.level_count() <= 4) {
            // Precondition of the saturation theorem: nondecreasing rows.
            if (!inst.rows_monotone())
                throw MonotonicityViolation(
                    "saturation suite requires nondecreasing cost rows; offending instance: " +
                    describe_instance(inst));
            record(saturation, finite_saturation_check(inst, 10),
                   "dominating grid point cheaper than mu: " + describe_instance(inst));
        }
    }
    results.push_back(std::move(gap));
    results.push_back(std::move(order));
    results.push_back(std::move(saturation));
    return results;
}

}  // namespace mqh
