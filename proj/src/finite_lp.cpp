#include "mqh/finite_lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "mqh/errors.hpp"

namespace mqh {

namespace {

using Rat = boost::multiprecision::cpp_rational;

std::vector<Rat> normalized_rationals(const std::vector<double>& v) {
    std::vector<Rat> out(v.size());
    Rat sum = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = Rat(v[i]);
        sum += out[i];
    }
    if (sum == 0) throw Error("marginal sums to zero");
    for (Rat& r : out) r /= sum;
    return out;
}

struct ExactTransport {
    Rat value;
    std::vector<std::vector<Rat>> flow;
    std::vector<Rat> row_potential;
    std::vector<Rat> col_potential;
};

// Transportation simplex with a spanning-tree basis. Exact rational pivots
// and Bland's rule on both the entering and the leaving cell, so the method
// terminates without tolerances even on degenerate bases.
ExactTransport solve_transport_exact(const std::vector<Rat>& supply,
                                     const std::vector<Rat>& demand,
                                     const std::vector<std::vector<Rat>>& cost) {
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    std::vector<std::vector<Rat>> flow(m, std::vector<Rat>(n, Rat(0)));
    std::vector<std::vector<char>> basic(m, std::vector<char>(n, 0));

    // Northwest-corner start: a staircase of m + n - 1 basic cells.
    {
        std::vector<Rat> rem_supply = supply;
        std::vector<Rat> rem_demand = demand;
        int i = 0, j = 0;
        while (true) {
            const Rat x = std::min(rem_supply[i], rem_demand[j]);
            flow[i][j] = x;
            basic[i][j] = 1;
            rem_supply[i] -= x;
            rem_demand[j] -= x;
            if (i == m - 1 && j == n - 1) break;
            if (rem_supply[i] == 0 && i < m - 1) ++i;
            else ++j;
        }
    }

    std::vector<Rat> u(m), v(n);
    std::vector<char> u_known(m), v_known(n);
    std::vector<int> parent(m + n);  // node indices: rows 0..m-1, cols m..m+n-1

    while (true) {
        // Potentials from the tree, rooted at row 0.
        std::fill(u_known.begin(), u_known.end(), 0);
        std::fill(v_known.begin(), v_known.end(), 0);
        u[0] = 0;
        u_known[0] = 1;
        std::queue<int> frontier;
        frontier.push(0);
        while (!frontier.empty()) {
            const int node = frontier.front();
            frontier.pop();
            if (node < m) {
                for (int j = 0; j < n; ++j) {
                    if (basic[node][j] && !v_known[j]) {
                        v[j] = cost[node][j] - u[node];
                        v_known[j] = 1;
                        frontier.push(m + j);
                    }
                }
            } else {
                const int j = node - m;
                for (int i = 0; i < m; ++i) {
                    if (basic[i][j] && !u_known[i]) {
                        u[i] = cost[i][j] - v[j];
                        u_known[i] = 1;
                        frontier.push(i);
                    }
                }
            }
        }

        // Entering cell: first negative reduced cost in row-major order.
        int ei = -1, ej = -1;
        for (int i = 0; i < m && ei < 0; ++i) {
            for (int j = 0; j < n; ++j) {
                if (!basic[i][j] && cost[i][j] - u[i] - v[j] < 0) {
                    ei = i;
                    ej = j;
                    break;
                }
            }
        }
        if (ei < 0) break;

        // Tree path from row ei to column ej.
        std::fill(parent.begin(), parent.end(), -2);
        parent[ei] = -1;
        std::queue<int> bfs;
        bfs.push(ei);
        while (!bfs.empty() && parent[m + ej] == -2) {
            const int node = bfs.front();
            bfs.pop();
            if (node < m) {
                for (int j = 0; j < n; ++j) {
                    if (basic[node][j] && parent[m + j] == -2) {
                        parent[m + j] = node;
                        bfs.push(m + j);
                    }
                }
            } else {
                const int j = node - m;
                for (int i = 0; i < m; ++i) {
                    if (basic[i][j] && parent[i] == -2) {
                        parent[i] = m + j;
                        bfs.push(i);
                    }
                }
            }
        }
        if (parent[m + ej] == -2) throw Error("transport basis lost connectivity");

        // Walk the path col ej -> row ei; edges alternate -,+ starting at -.
        std::vector<std::pair<int, int>> minus_cells, plus_cells;
        {
            int node = m + ej;
            bool minus = true;
            while (parent[node] != -1) {
                const int prev = parent[node];
                const int row = node < m ? node : prev;
                const int col = node < m ? prev - m : node - m;
                (minus ? minus_cells : plus_cells).emplace_back(row, col);
                minus = !minus;
                node = prev;
            }
        }

        Rat theta = flow[minus_cells[0].first][minus_cells[0].second];
        std::pair<int, int> leaving = minus_cells[0];
        for (const auto& cell : minus_cells) {
            const Rat& f = flow[cell.first][cell.second];
            if (f < theta || (f == theta && cell < leaving)) {
                theta = f;
                leaving = cell;
            }
        }
        for (const auto& cell : minus_cells) flow[cell.first][cell.second] -= theta;
        for (const auto& cell : plus_cells) flow[cell.first][cell.second] += theta;
        flow[ei][ej] = theta;
        basic[ei][ej] = 1;
        basic[leaving.first][leaving.second] = 0;
        flow[leaving.first][leaving.second] = 0;
    }

    ExactTransport result;
    result.value = 0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) result.value += flow[i][j] * cost[i][j];
    result.flow = std::move(flow);
    result.row_potential = std::move(u);
    result.col_potential = std::move(v);
    return result;
}

}  // namespace

FiniteInstance::FiniteInstance(std::vector<double> weights,
                               std::vector<std::vector<double>> cost_rows, DiscreteMeasure target)
    : omega_weights(std::move(weights)), cost(std::move(cost_rows)), mu(std::move(target)) {
    if (omega_weights.empty()) throw Error("finite instance needs at least one scenario");
    double sum = 0.0;
    for (double w : omega_weights) {
        if (!(w > 0.0)) throw Error("scenario weights must be strictly positive");
        sum += w;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw NotNormalized("scenario weights must sum to 1");
    if (cost.size() != omega_weights.size())
        throw DimensionMismatch("cost rows do not match scenario count");
    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != mu.size())
            throw DimensionMismatch("cost row does not match level count");
    }
}

bool FiniteInstance::rows_monotone() const {
    for (const auto& row : cost) {
        for (std::size_t n = 0; n + 1 < row.size(); ++n)
            if (row[n] > row[n + 1] + 1e-12) return false;
    }
    return true;
}

FiniteSolution transport_lp(const std::vector<double>& weights,
                            const std::vector<std::vector<double>>& cost,
                            const std::vector<double>& target) {
    const std::size_t m = weights.size();
    const std::size_t n = target.size();
    if (m == 0 || n == 0) throw InfeasibleInstance("transport_lp: empty marginal");

    const std::vector<Rat> supply = normalized_rationals(weights);
    const std::vector<Rat> demand = normalized_rationals(target);
    std::vector<std::vector<Rat>> rc(m, std::vector<Rat>(n));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) rc[i][j] = Rat(cost[i][j]);

    const ExactTransport exact = solve_transport_exact(supply, demand, rc);

    FiniteSolution sol;
    sol.primal_value = exact.value.convert_to<double>();
    sol.assignment.assign(m, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            sol.assignment[i][j] = Rat(exact.flow[i][j] / supply[i]).convert_to<double>();

    Rat shift = exact.col_potential[0];
    for (const Rat& p : exact.col_potential) shift = std::min(shift, p);
    sol.potentials.resize(n);
    for (std::size_t j = 0; j < n; ++j)
        sol.potentials[j] = Rat(exact.col_potential[j] - shift).convert_to<double>();

    // Independent double evaluation of the dual functional at the returned
    // potentials; strong duality makes it coincide with the primal value.
    double wsum = 0.0, tsum = 0.0;
    for (double w : weights) wsum += w;
    for (double t : target) tsum += t;
    double dual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double slack = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) slack = std::min(slack, cost[i][j] - sol.potentials[j]);
        dual += (weights[i] / wsum) * slack;
    }
    for (std::size_t j = 0; j < n; ++j) dual += sol.potentials[j] * (target[j] / tsum);
    sol.dual_value = dual;
    return sol;
}

FiniteSolution finite_kp_exact(const FiniteInstance& inst) {
    return transport_lp(inst.omega_weights, inst.cost, inst.mu.atoms());
}

MongeResult finite_mp_exact(const FiniteInstance& inst, bool relax) {
    const std::size_t m = inst.scenario_count();
    const int n = inst.level_count();
    double maps = std::pow(static_cast<double>(n), static_cast<double>(m));
    if (maps > 1e6) throw Error("finite_mp_exact: level_count^scenario_count exceeds 1e6");

    double wsum = 0.0;
    for (double w : inst.omega_weights) wsum += w;

    MongeResult best;
    best.value = std::numeric_limits<double>::infinity();
    std::vector<int> chi(m, 0);
    std::vector<double> push(static_cast<std::size_t>(n));
    const std::uint64_t total = static_cast<std::uint64_t>(maps + 0.5);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (std::size_t i = 0; i < m; ++i) {
            chi[i] = static_cast<int>(c % static_cast<std::uint64_t>(n));
            c /= static_cast<std::uint64_t>(n);
        }
        std::fill(push.begin(), push.end(), 0.0);
        double value = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double w = inst.omega_weights[i] / wsum;
            push[static_cast<std::size_t>(chi[i])] += w;
            value += w * inst.cost[i][static_cast<std::size_t>(chi[i])];
        }
        bool ok = true;
        if (relax) {
            double push_tail = 0.0, mu_tail = 0.0;
            for (int lvl = n; lvl >= 1 && ok; --lvl) {
                push_tail += push[static_cast<std::size_t>(lvl - 1)];
                mu_tail += inst.mu.atom(lvl);
                if (push_tail < mu_tail - 1e-12) ok = false;
            }
        } else {
            for (int lvl = 1; lvl <= n && ok; ++lvl) {
                if (std::fabs(push[static_cast<std::size_t>(lvl - 1)] - inst.mu.atom(lvl)) > 1e-12)
                    ok = false;
            }
        }
        if (ok && value < best.value) {
            best.feasible = true;
            best.value = value;
        }
    }
    if (!best.feasible) best.value = std::numeric_limits<double>::infinity();
    return best;
}

namespace {

void dominating_grid_targets(const std::vector<double>& mu_survival, int denom,
                             std::vector<int>& parts, int level, int remaining,
                             std::vector<std::vector<double>>& out) {
    const int n = static_cast<int>(parts.size());
    if (level == n - 1) {
        parts[static_cast<std::size_t>(level)] = remaining;
        // Survival check against mu.
        double tail = 0.0;
        for (int j = n; j >= 1; --j) {
            tail += static_cast<double>(parts[static_cast<std::size_t>(j - 1)]) / denom;
            if (j >= 2 && tail < mu_survival[static_cast<std::size_t>(j - 1)] - 1e-12) return;
        }
        std::vector<double> target(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j)
            target[static_cast<std::size_t>(j)] =
                static_cast<double>(parts[static_cast<std::size_t>(j)]) / denom;
        out.push_back(std::move(target));
        return;
    }
    for (int a = 0; a <= remaining; ++a) {
        parts[static_cast<std::size_t>(level)] = a;
        dominating_grid_targets(mu_survival, denom, parts, level + 1, remaining - a, out);
    }
}

}  // namespace

bool finite_saturation_check(const FiniteInstance& inst, int grid_denominator) {
    if (!inst.rows_monotone())
        throw MonotonicityViolation("saturation check requires nondecreasing cost rows");
    if (inst.level_count() > 4) throw Error("saturation check limited to 4 levels");
    if (grid_denominator < 1 || grid_denominator > 20)
        throw Error("saturation grid denominator must lie in [1, 20]");

    std::vector<double> mu_survival(static_cast<std::size_t>(inst.level_count()));
    for (int lvl = 1; lvl <= inst.level_count(); ++lvl)
        mu_survival[static_cast<std::size_t>(lvl - 1)] = inst.mu.survival(lvl);

    std::vector<std::vector<double>> targets;
    std::vector<int> parts(static_cast<std::size_t>(inst.level_count()), 0);
    dominating_grid_targets(mu_survival, grid_denominator, parts, 0, grid_denominator, targets);

    const double at_mu = finite_kp_exact(inst).primal_value;
    double grid_min = std::numeric_limits<double>::infinity();
    for (const auto& target : targets) {
        grid_min =
            std::min(grid_min, transport_lp(inst.omega_weights, inst.cost, target).primal_value);
    }
    return grid_min >= at_mu - 1e-9;
}

}  // namespace mqh
