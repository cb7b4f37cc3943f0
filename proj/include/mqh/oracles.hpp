#ifndef MQH_ORACLES_HPP
#define MQH_ORACLES_HPP

#include <span>
#include <vector>

#include "mqh/dual_sga.hpp"
#include "mqh/market.hpp"
#include "mqh/measures.hpp"
#include "mqh/payoffs.hpp"

namespace mqh {

// Closed form for the PnL-hedging price with ladder g^n = payoff + gamma(n).
//
// With lambda > 0 the kernel is decreasing in W_T, so the comonotone optimal
// assignment sends level n to the Brownian band where Phi(W_T/sqrt(T)) lies
// in (A_{n-1}, A_n], A_n the cumulative mass of levels up to n. Weighting a
// Brownian band by the kernel shifts its endpoints by lambda*sqrt(T), which
// gives
//   price = vanilla price
//         + sum_n gamma(n) * [Phi(Phi^{-1}(A_n) + lambda*sqrt(T))
//                             - Phi(Phi^{-1}(A_{n-1}) + lambda*sqrt(T))].
// For lambda < 0 the quantile map reverses and the band endpoints negate.
// Requires lambda != 0 (otherwise the kernel has an atom and the comonotone
// map is not pinned down); callers should fall back to pnl_ot_mc then.
double pnl_ot_semianalytic(const BsParams& params, PayoffKind base, double strike,
                           std::span<const double> gamma, const DiscreteMeasure& mu);

// Monte-Carlo value of the same assignment: sort scenarios by decreasing
// kernel, give level n to the empirical quantile block (A_{n-1}, A_n], and
// average kernel * (payoff + gamma(level)).
McEstimate pnl_ot_mc(const ScenarioBatch& batch, PayoffKind base, double strike,
                     std::span<const double> gamma, const DiscreteMeasure& mu);

// Exact maximizer of the one-dimensional dual for classical quantile hedging
// (two-level ladder with zero lower level): the optimal threshold is the
// empirical p-quantile of kernel * payoff. Returns the attained objective.
double qh_dual_1d(const ScenarioBatch& batch, const PayoffLadder& ladder, double p);

}  // namespace mqh

#endif  // MQH_ORACLES_HPP
