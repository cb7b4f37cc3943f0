#ifndef MQH_MARKET_HPP
#define MQH_MARKET_HPP

#include <cstddef>
#include <vector>

#include "mqh/rng.hpp"

namespace mqh {

// Black-Scholes market: dX = drift*X dt + sigma*X dW, constant rate, horizon T.
struct BsParams {
    double x0;
    double drift;  // physical-measure drift, the paper's b-hat
    double sigma;
    double rate;
    double horizon;

    BsParams(double x0_, double drift_, double sigma_, double rate_, double horizon_);

    // Market price of Brownian risk, (drift - rate) / sigma.
    double risk_premium() const { return (drift - rate) / sigma; }
};

enum class PayoffKind { zero, call, put };

// Paired terminal samples (X_T, Gamma_T), with the driving Brownian increment
// kept so the lognormal reconstruction can be audited.
struct ScenarioBatch {
    std::vector<double> x_terminal;
    std::vector<double> kernel;    // Gamma_T = exp(-lambda*W_T - lambda^2*T/2), > 0
    std::vector<double> brownian;  // W_T
    SeededStream stream;

    std::size_t size() const { return x_terminal.size(); }

    // Largest relative deviation of the stored (X_T, Gamma_T) from their
    // closed-form expressions in terms of the stored W_T.
    double max_reconstruction_error(const BsParams& params) const;
};

// Exact terminal sampling: W_T ~ Normal(0, T) drawn once per scenario, no
// time discretization. Deterministic given the stream.
ScenarioBatch simulate_bs(const BsParams& params, std::size_t count, SeededStream stream);

// Closed form for E[Gamma_T * payoff(X_T)] with the kernel above. With
// rate = 0 this is the textbook Black-Scholes price; for rate != 0 it carries
// the e^{rate*T} factor of the undiscounted risk-neutral expectation, so that
// it matches the Monte-Carlo average of Gamma_T * payoff exactly.
double bs_vanilla_price(const BsParams& params, PayoffKind kind, double strike);

}  // namespace mqh

#endif  // MQH_MARKET_HPP
