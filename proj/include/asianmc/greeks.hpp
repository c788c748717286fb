#pragma once

// Fixed-strike Asian call on the continuous average over [0, tau], valued at
// the start of the averaging period:
//
//   Call = S0 / (tau sigma^2) e^{-r tau} E[(A_T - a)^+],  T = sigma^2 tau,
//   a = sigma^2 kappa tau / S0,
//
// and its sensitivities. Method::identity evaluates the measure-change
// representations, Method::naive evaluates the same representations with
// direct path estimators, Method::fd bumps the naive price with common
// random numbers.

#include <map>
#include <optional>
#include <string>

#include "asianmc/estimate.hpp"
#include "asianmc/gbm.hpp"

namespace asianmc {

struct OptionSpec {
    double s0 = 1.0;
    double strike = 1.0;
    double sigma = 1.0;
    double rate = 0.0;
    double expiry = 1.0;

    /// a = sigma^2 kappa tau / S0.
    double scale() const noexcept { return sigma * sigma * strike * expiry / s0; }
    /// T = sigma^2 tau.
    double horizon() const noexcept { return sigma * sigma * expiry; }
    double discount() const;

    void validate() const;
};

/// Finite-difference bump sizes, relative to the bumped parameter.
struct FdSteps {
    double delta = 1e-2;   // x S0
    double gamma = 5e-2;   // x S0
    double vega = 1e-2;    // x sigma
    double theta = 5e-2;   // x tau
};

struct GreekReport {
    Estimate price, delta, gamma, theta, vega;
    Method method = Method::identity;
    /// Keys "delta", "gamma", "theta", "vega" when requested.
    std::map<std::string, Estimate> fd_cross_checks;
    /// Vega with the strike term left undiscounted; only filled when rate > 0,
    /// where it differs from `vega`.
    std::optional<Estimate> vega_undiscounted_strike;
};

Estimate price(const OptionSpec& spec, const MCConfig& cfg, Method method);
Estimate delta(const OptionSpec& spec, const MCConfig& cfg, Method method);
Estimate gamma(const OptionSpec& spec, const MCConfig& cfg, Method method);
Estimate theta(const OptionSpec& spec, const MCConfig& cfg, Method method);
Estimate vega(const OptionSpec& spec, const MCConfig& cfg, Method method);

/// All five Greeks on one shared set of paths. With fd_check, the four
/// sensitivities are also computed by bump-and-revalue.
GreekReport greeks(const OptionSpec& spec, const MCConfig& cfg, Method method,
                   bool fd_check = false, const FdSteps& steps = {});

}  // namespace asianmc
