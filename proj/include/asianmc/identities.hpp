#pragma once

// Estimators for the law of A_t = int_0^t exp(B_s - s/2) ds built on the
// exponential change of measure
//
//   E[f(M_t, A_t); A_t < a]
//     = e^{-2/a} E[ f(M_t / (1 + A_t/a)^2, A_t / (1 + A_t/a)) exp(2 M_t / (a + A_t)) ],
//
// each paired with a direct ("naive") path estimator of the same quantity.
//
// Every quantity comes in two layers: a *_values function that returns the
// per-path contributions over an already simulated PathBatch (so several
// estimators can share paths and their errors can be combined path by path),
// and a convenience function that simulates the paths it needs.

#include <functional>
#include <optional>

#include "asianmc/estimate.hpp"
#include "asianmc/gbm.hpp"

namespace asianmc {

/// Threshold a (= 2/y in the measure change), horizon t, drift.
struct TransformParams {
    double a = 1.0;
    double t = 1.0;
    DriftSpec drift{};
};

/// f(w, z) evaluated at the transformed terminal value and time integral.
using PathFunction = std::function<double(double w, double z)>;

/// (e^{nu t} - 1) / nu, equal to t at nu = 0 and evaluated without cancellation near it.
double growth_factor(double nu, double t);

/// Bandwidth of the finite-difference density oracles: 0.05 a.
double default_bandwidth(double a);

// ---- per-path contributions ------------------------------------------------

PathValues transform_values(const PathFunction& f, double a, const PathBatch& driftless);

/// Pr[A_t^{(nu)} <= a] with nu taken from the batch. The identity form is
///   a^{2nu} e^{-2/a} E[(a + A^{(nu)})^{-2nu} exp(2 W^{(nu)} / (a + A^{(nu)}))]
/// over drift-nu paths; the naive form is the indicator.
PathValues cdf_values(double a, const PathBatch& paths, Method method);

/// Pr[A_t^{(nu)} <= a] as E[M_t^nu e^{nu t/2 - nu^2 t/2}; A_t <= a] on driftless paths.
PathValues cdf_drift_change_values(double a, double nu, const PathBatch& driftless);

/// g_t(a). Identity: (2/a^2)(Pr[A_t <= a] - Pr[A_t^{(1)} <= a]) with both
/// terms from the identity CDF; the two batches must share seeds so path i
/// of each uses the same normals. Naive: central difference of the
/// empirical CDF with the given bandwidth (drift_one is unused).
PathValues density_values(double a, const PathBatch& driftless, const PathBatch& drift_one,
                          Method method, double bandwidth);

PathValues joint_cdf_values(double b, double a, const PathBatch& driftless, Method method);

/// E[(A_t^{(nu)} - a)^+]. The identity form needs a driftless batch; the naive
/// form needs a drift-nu batch.
PathValues call_kernel_values(double a, double nu, const PathBatch& paths, Method method);

/// d/da E[(A_t - a)^+] = -1 + Pr[A_t <= a].
PathValues call_kernel_d1_values(double a, const PathBatch& driftless, Method method);

/// d^2/da^2 E[(A_t - a)^+] = g_t(a). Naive: second central difference of the
/// payoff with the given bandwidth.
PathValues call_kernel_d2_values(double a, const PathBatch& driftless, Method method,
                                 double bandwidth);

// ---- simulate-and-estimate entry points -------------------------------------

/// Estimates E[f(M_t, A_t); A_t < a] through the measure change (drift must be 0).
Estimate transform_expectation(const PathFunction& f, const TransformParams& params,
                               const MCConfig& cfg);

Estimate cdf(double a, double t, DriftSpec drift, const MCConfig& cfg, Method method);

/// Drift-change route to Pr[A_t^{(nu)} <= a]; reported alongside the identity
/// CDF as an independent check of the drifted formula.
Estimate cdf_drift_change(double a, double t, DriftSpec drift, const MCConfig& cfg);

Estimate density(double a, double t, const MCConfig& cfg, Method method,
                 std::optional<double> bandwidth = std::nullopt);

Estimate joint_cdf(double b, double a, double t, const MCConfig& cfg, Method method);

Estimate call_kernel(double a, double t, DriftSpec drift, const MCConfig& cfg, Method method);

Estimate call_kernel_d1(double a, double t, const MCConfig& cfg, Method method);

Estimate call_kernel_d2(double a, double t, const MCConfig& cfg, Method method,
                        std::optional<double> bandwidth = std::nullopt);

}  // namespace asianmc
