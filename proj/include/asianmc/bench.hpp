#pragma once

// Parameter sweeps over the estimators, and the quadrature bias table.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asianmc/estimate.hpp"
#include "asianmc/gbm.hpp"

namespace asianmc {

enum class Quantity {
    cdf,
    density,
    joint_cdf,
    call_kernel,
    call_kernel_d1,
    call_kernel_d2,
    price,
    delta,
    gamma,
    theta,
    vega,
};

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view s);
bool is_option_quantity(Quantity q);

/// Coordinates of one sweep point. Fields a quantity does not use stay empty.
struct GridPoint {
    std::optional<double> a, t, nu, b;
    std::optional<double> s0, strike, sigma, rate, expiry;
    std::size_t n_paths = 0;
};

struct SweepSpec {
    Quantity quantity = Quantity::cdf;
    std::vector<double> a, t, nu, b;
    std::vector<double> s0, strike, sigma, rate, expiry;
    std::vector<std::size_t> n_paths;
    std::vector<std::uint64_t> seeds;
    std::vector<Method> methods;

    std::size_t steps_per_unit = 1024;
    std::size_t min_steps = 256;
    bool antithetic = false;
    unsigned threads = 0;
    /// Naive density / second-derivative bandwidth. When unset:
    /// max(0.05 a, 2 * smallest spacing of the a grid).
    std::optional<double> bandwidth;
};

struct SweepRow {
    GridPoint point;
    Method method = Method::naive;
    std::uint64_t seed = 0;
    std::size_t n_steps = 0;
    std::optional<Estimate> estimate;
    std::string error;  // set instead of `estimate` when the point failed
};

struct PointSummary {
    GridPoint point;
    std::vector<Method> methods;
    std::vector<double> mean_of_means;   // parallel to `methods`
    std::vector<double> mean_stderr;     // parallel to `methods`
    /// mean naive stderr / mean identity stderr; empty unless both were run.
    std::optional<double> stderr_ratio;
    /// Seeds at which the identity stderr was strictly below the naive one.
    std::size_t identity_wins = 0;
    std::size_t seeds = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<PointSummary> summary;
};

/// The grid points of a spec, in row order.
std::vector<GridPoint> expand_grid(const SweepSpec& spec);

/// Rows ordered by grid point, then method, then seed. A failing point is
/// recorded in its row and the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

/// Recomputes the per-point summary from rows alone.
std::vector<PointSummary> summarize_rows(const std::vector<SweepRow>& rows);

struct BiasRow {
    std::size_t n_steps = 0;
    double mean_integral = 0.0;
    double std_error = 0.0;
    double closed_form = 0.0;
    double gap = 0.0;  // |mean_integral - closed_form|
};

/// Mean trapezoid integral against (e^{nu t} - 1)/nu for each step count,
/// all on the same seed (cfg.n_steps is ignored).
std::vector<BiasRow> quadrature_bias_report(double t, DriftSpec drift,
                                            const std::vector<std::size_t>& steps,
                                            const MCConfig& cfg);

}  // namespace asianmc
