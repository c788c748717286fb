#pragma once

// Brownian path generation and the two path functionals used everywhere:
// the terminal value W_t = exp(B_t + (nu - 1/2) t) and the trapezoid
// quadrature of A_t = int_0^t exp(B_s + (nu - 1/2) s) ds.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace asianmc {

/// Drift parameter of the exponential. nu = 0 is the martingale case M_t.
struct DriftSpec {
    double nu = 0.0;
};

/// Reproducibility and cost contract of a Monte Carlo run.
///
/// Path i is a pure function of (master_seed, i); `threads` only changes
/// how the work is scheduled, never the numbers produced.
struct MCConfig {
    std::size_t n_paths = 100000;
    std::size_t n_steps = 1024;
    std::uint64_t master_seed = 42;
    bool antithetic = false;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct PathSample {
    double terminal = 1.0;
    double integral = 0.0;
};

/// Materialized set of paths for one (t, nu, config). Read-only once built,
/// so it can be shared by every estimator evaluated at this horizon.
class PathBatch {
public:
    PathBatch(double t, DriftSpec drift, const MCConfig& cfg,
              std::vector<double> terminal, std::vector<double> integral);

    double t() const noexcept { return t_; }
    double nu() const noexcept { return drift_.nu; }
    const MCConfig& config() const noexcept { return cfg_; }
    std::size_t size() const noexcept { return terminal_.size(); }

    std::span<const double> terminal() const noexcept { return terminal_; }
    std::span<const double> integral() const noexcept { return integral_; }

    PathSample operator[](std::size_t i) const { return {terminal_[i], integral_[i]}; }

private:
    double t_;
    DriftSpec drift_;
    MCConfig cfg_;
    std::vector<double> terminal_;
    std::vector<double> integral_;
};

/// Default grid size for horizon t: 1024 steps per unit time, at least 256.
std::size_t default_steps(double t, std::size_t steps_per_unit = 1024,
                          std::size_t min_steps = 256);

/// Terminal value and trapezoid integral of exp(B_s + (nu - 1/2) s) for the
/// Brownian values `brownian[k] = B(k t / n)`, k = 0..n.
PathSample path_functionals(double t, DriftSpec drift, std::span<const double> brownian);

/// Key of the generator used by path `path_index`. Counter-based: no state
/// is shared between paths.
std::uint64_t path_key(std::uint64_t master_seed, std::uint64_t path_index);

/// One path, sampled exactly at the grid points and built by Brownian-bridge
/// bisection, so that grids of N and 2N steps share their coarse points.
PathSample sample_path(double t, DriftSpec drift, const MCConfig& cfg, std::size_t path_index);

/// All cfg.n_paths paths in index order. With cfg.antithetic, path 2k+1
/// uses the negated normals of path 2k.
PathBatch sample_batch(double t, DriftSpec drift, const MCConfig& cfg);

}  // namespace asianmc
