#pragma once

// Reference values shared by the unit and acceptance tests.
//
// Closed forms come from E[M_s M_u] = e^{min(s,u)}. The simulated references
// were produced by a separate numpy program (forward-summed Gaussian
// increments, 512-step trapezoid, 10^6 paths, generator seed 20261015), so
// they share no code with the library.

#include <cmath>

namespace oracle {

struct Reference {
    double value;
    double std_error;
};

// E[A_t] and E[A_t^2] for nu = 0.
inline double mean_integral(double t) { return t; }
inline double second_moment_integral(double t) { return 2.0 * (std::exp(t) - 1.0 - t); }

// E[A_t^{(nu)}] = (e^{nu t} - 1) / nu.
inline double drifted_mean_integral(double nu, double t) {
    return nu == 0.0 ? t : std::expm1(nu * t) / nu;
}

// Single trapezoid interval over [0, 1] with B_1 = 0.
inline const double kOneStepTrapezoid = 0.5 * (1.0 + std::exp(-0.5));

inline constexpr Reference kCdf_a1_t1{0.633694, 0.000482};
inline constexpr Reference kCdfDriftOne_a1_t1{0.302811, 0.000459};
inline constexpr Reference kKernel_a1_t1{0.225992, 0.000533};
inline constexpr Reference kKernel_a04_t05{0.131675, 0.000191};
inline constexpr Reference kJoint_b1_a1_t1{0.581889, 0.000493};
// (F(1.05) - F(0.95)) / 0.1 at t = 1.
inline constexpr Reference kDensityDifference_a1_t1{0.661960, 0.002486};

// Asian call at s0 = strike = sigma = expiry = 1, r = 0: equals the kernel at a = t = 1.
inline constexpr Reference kPriceUnit = kKernel_a1_t1;

}  // namespace oracle
