#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asianmc {

enum class Method { naive, identity, fd };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);

namespace flags {
inline constexpr unsigned none = 0;
inline constexpr unsigned closed_form = 1u << 0;
inline constexpr unsigned tail_underflow = 1u << 1;
}  // namespace flags

/// "closed_form|tail_underflow" style rendering; empty for no flags.
std::string flags_to_string(unsigned f);

/// A Monte Carlo result. `std_error` is the sample standard deviation of the
/// per-path contributions divided by sqrt(n_paths).
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 1;
    Method method = Method::naive;
    double wall_time_ms = 0.0;
    unsigned flags = flags::none;
};

/// sqrt(se_a^2 + se_b^2).
double combined_stderr(const Estimate& a, const Estimate& b);

/// Per-path contributions of an estimator. Path i contributes
/// offset + exp(log_scale) * values[i]; the scale lets weights such as
/// exp(2M/(a+A) - 2/a) be carried without overflow or underflow.
struct PathValues {
    double offset = 0.0;
    double log_scale = 0.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
};

/// Build values[i] = coeff[i] * exp(log_weight[i] - shift) with the shift
/// chosen as the largest log weight among nonzero coefficients.
PathValues from_log_terms(std::span<const double> coeff, std::span<const double> log_weight);

/// sum_k c_k * V_k, path by path. All inputs must have the same path count.
PathValues linear_combination(std::initializer_list<std::pair<double, const PathValues*>> terms,
                              double extra_offset = 0.0);

/// Mean and standard error of the per-path contributions. If the scaled mean
/// falls below the smallest normal double it is reported as exactly 0 with
/// std_error 0 and the tail_underflow flag.
Estimate summarize(const PathValues& v, Method method);

/// Closed-form result: zero standard error, closed_form flag.
Estimate exact(double value, std::size_t n_paths, Method method);

}  // namespace asianmc
