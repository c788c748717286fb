#include "asianmc/identities.hpp"

#include <cmath>
#include <string>

#include "asianmc/errors.hpp"
#include "timing.hpp"

namespace asianmc {

namespace {

void require_threshold(double a, const char* name = "a") {
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(a));
}

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t))
        throw DomainError("t must be finite and > 0, got " + std::to_string(t));
}

void require_driftless(const PathBatch& b, const char* what) {
    if (b.nu() != 0.0) throw DomainError(std::string(what) + " needs driftless paths");
}

void require_mc_method(Method m) {
    if (m == Method::fd) throw DomainError("method 'fd' is only defined for option Greeks");
}

// log of the measure-change weight exp(2M/(a+A) - 2/a).
inline double tilt(double m, double z, double a) { return 2.0 * m / (a + z) - 2.0 / a; }

PathValues indicator_values(const PathBatch& p, auto&& pred) {
    PathValues v;
    v.values.resize(p.size());
    const auto m = p.terminal();
    const auto z = p.integral();
    for (std::size_t i = 0; i < p.size(); ++i) v.values[i] = pred(m[i], z[i]) ? 1.0 : 0.0;
    return v;
}

}  // namespace

double growth_factor(double nu, double t) {
    const double x = nu * t;
    if (std::abs(x) < 1e-8) return t * (1.0 + x / 2.0 + x * x / 6.0);
    return std::expm1(x) / nu;
}

double default_bandwidth(double a) { return 0.05 * a; }

PathValues transform_values(const PathFunction& f, double a, const PathBatch& driftless) {
    require_threshold(a);
    require_driftless(driftless, "transform_expectation");
    const std::size_t n = driftless.size();
    const auto m = driftless.terminal();
    const auto z = driftless.integral();
    std::vector<double> coeff(n), lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double shrink = 1.0 + z[i] / a;
        const double fx = f(m[i] / (shrink * shrink), z[i] / shrink);
        if (!std::isfinite(fx))
            throw NumericError("f returned a non-finite value on path " + std::to_string(i),
                               static_cast<long long>(i));
        coeff[i] = fx;
        lw[i] = tilt(m[i], z[i], a);
    }
    return from_log_terms(coeff, lw);
}

PathValues cdf_values(double a, const PathBatch& paths, Method method) {
    require_threshold(a);
    require_mc_method(method);
    if (method == Method::naive)
        return indicator_values(paths, [a](double, double z) { return z <= a; });

    const double nu = paths.nu();
    const std::size_t n = paths.size();
    const auto w = paths.terminal();
    const auto z = paths.integral();
    std::vector<double> coeff(n, 1.0), lw(n);
    const double log_a = std::log(a);
    for (std::size_t i = 0; i < n; ++i) {
        lw[i] = tilt(w[i], z[i], a);
        if (nu != 0.0) lw[i] += 2.0 * nu * (log_a - std::log(a + z[i]));
    }
    return from_log_terms(coeff, lw);
}

PathValues cdf_drift_change_values(double a, double nu, const PathBatch& driftless) {
    require_threshold(a);
    require_driftless(driftless, "drift-change CDF");
    const double t = driftless.t();
    const double drift_term = nu * t / 2.0 - nu * nu * t / 2.0;
    const std::size_t n = driftless.size();
    const auto m = driftless.terminal();
    const auto z = driftless.integral();
    std::vector<double> coeff(n), lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        coeff[i] = z[i] <= a ? 1.0 : 0.0;
        lw[i] = nu * std::log(m[i]) + drift_term;
    }
    return from_log_terms(coeff, lw);
}

PathValues density_values(double a, const PathBatch& driftless, const PathBatch& drift_one,
                          Method method, double bandwidth) {
    require_threshold(a);
    require_mc_method(method);
    require_driftless(driftless, "density");
    if (method == Method::naive) {
        require_threshold(bandwidth, "bandwidth");
        const double lo = a - bandwidth;
        const double hi = a + bandwidth;
        PathValues v = indicator_values(driftless, [=](double, double z) { return z > lo && z <= hi; });
        for (double& x : v.values) x /= 2.0 * bandwidth;
        return v;
    }
    if (drift_one.nu() != 1.0) throw DomainError("identity density needs a drift-one batch");
    if (drift_one.size() != driftless.size() ||
        drift_one.config().master_seed != driftless.config().master_seed ||
        drift_one.t() != driftless.t())
        throw DomainError("identity density needs batches with matching seed, size and horizon");
    const PathValues f0 = cdf_values(a, driftless, Method::identity);
    const PathValues f1 = cdf_values(a, drift_one, Method::identity);
    const double k = 2.0 / (a * a);
    return linear_combination({{k, &f0}, {-k, &f1}});
}

PathValues joint_cdf_values(double b, double a, const PathBatch& driftless, Method method) {
    require_threshold(a);
    require_threshold(b, "b");
    require_mc_method(method);
    require_driftless(driftless, "joint CDF");
    if (method == Method::naive)
        return indicator_values(driftless, [=](double m, double z) { return m < b && z < a; });

    const std::size_t n = driftless.size();
    const auto m = driftless.terminal();
    const auto z = driftless.integral();
    std::vector<double> coeff(n), lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double shrink = 1.0 + z[i] / a;
        coeff[i] = m[i] <= b * shrink * shrink ? 1.0 : 0.0;
        lw[i] = tilt(m[i], z[i], a);
    }
    return from_log_terms(coeff, lw);
}

PathValues call_kernel_values(double a, double nu, const PathBatch& paths, Method method) {
    require_threshold(a);
    require_mc_method(method);
    const std::size_t n = paths.size();
    const auto m = paths.terminal();
    const auto z = paths.integral();

    if (method == Method::naive) {
        if (paths.nu() != nu) throw DomainError("naive call kernel needs drift-nu paths");
        PathValues v;
        v.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) v.values[i] = std::max(z[i] - a, 0.0);
        return v;
    }

    require_driftless(paths, "identity call kernel");
    const double t = paths.t();
    const double drift_term = nu * t / 2.0 - nu * nu * t / 2.0;
    const double power = 2.0 * nu + 1.0;
    std::vector<double> coeff(n), lw(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double ratio = a / (a + z[i]);
        // a^{2nu+2} (a+A)^{-(2nu+1)} written as a * (a/(a+A))^{2nu+1}.
        coeff[i] = a * (nu == 0.0 ? ratio : std::pow(ratio, power));
        lw[i] = tilt(m[i], z[i], a);
        if (nu != 0.0) lw[i] += nu * std::log(m[i]) + drift_term;
    }
    PathValues v = from_log_terms(coeff, lw);
    v.offset = growth_factor(nu, t) - a;
    return v;
}

PathValues call_kernel_d1_values(double a, const PathBatch& driftless, Method method) {
    PathValues v = cdf_values(a, driftless, method);
    require_driftless(driftless, "call kernel derivative");
    v.offset = -1.0;
    return v;
}

PathValues call_kernel_d2_values(double a, const PathBatch& driftless, Method method,
                                 double bandwidth) {
    require_threshold(a);
    require_mc_method(method);
    require_driftless(driftless, "call kernel second derivative");
    const std::size_t n = driftless.size();
    const auto m = driftless.terminal();
    const auto z = driftless.integral();

    if (method == Method::naive) {
        require_threshold(bandwidth, "bandwidth");
        const double h = bandwidth;
        PathValues v;
        v.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double up = std::max(z[i] - (a + h), 0.0);
            const double mid = std::max(z[i] - a, 0.0);
            const double down = std::max(z[i] - (a - h), 0.0);
            v.values[i] = (up - 2.0 * mid + down) / (h * h);
        }
        return v;
    }

    std::vector<double> coeff(n), lw(n);
    const double k = 2.0 / (a * a);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = a + z[i];
        coeff[i] = k - 2.0 * m[i] / (s * s);
        lw[i] = tilt(m[i], z[i], a);
    }
    return from_log_terms(coeff, lw);
}

// ---- entry points -----------------------------------------------------------

Estimate transform_expectation(const PathFunction& f, const TransformParams& params,
                               const MCConfig& cfg) {
    require_threshold(params.a);
    if (params.drift.nu != 0.0) throw DomainError("transform_expectation is defined for nu = 0");
    return detail::timed([&] {
        const PathBatch paths = sample_batch(params.t, {}, cfg);
        return summarize(transform_values(f, params.a, paths), Method::identity);
    });
}

Estimate cdf(double a, double t, DriftSpec drift, const MCConfig& cfg, Method method) {
    require_threshold(a);
    require_mc_method(method);
    return detail::timed([&] {
        const PathBatch paths = sample_batch(t, drift, cfg);
        return summarize(cdf_values(a, paths, method), method);
    });
}

Estimate cdf_drift_change(double a, double t, DriftSpec drift, const MCConfig& cfg) {
    require_threshold(a);
    return detail::timed([&] {
        const PathBatch paths = sample_batch(t, {}, cfg);
        return summarize(cdf_drift_change_values(a, drift.nu, paths), Method::naive);
    });
}

Estimate density(double a, double t, const MCConfig& cfg, Method method,
                 std::optional<double> bandwidth) {
    require_threshold(a);
    require_positive_time(t);
    require_mc_method(method);
    return detail::timed([&] {
        const PathBatch p0 = sample_batch(t, {}, cfg);
        if (method == Method::naive)
            return summarize(density_values(a, p0, p0, method, bandwidth.value_or(default_bandwidth(a))),
                             method);
        const PathBatch p1 = sample_batch(t, {1.0}, cfg);
        return summarize(density_values(a, p0, p1, method, 0.0), method);
    });
}

Estimate joint_cdf(double b, double a, double t, const MCConfig& cfg, Method method) {
    require_threshold(a);
    require_threshold(b, "b");
    require_positive_time(t);
    require_mc_method(method);
    return detail::timed([&] {
        const PathBatch paths = sample_batch(t, {}, cfg);
        return summarize(joint_cdf_values(b, a, paths, method), method);
    });
}

Estimate call_kernel(double a, double t, DriftSpec drift, const MCConfig& cfg, Method method) {
    require_threshold(a);
    require_mc_method(method);
    return detail::timed([&] {
        const PathBatch paths =
            sample_batch(t, method == Method::identity ? DriftSpec{} : drift, cfg);
        return summarize(call_kernel_values(a, drift.nu, paths, method), method);
    });
}

Estimate call_kernel_d1(double a, double t, const MCConfig& cfg, Method method) {
    require_threshold(a);
    require_positive_time(t);
    require_mc_method(method);
    return detail::timed([&] {
        const PathBatch paths = sample_batch(t, {}, cfg);
        return summarize(call_kernel_d1_values(a, paths, method), method);
    });
}

Estimate call_kernel_d2(double a, double t, const MCConfig& cfg, Method method,
                        std::optional<double> bandwidth) {
    require_threshold(a);
    require_positive_time(t);
    require_mc_method(method);
    return detail::timed([&] {
        const PathBatch paths = sample_batch(t, {}, cfg);
        return summarize(
            call_kernel_d2_values(a, paths, method, bandwidth.value_or(default_bandwidth(a))),
            method);
    });
}

}  // namespace asianmc
