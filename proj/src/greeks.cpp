#include "asianmc/greeks.hpp"

#include <cmath>
#include <string>

#include "asianmc/errors.hpp"
#include "asianmc/identities.hpp"
#include "timing.hpp"

namespace asianmc {

double OptionSpec::discount() const { return std::exp(-rate * expiry); }

void OptionSpec::validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(s0) || !(s0 > 0.0)) throw DomainError("s0 must be > 0");
    if (!finite(strike) || !(strike >= 0.0)) throw DomainError("strike must be >= 0");
    if (!finite(sigma) || !(sigma > 0.0)) throw DomainError("sigma must be > 0");
    if (!finite(rate) || !(rate >= 0.0)) throw DomainError("rate must be >= 0");
    if (!finite(expiry) || !(expiry > 0.0)) throw DomainError("expiry must be > 0");
}

namespace {

void require_mc_method(Method m, const char* what) {
    if (m == Method::fd) throw DomainError(std::string(what) + " has no fd method");
}

struct SharedPaths {
    PathBatch driftless;
    std::optional<PathBatch> drift_one;

    const PathBatch& one() const {
        if (!drift_one) throw DomainError("drift-one paths were not simulated");
        return *drift_one;
    }
};

SharedPaths simulate(const OptionSpec& spec, const MCConfig& cfg, bool need_drift_one) {
    const double horizon = spec.horizon();
    SharedPaths p{sample_batch(horizon, {}, cfg), std::nullopt};
    if (need_drift_one) p.drift_one = sample_batch(horizon, {1.0}, cfg);
    return p;
}

// (S0/T) e^{-r tau} (A_T - a)^+ per path; a = 0 is allowed here so the
// bump-and-revalue oracle has no special cases.
PathValues naive_price_values(const OptionSpec& spec, const PathBatch& paths) {
    const double a = spec.scale();
    const double c = spec.s0 / spec.horizon() * spec.discount();
    const auto z = paths.integral();
    PathValues v;
    v.values.resize(paths.size());
    for (std::size_t i = 0; i < z.size(); ++i) v.values[i] = c * std::max(z[i] - a, 0.0);
    return v;
}

PathValues price_values(const OptionSpec& spec, const PathBatch& p0, Method method) {
    if (method == Method::naive) return naive_price_values(spec, p0);
    const PathValues kernel = call_kernel_values(spec.scale(), 0.0, p0, method);
    return linear_combination({{spec.s0 / spec.horizon() * spec.discount(), &kernel}});
}

PathValues delta_values(const OptionSpec& spec, const PathBatch& p0, Method method) {
    const double a = spec.scale();
    const double disc = spec.discount();
    const double moneyness = spec.strike / spec.s0;
    if (method == Method::naive) {
        // Delta = Call/S0 - (kappa/S0) e^{-r tau} d/da E[(A_T - a)^+].
        const PathValues call = naive_price_values(spec, p0);
        const PathValues d1 = call_kernel_d1_values(a, p0, Method::naive);
        return linear_combination({{1.0 / spec.s0, &call}, {-moneyness * disc, &d1}});
    }
    // e^{-r tau} + (kappa/S0) e^{-r tau - 2/a} E[w (a/(a+A) - 1)],  w = exp(2M/(a+A)).
    const auto m = p0.terminal();
    const auto z = p0.integral();
    std::vector<double> coeff(p0.size()), lw(p0.size());
    for (std::size_t i = 0; i < p0.size(); ++i) {
        coeff[i] = moneyness * disc * (a / (a + z[i]) - 1.0);
        lw[i] = 2.0 * m[i] / (a + z[i]) - 2.0 / a;
    }
    PathValues v = from_log_terms(coeff, lw);
    v.offset = disc;
    return v;
}

PathValues gamma_values(const OptionSpec& spec, const SharedPaths& p, Method method) {
    const double a = spec.scale();
    const double factor = spec.horizon() * spec.strike * spec.strike /
                          (spec.s0 * spec.s0 * spec.s0) * spec.discount();
    const PathValues g =
        method == Method::identity
            ? density_values(a, p.driftless, p.one(), method, 0.0)
            : density_values(a, p.driftless, p.driftless, method, default_bandwidth(a));
    return linear_combination({{factor, &g}});
}

// -(2/sigma) Call + (2 S0/sigma) e^{-r tau} Pr[A_T^{(1)} > a]
//   - (2 kappa/sigma) e^{-r tau} Pr[A_T > a],
// with the last discount factor dropped when discount_strike is false.
PathValues vega_values(const OptionSpec& spec, const SharedPaths& p, Method method,
                       bool discount_strike) {
    const double a = spec.scale();
    const double disc = spec.discount();
    const double strike_disc = discount_strike ? disc : 1.0;
    const PathValues call = price_values(spec, p.driftless, method);
    const PathValues f1 = cdf_values(a, p.one(), method);
    const PathValues f0 = cdf_values(a, p.driftless, method);
    const double up = 2.0 * spec.s0 / spec.sigma * disc;
    const double down = 2.0 * spec.strike / spec.sigma * strike_disc;
    return linear_combination({{-2.0 / spec.sigma, &call}, {-up, &f1}, {down, &f0}}, up - down);
}

// Theta = r Call - r S0 Delta - (1/2) sigma^2 S0^2 Gamma. The mean is the exact
// combination of the component means; the error comes from the per-path
// combination on the shared paths.
Estimate combine_theta(const OptionSpec& spec, const Estimate& price, const PathValues& pv,
                       const Estimate& delta, const PathValues& dv, const Estimate& gamma,
                       const PathValues& gv, Method method) {
    const double r = spec.rate;
    const double curvature = 0.5 * spec.sigma * spec.sigma * spec.s0 * spec.s0;
    const PathValues tv =
        linear_combination({{r, &pv}, {-r * spec.s0, &dv}, {-curvature, &gv}});
    Estimate e = summarize(tv, method);
    e.mean = r * price.mean - r * (spec.s0 * delta.mean) - curvature * gamma.mean;
    e.flags = price.flags | delta.flags | gamma.flags;
    return e;
}

Estimate closed_form_theta(const OptionSpec& spec, std::size_t n, Method method) {
    const double price = spec.s0 * spec.discount();
    const double delta = spec.discount();
    return exact(spec.rate * price - spec.rate * (spec.s0 * delta), n, method);
}

// ---- bump-and-revalue with common random numbers ------------------------

PathValues paired(const PathValues& up, const PathValues& down, double scale) {
    return linear_combination({{scale, &up}, {-scale, &down}});
}

Estimate fd_delta(const OptionSpec& spec, const PathBatch& p0, double rel) {
    const double h = rel * spec.s0;
    OptionSpec up = spec, down = spec;
    up.s0 += h;
    down.s0 -= h;
    return summarize(paired(naive_price_values(up, p0), naive_price_values(down, p0), 1.0 / (2.0 * h)),
                     Method::fd);
}

Estimate fd_gamma(const OptionSpec& spec, const PathBatch& p0, double rel) {
    const double h = rel * spec.s0;
    OptionSpec up = spec, down = spec;
    up.s0 += h;
    down.s0 -= h;
    const PathValues vu = naive_price_values(up, p0);
    const PathValues vm = naive_price_values(spec, p0);
    const PathValues vd = naive_price_values(down, p0);
    const double k = 1.0 / (h * h);
    return summarize(linear_combination({{k, &vu}, {-2.0 * k, &vm}, {k, &vd}}), Method::fd);
}

Estimate fd_vega(const OptionSpec& spec, const MCConfig& cfg, double rel) {
    const double h = rel * spec.sigma;
    OptionSpec up = spec, down = spec;
    up.sigma += h;
    down.sigma -= h;
    const PathBatch pu = sample_batch(up.horizon(), {}, cfg);
    const PathBatch pd = sample_batch(down.horizon(), {}, cfg);
    return summarize(paired(naive_price_values(up, pu), naive_price_values(down, pd), 1.0 / (2.0 * h)),
                     Method::fd);
}

Estimate fd_theta(const OptionSpec& spec, const MCConfig& cfg, double rel) {
    const double h = rel * spec.expiry;
    OptionSpec up = spec, down = spec;
    up.expiry += h;
    down.expiry -= h;
    const PathBatch pu = sample_batch(up.horizon(), {}, cfg);
    const PathBatch pd = sample_batch(down.horizon(), {}, cfg);
    // Theta is minus the sensitivity to time to expiry.
    return summarize(paired(naive_price_values(up, pu), naive_price_values(down, pd), -1.0 / (2.0 * h)),
                     Method::fd);
}

}  // namespace

Estimate price(const OptionSpec& spec, const MCConfig& cfg, Method method) {
    spec.validate();
    require_mc_method(method, "price");
    if (spec.strike == 0.0) return exact(spec.s0 * spec.discount(), cfg.n_paths, method);
    return detail::timed([&] {
        const PathBatch p0 = sample_batch(spec.horizon(), {}, cfg);
        return summarize(price_values(spec, p0, method), method);
    });
}

Estimate delta(const OptionSpec& spec, const MCConfig& cfg, Method method) {
    spec.validate();
    if (spec.strike == 0.0 && method != Method::fd) return exact(spec.discount(), cfg.n_paths, method);
    return detail::timed([&] {
        const PathBatch p0 = sample_batch(spec.horizon(), {}, cfg);
        if (method == Method::fd) return fd_delta(spec, p0, FdSteps{}.delta);
        return summarize(delta_values(spec, p0, method), method);
    });
}

Estimate gamma(const OptionSpec& spec, const MCConfig& cfg, Method method) {
    spec.validate();
    if (spec.strike == 0.0 && method != Method::fd) return exact(0.0, cfg.n_paths, method);
    return detail::timed([&] {
        if (method == Method::fd)
            return fd_gamma(spec, sample_batch(spec.horizon(), {}, cfg), FdSteps{}.gamma);
        const SharedPaths p = simulate(spec, cfg, method == Method::identity);
        return summarize(gamma_values(spec, p, method), method);
    });
}

Estimate vega(const OptionSpec& spec, const MCConfig& cfg, Method method) {
    spec.validate();
    if (spec.strike == 0.0 && method != Method::fd) return exact(0.0, cfg.n_paths, method);
    return detail::timed([&] {
        if (method == Method::fd) return fd_vega(spec, cfg, FdSteps{}.vega);
        const SharedPaths p = simulate(spec, cfg, true);
        return summarize(vega_values(spec, p, method, true), method);
    });
}

Estimate theta(const OptionSpec& spec, const MCConfig& cfg, Method method) {
    spec.validate();
    if (spec.strike == 0.0 && method != Method::fd) return closed_form_theta(spec, cfg.n_paths, method);
    return detail::timed([&] {
        if (method == Method::fd) return fd_theta(spec, cfg, FdSteps{}.theta);
        const SharedPaths p = simulate(spec, cfg, method == Method::identity);
        const PathValues pv = price_values(spec, p.driftless, method);
        const PathValues dv = delta_values(spec, p.driftless, method);
        const PathValues gv = gamma_values(spec, p, method);
        return combine_theta(spec, summarize(pv, method), pv, summarize(dv, method), dv,
                             summarize(gv, method), gv, method);
    });
}

GreekReport greeks(const OptionSpec& spec, const MCConfig& cfg, Method method, bool fd_check,
                   const FdSteps& steps) {
    spec.validate();
    GreekReport report;
    report.method = method;
    const std::size_t n = cfg.n_paths;

    if (spec.strike == 0.0 && method != Method::fd) {
        report.price = exact(spec.s0 * spec.discount(), n, method);
        report.delta = exact(spec.discount(), n, method);
        report.gamma = exact(0.0, n, method);
        report.vega = exact(0.0, n, method);
        report.theta = closed_form_theta(spec, n, method);
    }

    const bool need_paths = method == Method::fd || spec.strike > 0.0 || fd_check;
    std::optional<SharedPaths> paths;
    if (need_paths) paths = simulate(spec, cfg, method != Method::fd && spec.strike > 0.0);

    if (method == Method::fd) {
        report.price = detail::timed([&] {
            return spec.strike == 0.0 ? exact(spec.s0 * spec.discount(), n, Method::naive)
                                      : summarize(naive_price_values(spec, paths->driftless), Method::naive);
        });
        report.delta = detail::timed([&] { return fd_delta(spec, paths->driftless, steps.delta); });
        report.gamma = detail::timed([&] { return fd_gamma(spec, paths->driftless, steps.gamma); });
        report.vega = detail::timed([&] { return fd_vega(spec, cfg, steps.vega); });
        report.theta = detail::timed([&] { return fd_theta(spec, cfg, steps.theta); });
    } else if (spec.strike > 0.0) {
        PathValues pv, dv, gv;
        report.price = detail::timed([&] {
            pv = price_values(spec, paths->driftless, method);
            return summarize(pv, method);
        });
        report.delta = detail::timed([&] {
            dv = delta_values(spec, paths->driftless, method);
            return summarize(dv, method);
        });
        report.gamma = detail::timed([&] {
            gv = gamma_values(spec, *paths, method);
            return summarize(gv, method);
        });
        report.theta = detail::timed([&] {
            return combine_theta(spec, report.price, pv, report.delta, dv, report.gamma, gv, method);
        });
        report.vega = detail::timed(
            [&] { return summarize(vega_values(spec, *paths, method, true), method); });
        if (spec.rate > 0.0)
            report.vega_undiscounted_strike = detail::timed(
                [&] { return summarize(vega_values(spec, *paths, method, false), method); });
    }

    if (fd_check) {
        report.fd_cross_checks["delta"] =
            detail::timed([&] { return fd_delta(spec, paths->driftless, steps.delta); });
        report.fd_cross_checks["gamma"] =
            detail::timed([&] { return fd_gamma(spec, paths->driftless, steps.gamma); });
        report.fd_cross_checks["theta"] = detail::timed([&] { return fd_theta(spec, cfg, steps.theta); });
        report.fd_cross_checks["vega"] = detail::timed([&] { return fd_vega(spec, cfg, steps.vega); });
    }
    return report;
}

}  // namespace asianmc
