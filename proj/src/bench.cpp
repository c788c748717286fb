#include "asianmc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <tuple>

#include "asianmc/errors.hpp"
#include "asianmc/greeks.hpp"
#include "asianmc/identities.hpp"
#include "timing.hpp"

namespace asianmc {

namespace {

constexpr std::pair<Quantity, std::string_view> kQuantityNames[] = {
    {Quantity::cdf, "cdf"},
    {Quantity::density, "density"},
    {Quantity::joint_cdf, "joint_cdf"},
    {Quantity::call_kernel, "call_kernel"},
    {Quantity::call_kernel_d1, "call_kernel_d1"},
    {Quantity::call_kernel_d2, "call_kernel_d2"},
    {Quantity::price, "price"},
    {Quantity::delta, "delta"},
    {Quantity::gamma, "gamma"},
    {Quantity::theta, "theta"},
    {Quantity::vega, "vega"},
};

using BatchKey = std::tuple<double, double, std::size_t, std::size_t, std::uint64_t>;

// Paths shared by all rows of a sweep with the same (t, nu, size, steps, seed).
class BatchCache {
public:
    const PathBatch& get(double t, double nu, const MCConfig& cfg) {
        const BatchKey key{t, nu, cfg.n_paths, cfg.n_steps, cfg.master_seed};
        auto it = cache_.find(key);
        if (it == cache_.end())
            it = cache_.emplace(key, std::make_unique<PathBatch>(sample_batch(t, {nu}, cfg))).first;
        return *it->second;
    }

private:
    std::map<BatchKey, std::unique_ptr<PathBatch>> cache_;
};

const std::vector<double>& required(const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw DomainError(std::string("sweep needs a nonempty '") + name + "' grid");
    return grid;
}

double smallest_spacing(std::vector<double> grid) {
    std::sort(grid.begin(), grid.end());
    double best = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d = grid[i] - grid[i - 1];
        if (d > 0.0 && (best == 0.0 || d < best)) best = d;
    }
    return best;
}

Estimate evaluate(const SweepSpec& spec, const GridPoint& p, Method method, const MCConfig& cfg,
                  BatchCache& cache, double spacing) {
    const auto bandwidth = [&](double a) {
        return spec.bandwidth.value_or(std::max(default_bandwidth(a), 2.0 * spacing));
    };
    if (method == Method::fd && !is_option_quantity(spec.quantity))
        throw DomainError("method 'fd' is only defined for option Greeks");

    switch (spec.quantity) {
        case Quantity::cdf:
            return detail::timed([&] {
                return summarize(cdf_values(*p.a, cache.get(*p.t, *p.nu, cfg), method), method);
            });
        case Quantity::density:
            return detail::timed([&] {
                if (!(*p.t > 0.0)) throw DomainError("density needs t > 0");
                const PathBatch& p0 = cache.get(*p.t, 0.0, cfg);
                if (method == Method::naive)
                    return summarize(density_values(*p.a, p0, p0, method, bandwidth(*p.a)), method);
                return summarize(density_values(*p.a, p0, cache.get(*p.t, 1.0, cfg), method, 0.0),
                                 method);
            });
        case Quantity::joint_cdf:
            return detail::timed([&] {
                if (!(*p.t > 0.0)) throw DomainError("joint_cdf needs t > 0");
                return summarize(joint_cdf_values(*p.b, *p.a, cache.get(*p.t, 0.0, cfg), method), method);
            });
        case Quantity::call_kernel:
            return detail::timed([&] {
                const double nu = method == Method::identity ? 0.0 : *p.nu;
                return summarize(call_kernel_values(*p.a, *p.nu, cache.get(*p.t, nu, cfg), method),
                                 method);
            });
        case Quantity::call_kernel_d1:
            return detail::timed([&] {
                if (!(*p.t > 0.0)) throw DomainError("call_kernel_d1 needs t > 0");
                return summarize(call_kernel_d1_values(*p.a, cache.get(*p.t, 0.0, cfg), method), method);
            });
        case Quantity::call_kernel_d2:
            return detail::timed([&] {
                if (!(*p.t > 0.0)) throw DomainError("call_kernel_d2 needs t > 0");
                return summarize(
                    call_kernel_d2_values(*p.a, cache.get(*p.t, 0.0, cfg), method, bandwidth(*p.a)),
                    method);
            });
        default:
            break;
    }

    const OptionSpec option{*p.s0, *p.strike, *p.sigma, *p.rate, *p.expiry};
    switch (spec.quantity) {
        case Quantity::price: return price(option, cfg, method);
        case Quantity::delta: return delta(option, cfg, method);
        case Quantity::gamma: return gamma(option, cfg, method);
        case Quantity::theta: return theta(option, cfg, method);
        case Quantity::vega: return vega(option, cfg, method);
        default: throw DomainError("unhandled sweep quantity");
    }
}

}  // namespace

std::string_view to_string(Quantity q) {
    for (const auto& [tag, name] : kQuantityNames)
        if (tag == q) return name;
    return "unknown";
}

Quantity parse_quantity(std::string_view s) {
    for (const auto& [tag, name] : kQuantityNames)
        if (name == s) return tag;
    throw DomainError("unknown quantity '" + std::string(s) + "'");
}

bool is_option_quantity(Quantity q) {
    switch (q) {
        case Quantity::price:
        case Quantity::delta:
        case Quantity::gamma:
        case Quantity::theta:
        case Quantity::vega: return true;
        default: return false;
    }
}

std::vector<GridPoint> expand_grid(const SweepSpec& spec) {
    if (spec.n_paths.empty()) throw DomainError("sweep needs a nonempty n_paths grid");
    if (spec.seeds.empty()) throw DomainError("sweep needs at least one seed");
    if (spec.methods.empty()) throw DomainError("sweep needs at least one method");
    for (std::size_t n : spec.n_paths)
        if (n == 0) throw DomainError("n_paths grid entries must be >= 1");

    const std::vector<double> zero{0.0};
    const std::vector<double>& nus = spec.nu.empty() ? zero : spec.nu;
    std::vector<GridPoint> points;
    auto emit = [&](GridPoint p) {
        for (std::size_t n : spec.n_paths) {
            p.n_paths = n;
            points.push_back(p);
        }
    };

    switch (spec.quantity) {
        case Quantity::cdf:
        case Quantity::call_kernel:
            for (double a : required(spec.a, "a"))
                for (double t : required(spec.t, "t"))
                    for (double nu : nus) emit({.a = a, .t = t, .nu = nu});
            break;
        case Quantity::density:
        case Quantity::call_kernel_d1:
        case Quantity::call_kernel_d2:
            for (double a : required(spec.a, "a"))
                for (double t : required(spec.t, "t")) emit({.a = a, .t = t, .nu = 0.0});
            break;
        case Quantity::joint_cdf:
            for (double b : required(spec.b, "b"))
                for (double a : required(spec.a, "a"))
                    for (double t : required(spec.t, "t")) emit({.a = a, .t = t, .nu = 0.0, .b = b});
            break;
        default:
            for (double s0 : required(spec.s0, "s0"))
                for (double k : required(spec.strike, "strike"))
                    for (double sigma : required(spec.sigma, "sigma"))
                        for (double r : required(spec.rate, "rate"))
                            for (double tau : required(spec.expiry, "expiry"))
                                emit({.s0 = s0, .strike = k, .sigma = sigma, .rate = r, .expiry = tau});
            break;
    }
    return points;
}

SweepResult run_sweep(const SweepSpec& spec) {
    const std::vector<GridPoint> points = expand_grid(spec);
    const double spacing = smallest_spacing(spec.a);
    BatchCache cache;

    SweepResult result;
    result.rows.reserve(points.size() * spec.methods.size() * spec.seeds.size());
    for (const GridPoint& p : points) {
        const double horizon = is_option_quantity(spec.quantity)
                                   ? (*p.sigma) * (*p.sigma) * (*p.expiry)
                                   : *p.t;
        for (Method method : spec.methods) {
            for (std::uint64_t seed : spec.seeds) {
                SweepRow row{p, method, seed, 0, std::nullopt, {}};
                try {
                    MCConfig cfg;
                    cfg.n_paths = p.n_paths;
                    cfg.n_steps = default_steps(std::max(horizon, 0.0), spec.steps_per_unit, spec.min_steps);
                    cfg.master_seed = seed;
                    cfg.antithetic = spec.antithetic;
                    cfg.threads = spec.threads;
                    row.n_steps = cfg.n_steps;
                    row.estimate = evaluate(spec, p, method, cfg, cache, spacing);
                } catch (const std::exception& e) {
                    row.estimate.reset();
                    row.error = e.what();
                }
                result.rows.push_back(std::move(row));
            }
        }
    }
    result.summary = summarize_rows(result.rows);
    return result;
}

std::vector<PointSummary> summarize_rows(const std::vector<SweepRow>& rows) {
    auto same_point = [](const GridPoint& x, const GridPoint& y) {
        return std::tie(x.a, x.t, x.nu, x.b, x.s0, x.strike, x.sigma, x.rate, x.expiry, x.n_paths) ==
               std::tie(y.a, y.t, y.nu, y.b, y.s0, y.strike, y.sigma, y.rate, y.expiry, y.n_paths);
    };

    std::vector<PointSummary> out;
    std::size_t begin = 0;
    while (begin < rows.size()) {
        std::size_t end = begin;
        while (end < rows.size() && same_point(rows[end].point, rows[begin].point)) ++end;

        PointSummary s;
        s.point = rows[begin].point;
        std::map<std::uint64_t, std::map<Method, double>> stderr_by_seed;
        for (std::size_t i = begin; i < end; ++i) {
            const SweepRow& r = rows[i];
            if (std::find(s.methods.begin(), s.methods.end(), r.method) == s.methods.end())
                s.methods.push_back(r.method);
            if (r.estimate) stderr_by_seed[r.seed][r.method] = r.estimate->std_error;
        }
        for (Method m : s.methods) {
            double sum_mean = 0.0, sum_se = 0.0;
            std::size_t count = 0;
            for (std::size_t i = begin; i < end; ++i) {
                if (rows[i].method != m || !rows[i].estimate) continue;
                sum_mean += rows[i].estimate->mean;
                sum_se += rows[i].estimate->std_error;
                ++count;
            }
            const double nan = std::nan("");
            s.mean_of_means.push_back(count ? sum_mean / static_cast<double>(count) : nan);
            s.mean_stderr.push_back(count ? sum_se / static_cast<double>(count) : nan);
        }
        const auto naive = std::find(s.methods.begin(), s.methods.end(), Method::naive);
        const auto ident = std::find(s.methods.begin(), s.methods.end(), Method::identity);
        if (naive != s.methods.end() && ident != s.methods.end()) {
            const double se_naive = s.mean_stderr[static_cast<std::size_t>(naive - s.methods.begin())];
            const double se_ident = s.mean_stderr[static_cast<std::size_t>(ident - s.methods.begin())];
            s.stderr_ratio = se_naive / se_ident;
        }
        for (const auto& [seed, by_method] : stderr_by_seed) {
            ++s.seeds;
            const auto n = by_method.find(Method::naive);
            const auto i = by_method.find(Method::identity);
            if (n != by_method.end() && i != by_method.end() && i->second < n->second) ++s.identity_wins;
        }
        out.push_back(std::move(s));
        begin = end;
    }
    return out;
}

std::vector<BiasRow> quadrature_bias_report(double t, DriftSpec drift,
                                            const std::vector<std::size_t>& steps,
                                            const MCConfig& cfg) {
    if (steps.empty()) throw DomainError("quadrature bias report needs at least one step count");
    const double closed = growth_factor(drift.nu, t);
    std::vector<BiasRow> out;
    for (std::size_t n : steps) {
        MCConfig c = cfg;
        c.n_steps = n;
        const PathBatch paths = sample_batch(t, drift, c);
        PathValues v;
        v.values.assign(paths.integral().begin(), paths.integral().end());
        const Estimate e = summarize(v, Method::naive);
        out.push_back({n, e.mean, e.std_error, closed, std::abs(e.mean - closed)});
    }
    return out;
}

}  // namespace asianmc
