#include "asianmc/asianmc.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "asianmc/bench.hpp"
#include "asianmc/csv.hpp"
#include "asianmc/errors.hpp"
#include "asianmc/gbm.hpp"
#include "asianmc/greeks.hpp"
#include "asianmc/identities.hpp"

struct asianmc_batch {
    asianmc::PathBatch batch;
};

struct asianmc_greek_report {
    asianmc::GreekReport report;
};

struct asianmc_sweep {
    asianmc::SweepSpec spec;
};

struct asianmc_sweep_result {
    asianmc::SweepSpec spec;
    asianmc::SweepResult result;
};

namespace {

using namespace asianmc;

thread_local std::string g_last_error;

asianmc_status fail(asianmc_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

template <typename Fn>
asianmc_status guard(Fn&& fn) {
    try {
        fn();
        return ASIANMC_OK;
    } catch (const NumericError& e) {
        return fail(ASIANMC_ERR_NUMERIC, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(ASIANMC_ERR_DOMAIN, e.what());
    } catch (const std::exception& e) {
        return fail(ASIANMC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(ASIANMC_ERR_INTERNAL, "unknown error");
    }
}

#define ASIANMC_REQUIRE(ptr)                                                     \
    do {                                                                         \
        if (!(ptr)) return fail(ASIANMC_ERR_NULL, "null pointer: " #ptr);       \
    } while (0)

Method to_method(int m) {
    switch (m) {
        case ASIANMC_NAIVE: return Method::naive;
        case ASIANMC_IDENTITY: return Method::identity;
        case ASIANMC_FD: return Method::fd;
        default: throw DomainError("unknown method code " + std::to_string(m));
    }
}

int from_method(Method m) {
    switch (m) {
        case Method::naive: return ASIANMC_NAIVE;
        case Method::identity: return ASIANMC_IDENTITY;
        case Method::fd: return ASIANMC_FD;
    }
    return -1;
}

MCConfig to_config(const asianmc_mc_config& c) {
    MCConfig cfg;
    cfg.n_paths = static_cast<std::size_t>(c.n_paths);
    cfg.n_steps = static_cast<std::size_t>(c.n_steps);
    cfg.master_seed = c.master_seed;
    cfg.antithetic = c.antithetic != 0;
    cfg.threads = c.threads;
    return cfg;
}

OptionSpec to_option(const asianmc_option& o) {
    return {o.s0, o.strike, o.sigma, o.rate, o.expiry};
}

asianmc_estimate to_c(const Estimate& e) {
    return {e.mean, e.std_error, static_cast<uint64_t>(e.n_paths), from_method(e.method),
            e.wall_time_ms, e.flags};
}

double or_nan(const std::optional<double>& x) {
    return x ? *x : std::numeric_limits<double>::quiet_NaN();
}

std::optional<double> from_nan(double x) {
    if (std::isnan(x)) return std::nullopt;
    return x;
}

asianmc_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed) *needed = s.size() + 1;
    if (!buf || cap < s.size() + 1) return fail(ASIANMC_ERR_BUFFER, "output buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return ASIANMC_OK;
}

template <typename Fn>
asianmc_status estimate_call(asianmc_estimate* out, Fn&& fn) {
    ASIANMC_REQUIRE(out);
    return guard([&] { *out = to_c(fn()); });
}

}  // namespace

extern "C" {

const char* asianmc_version(void) { return "1.0.0"; }

const char* asianmc_last_error(void) { return g_last_error.c_str(); }

const char* asianmc_method_name(int method) {
    switch (method) {
        case ASIANMC_NAIVE: return "naive";
        case ASIANMC_IDENTITY: return "identity";
        case ASIANMC_FD: return "fd";
        default: return "unknown";
    }
}

asianmc_status asianmc_parse_method(const char* name, int* method) {
    ASIANMC_REQUIRE(name);
    ASIANMC_REQUIRE(method);
    return guard([&] { *method = from_method(parse_method(name)); });
}

void asianmc_default_config(asianmc_mc_config* cfg) {
    if (!cfg) return;
    const MCConfig d;
    *cfg = {d.n_paths, d.n_steps, d.master_seed, d.antithetic ? 1 : 0, d.threads};
}

uint64_t asianmc_default_steps(double t, uint64_t steps_per_unit, uint64_t min_steps) {
    if (!(t >= 0.0)) return min_steps;
    return default_steps(t, static_cast<std::size_t>(steps_per_unit), static_cast<std::size_t>(min_steps));
}

asianmc_status asianmc_sample_path(double t, double nu, const asianmc_mc_config* cfg,
                                   uint64_t path_index, double* terminal, double* integral) {
    ASIANMC_REQUIRE(cfg);
    ASIANMC_REQUIRE(terminal);
    ASIANMC_REQUIRE(integral);
    return guard([&] {
        const PathSample p = sample_path(t, {nu}, to_config(*cfg), static_cast<std::size_t>(path_index));
        *terminal = p.terminal;
        *integral = p.integral;
    });
}

asianmc_status asianmc_batch_create(double t, double nu, const asianmc_mc_config* cfg,
                                    asianmc_batch** out) {
    ASIANMC_REQUIRE(cfg);
    ASIANMC_REQUIRE(out);
    *out = nullptr;
    return guard([&] { *out = new asianmc_batch{sample_batch(t, {nu}, to_config(*cfg))}; });
}

void asianmc_batch_destroy(asianmc_batch* batch) { delete batch; }

uint64_t asianmc_batch_size(const asianmc_batch* batch) { return batch ? batch->batch.size() : 0; }

asianmc_status asianmc_batch_get(const asianmc_batch* batch, uint64_t i, double* terminal,
                                 double* integral) {
    ASIANMC_REQUIRE(batch);
    ASIANMC_REQUIRE(terminal);
    ASIANMC_REQUIRE(integral);
    if (i >= batch->batch.size()) return fail(ASIANMC_ERR_DOMAIN, "path index out of range");
    const PathSample p = batch->batch[static_cast<std::size_t>(i)];
    *terminal = p.terminal;
    *integral = p.integral;
    return ASIANMC_OK;
}

asianmc_status asianmc_transform_expectation(asianmc_path_fn f, void* user, double a, double t,
                                             const asianmc_mc_config* cfg, asianmc_estimate* out) {
    ASIANMC_REQUIRE(f);
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] {
        return transform_expectation([&](double w, double z) { return f(w, z, user); },
                                     {a, t, {}}, to_config(*cfg));
    });
}

asianmc_status asianmc_cdf(double a, double t, double nu, const asianmc_mc_config* cfg, int method,
                           asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] { return cdf(a, t, {nu}, to_config(*cfg), to_method(method)); });
}

asianmc_status asianmc_cdf_drift_change(double a, double t, double nu, const asianmc_mc_config* cfg,
                                        asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] { return cdf_drift_change(a, t, {nu}, to_config(*cfg)); });
}

asianmc_status asianmc_density(double a, double t, const asianmc_mc_config* cfg, int method,
                               double bandwidth, asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] {
        return density(a, t, to_config(*cfg), to_method(method),
                       bandwidth > 0.0 ? std::optional<double>(bandwidth) : std::nullopt);
    });
}

asianmc_status asianmc_joint_cdf(double b, double a, double t, const asianmc_mc_config* cfg,
                                 int method, asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] { return joint_cdf(b, a, t, to_config(*cfg), to_method(method)); });
}

asianmc_status asianmc_call_kernel(double a, double t, double nu, const asianmc_mc_config* cfg,
                                   int method, asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out,
                         [&] { return call_kernel(a, t, {nu}, to_config(*cfg), to_method(method)); });
}

asianmc_status asianmc_call_kernel_d1(double a, double t, const asianmc_mc_config* cfg, int method,
                                      asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] { return call_kernel_d1(a, t, to_config(*cfg), to_method(method)); });
}

asianmc_status asianmc_call_kernel_d2(double a, double t, const asianmc_mc_config* cfg, int method,
                                      double bandwidth, asianmc_estimate* out) {
    ASIANMC_REQUIRE(cfg);
    return estimate_call(out, [&] {
        return call_kernel_d2(a, t, to_config(*cfg), to_method(method),
                              bandwidth > 0.0 ? std::optional<double>(bandwidth) : std::nullopt);
    });
}

#define ASIANMC_GREEK_FN(name)                                                              \
    asianmc_status asianmc_##name(const asianmc_option* opt, const asianmc_mc_config* cfg, \
                                  int method, asianmc_estimate* out) {                     \
        ASIANMC_REQUIRE(opt);                                                               \
        ASIANMC_REQUIRE(cfg);                                                               \
        return estimate_call(out, [&] {                                                     \
            return asianmc::name(to_option(*opt), to_config(*cfg), to_method(method));      \
        });                                                                                 \
    }

ASIANMC_GREEK_FN(price)
ASIANMC_GREEK_FN(delta)
ASIANMC_GREEK_FN(gamma)
ASIANMC_GREEK_FN(theta)
ASIANMC_GREEK_FN(vega)

#undef ASIANMC_GREEK_FN

asianmc_status asianmc_greeks_compute(const asianmc_option* opt, const asianmc_mc_config* cfg,
                                      int method, int fd_check, asianmc_greek_report** out) {
    ASIANMC_REQUIRE(opt);
    ASIANMC_REQUIRE(cfg);
    ASIANMC_REQUIRE(out);
    *out = nullptr;
    return guard([&] {
        *out = new asianmc_greek_report{
            greeks(to_option(*opt), to_config(*cfg), to_method(method), fd_check != 0)};
    });
}

void asianmc_greeks_destroy(asianmc_greek_report* report) { delete report; }

asianmc_status asianmc_greeks_get(const asianmc_greek_report* report, const char* name,
                                  asianmc_estimate* out) {
    ASIANMC_REQUIRE(report);
    ASIANMC_REQUIRE(name);
    ASIANMC_REQUIRE(out);
    const GreekReport& r = report->report;
    const std::string n = name;
    if (n == "price") *out = to_c(r.price);
    else if (n == "delta") *out = to_c(r.delta);
    else if (n == "gamma") *out = to_c(r.gamma);
    else if (n == "theta") *out = to_c(r.theta);
    else if (n == "vega") *out = to_c(r.vega);
    else return fail(ASIANMC_ERR_DOMAIN, "unknown greek '" + n + "'");
    return ASIANMC_OK;
}

asianmc_status asianmc_greeks_get_fd(const asianmc_greek_report* report, const char* name,
                                     asianmc_estimate* out) {
    ASIANMC_REQUIRE(report);
    ASIANMC_REQUIRE(name);
    ASIANMC_REQUIRE(out);
    const auto it = report->report.fd_cross_checks.find(name);
    if (it == report->report.fd_cross_checks.end())
        return fail(ASIANMC_ERR_DOMAIN, std::string("no finite-difference check for '") + name + "'");
    *out = to_c(it->second);
    return ASIANMC_OK;
}

asianmc_status asianmc_greeks_get_vega_undiscounted(const asianmc_greek_report* report,
                                                    asianmc_estimate* out) {
    ASIANMC_REQUIRE(report);
    ASIANMC_REQUIRE(out);
    if (!report->report.vega_undiscounted_strike)
        return fail(ASIANMC_ERR_DOMAIN, "undiscounted-strike vega is only reported when rate > 0");
    *out = to_c(*report->report.vega_undiscounted_strike);
    return ASIANMC_OK;
}

asianmc_status asianmc_sweep_create(const char* quantity, asianmc_sweep** out) {
    ASIANMC_REQUIRE(quantity);
    ASIANMC_REQUIRE(out);
    *out = nullptr;
    return guard([&] {
        auto s = std::make_unique<asianmc_sweep>();
        s->spec.quantity = parse_quantity(quantity);
        *out = s.release();
    });
}

void asianmc_sweep_destroy(asianmc_sweep* sweep) { delete sweep; }

asianmc_status asianmc_sweep_set_grid(asianmc_sweep* sweep, const char* field, const double* values,
                                      size_t n) {
    ASIANMC_REQUIRE(sweep);
    ASIANMC_REQUIRE(field);
    if (n > 0) ASIANMC_REQUIRE(values);
    SweepSpec& s = sweep->spec;
    const std::string f = field;
    std::vector<double>* grid = f == "a"        ? &s.a
                                : f == "t"      ? &s.t
                                : f == "nu"     ? &s.nu
                                : f == "b"      ? &s.b
                                : f == "s0"     ? &s.s0
                                : f == "strike" ? &s.strike
                                : f == "sigma"  ? &s.sigma
                                : f == "rate"   ? &s.rate
                                : f == "expiry" ? &s.expiry
                                                : nullptr;
    if (!grid) return fail(ASIANMC_ERR_DOMAIN, "unknown grid field '" + f + "'");
    grid->assign(values, values + n);
    return ASIANMC_OK;
}

asianmc_status asianmc_sweep_set_paths(asianmc_sweep* sweep, const uint64_t* n_paths, size_t n) {
    ASIANMC_REQUIRE(sweep);
    if (n > 0) ASIANMC_REQUIRE(n_paths);
    sweep->spec.n_paths.assign(n_paths, n_paths + n);
    return ASIANMC_OK;
}

asianmc_status asianmc_sweep_set_seeds(asianmc_sweep* sweep, const uint64_t* seeds, size_t n) {
    ASIANMC_REQUIRE(sweep);
    if (n > 0) ASIANMC_REQUIRE(seeds);
    sweep->spec.seeds.assign(seeds, seeds + n);
    return ASIANMC_OK;
}

asianmc_status asianmc_sweep_set_methods(asianmc_sweep* sweep, const int* methods, size_t n) {
    ASIANMC_REQUIRE(sweep);
    if (n > 0) ASIANMC_REQUIRE(methods);
    return guard([&] {
        std::vector<Method> ms;
        for (size_t i = 0; i < n; ++i) ms.push_back(to_method(methods[i]));
        sweep->spec.methods = std::move(ms);
    });
}

asianmc_status asianmc_sweep_set_options(asianmc_sweep* sweep, uint64_t steps_per_unit,
                                         int antithetic, unsigned threads, double bandwidth) {
    ASIANMC_REQUIRE(sweep);
    if (steps_per_unit == 0) return fail(ASIANMC_ERR_DOMAIN, "steps_per_unit must be >= 1");
    SweepSpec& s = sweep->spec;
    s.steps_per_unit = static_cast<std::size_t>(steps_per_unit);
    s.antithetic = antithetic != 0;
    s.threads = threads;
    s.bandwidth = bandwidth > 0.0 ? std::optional<double>(bandwidth) : std::nullopt;
    return ASIANMC_OK;
}

asianmc_status asianmc_sweep_run(const asianmc_sweep* sweep, asianmc_sweep_result** out) {
    ASIANMC_REQUIRE(sweep);
    ASIANMC_REQUIRE(out);
    *out = nullptr;
    return guard([&] { *out = new asianmc_sweep_result{sweep->spec, run_sweep(sweep->spec)}; });
}

void asianmc_sweep_result_destroy(asianmc_sweep_result* result) { delete result; }

size_t asianmc_sweep_result_rows(const asianmc_sweep_result* result) {
    return result ? result->result.rows.size() : 0;
}

asianmc_status asianmc_sweep_result_row(const asianmc_sweep_result* result, size_t i,
                                        asianmc_sweep_row* out) {
    ASIANMC_REQUIRE(result);
    ASIANMC_REQUIRE(out);
    if (i >= result->result.rows.size()) return fail(ASIANMC_ERR_DOMAIN, "row index out of range");
    const SweepRow& r = result->result.rows[i];
    const GridPoint& p = r.point;
    *out = {};
    out->a = or_nan(p.a);
    out->t = or_nan(p.t);
    out->nu = or_nan(p.nu);
    out->b = or_nan(p.b);
    out->s0 = or_nan(p.s0);
    out->strike = or_nan(p.strike);
    out->sigma = or_nan(p.sigma);
    out->rate = or_nan(p.rate);
    out->expiry = or_nan(p.expiry);
    out->n_paths = p.n_paths;
    out->method = from_method(r.method);
    out->seed = r.seed;
    out->n_steps = r.n_steps;
    out->has_estimate = r.estimate ? 1 : 0;
    if (r.estimate) out->estimate = to_c(*r.estimate);
    out->error = r.error.c_str();
    return ASIANMC_OK;
}

size_t asianmc_sweep_result_summaries(const asianmc_sweep_result* result) {
    return result ? result->result.summary.size() : 0;
}

asianmc_status asianmc_sweep_result_summary(const asianmc_sweep_result* result, size_t i,
                                            asianmc_point_summary* out) {
    ASIANMC_REQUIRE(result);
    ASIANMC_REQUIRE(out);
    if (i >= result->result.summary.size())
        return fail(ASIANMC_ERR_DOMAIN, "summary index out of range");
    const PointSummary& s = result->result.summary[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *out = {};
    out->a = or_nan(s.point.a);
    out->t = or_nan(s.point.t);
    out->nu = or_nan(s.point.nu);
    out->b = or_nan(s.point.b);
    out->s0 = or_nan(s.point.s0);
    out->strike = or_nan(s.point.strike);
    out->sigma = or_nan(s.point.sigma);
    out->rate = or_nan(s.point.rate);
    out->expiry = or_nan(s.point.expiry);
    out->n_paths = s.point.n_paths;
    out->naive_mean = out->naive_stderr = out->identity_mean = out->identity_stderr = nan;
    for (std::size_t k = 0; k < s.methods.size(); ++k) {
        if (s.methods[k] == Method::naive) {
            out->naive_mean = s.mean_of_means[k];
            out->naive_stderr = s.mean_stderr[k];
        } else if (s.methods[k] == Method::identity) {
            out->identity_mean = s.mean_of_means[k];
            out->identity_stderr = s.mean_stderr[k];
        }
    }
    out->stderr_ratio = or_nan(s.stderr_ratio);
    out->identity_wins = s.identity_wins;
    out->seeds = s.seeds;
    return ASIANMC_OK;
}

asianmc_status asianmc_sweep_result_csv_row(const asianmc_sweep_result* result, size_t i,
                                            int include_timing, char* buf, size_t cap,
                                            size_t* needed) {
    ASIANMC_REQUIRE(result);
    if (i >= result->result.rows.size()) return fail(ASIANMC_ERR_DOMAIN, "row index out of range");
    std::string line;
    const asianmc_status st = guard([&] {
        // One row at a time keeps this O(1) per call for the common loop.
        SweepResult single;
        single.rows.push_back(result->result.rows[i]);
        line = format_record(sweep_records(result->spec, single).front(), include_timing != 0);
    });
    if (st != ASIANMC_OK) return st;
    return copy_out(line, buf, cap, needed);
}

asianmc_status asianmc_quadrature_bias(double t, double nu, const uint64_t* steps, size_t n,
                                       const asianmc_mc_config* cfg, asianmc_bias_row* out_rows) {
    ASIANMC_REQUIRE(cfg);
    if (n > 0) {
        ASIANMC_REQUIRE(steps);
        ASIANMC_REQUIRE(out_rows);
    }
    return guard([&] {
        const std::vector<std::size_t> grid(steps, steps + n);
        const auto rows = quadrature_bias_report(t, {nu}, grid, to_config(*cfg));
        for (std::size_t k = 0; k < rows.size(); ++k)
            out_rows[k] = {rows[k].n_steps, rows[k].mean_integral, rows[k].std_error,
                           rows[k].closed_form, rows[k].gap};
    });
}

const char* asianmc_csv_header(void) { return csv_header().c_str(); }

void asianmc_record_init(asianmc_record* r) {
    if (!r) return;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    *r = {};
    r->quantity = "";
    r->method = "";
    r->a = r->t = r->nu = r->s0 = r->strike = r->sigma = r->rate = r->expiry = nan;
    r->n_paths = r->n_steps = -1;
    r->estimate = r->std_error = r->wall_ms = nan;
}

void asianmc_record_attach(asianmc_record* r, const asianmc_estimate* e) {
    if (!r || !e) return;
    r->estimate = e->mean;
    r->std_error = e->std_error;
    r->wall_ms = e->wall_time_ms;
    r->n_paths = static_cast<int64_t>(e->n_paths);
    r->estimate_flags = e->flags;
}

asianmc_status asianmc_format_record(const asianmc_record* r, int include_timing, char* buf,
                                     size_t cap, size_t* needed) {
    ASIANMC_REQUIRE(r);
    Record rec;
    rec.quantity = r->quantity ? r->quantity : "";
    rec.method = r->method ? r->method : "";
    rec.a = from_nan(r->a);
    rec.t = from_nan(r->t);
    rec.nu = from_nan(r->nu);
    rec.s0 = from_nan(r->s0);
    rec.strike = from_nan(r->strike);
    rec.sigma = from_nan(r->sigma);
    rec.rate = from_nan(r->rate);
    rec.expiry = from_nan(r->expiry);
    if (r->n_paths >= 0) rec.n_paths = static_cast<std::uint64_t>(r->n_paths);
    if (r->n_steps >= 0) rec.n_steps = static_cast<std::uint64_t>(r->n_steps);
    if (r->has_seed) rec.seed = r->seed;
    rec.estimate = from_nan(r->estimate);
    rec.std_error = from_nan(r->std_error);
    rec.wall_ms = from_nan(r->wall_ms);
    std::string flags = flags_to_string(r->estimate_flags);
    if (r->flags && *r->flags) {
        if (!flags.empty()) flags += '|';
        flags += r->flags;
    }
    rec.flags = flags;
    return copy_out(format_record(rec, include_timing != 0), buf, cap, needed);
}

}  // extern "C"
