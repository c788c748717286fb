#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "asianmc/asianmc.h"

namespace asianmc_cli {

namespace {

constexpr uint64_t kMinSteps = 256;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApiError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(asianmc_status s) {
    if (s != ASIANMC_OK) throw ApiError(asianmc_last_error());
}

std::string real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---- options ---------------------------------------------------------------

struct Common {
    uint64_t paths = 100000;
    uint64_t steps = 1024;
    uint64_t seed = 42;
    std::string method = "both";
    std::string out;
    bool antithetic = false;
    unsigned threads = 0;
    std::string format = "csv";
    bool timing = false;
};

struct Params {
    double a = 1.0, t = 1.0, nu = 0.0, b = 1.0;
    double s0 = 1.0, strike = 1.0, sigma = 1.0, rate = 0.0, expiry = 1.0;
    double bandwidth = 0.0;
    int order = 0;
    bool fd_check = false;
};

struct SweepArgs {
    std::string quantity;
    std::vector<double> a, t, nu, b, s0, strike, sigma, rate, expiry;
    std::vector<uint64_t> paths{100000};
    std::vector<uint64_t> seeds{42};
};

struct BiasArgs {
    std::vector<uint64_t> grid{16, 64, 256, 1024};
};

void add_output_options(CLI::App* sub, Common& c) {
    sub->add_option("--steps", c.steps, "Time steps per unit of (effective) time, at least 256 per path")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--method", c.method, "Estimator: naive, identity, both or fd")
        ->capture_default_str()
        ->check(CLI::IsMember({"naive", "identity", "both", "fd"}));
    sub->add_option("--out", c.out, "Write rows to FILE instead of standard output")
        ->capture_default_str();
    sub->add_flag("--antithetic", c.antithetic, "Pair each path with its mirrored path")
        ->capture_default_str();
    sub->add_option("--threads", c.threads, "Worker threads, 0 = machine parallelism")
        ->capture_default_str();
    sub->add_option("--format", c.format, "Output format: csv or pretty")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "pretty"}));
    sub->add_flag("--timing", c.timing, "Fill the wall_ms column (output is then not reproducible)")
        ->capture_default_str();
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--paths", c.paths, "Number of simulated paths")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
    add_output_options(sub, c);
}

void add_option_spec(CLI::App* sub, Params& p) {
    sub->add_option("--s0", p.s0, "Initial asset price")->capture_default_str();
    sub->add_option("--strike", p.strike, "Strike")->capture_default_str();
    sub->add_option("--sigma", p.sigma, "Volatility")->capture_default_str();
    sub->add_option("--rate", p.rate, "Risk-free rate")->capture_default_str();
    sub->add_option("--expiry", p.expiry, "Time to expiry")->capture_default_str();
}

// ---- rows ----------------------------------------------------------------------

struct Row {
    std::string quantity;
    std::string method;
    std::string flags;
    asianmc_record rec{};

    Row(std::string q, std::string m) : quantity(std::move(q)), method(std::move(m)) {
        asianmc_record_init(&rec);
    }
};

std::string format_csv(Row& row, bool timing) {
    row.rec.quantity = row.quantity.c_str();
    row.rec.method = row.method.c_str();
    row.rec.flags = row.flags.c_str();
    std::string buf(512, '\0');
    size_t needed = 0;
    asianmc_status s = asianmc_format_record(&row.rec, timing, buf.data(), buf.size(), &needed);
    if (s == ASIANMC_ERR_BUFFER) {
        buf.assign(needed, '\0');
        s = asianmc_format_record(&row.rec, timing, buf.data(), buf.size(), &needed);
    }
    check(s);
    buf.resize(needed - 1);
    return buf;
}

std::string flag_text(const Row& row) {
    std::string f;
    if (row.rec.estimate_flags & ASIANMC_FLAG_CLOSED_FORM) f = "closed_form";
    if (row.rec.estimate_flags & ASIANMC_FLAG_TAIL_UNDERFLOW) f += f.empty() ? "tail_underflow" : "|tail_underflow";
    if (!row.flags.empty()) f += (f.empty() ? "" : "|") + row.flags;
    return f;
}

std::string params_text(const asianmc_record& r) {
    std::ostringstream s;
    const std::pair<const char*, double> fields[] = {
        {"a", r.a},         {"t", r.t},       {"nu", r.nu},     {"s0", r.s0},
        {"strike", r.strike}, {"sigma", r.sigma}, {"rate", r.rate}, {"expiry", r.expiry}};
    for (const auto& [name, v] : fields) {
        if (std::isnan(v)) continue;
        if (s.tellp() > 0) s << ' ';
        s << name << '=' << v;
    }
    return s.str();
}

void write_pretty(std::ostream& out, std::vector<Row>& rows, bool timing) {
    char line[512];
    std::snprintf(line, sizeof line, "%-16s %-13s %-24s %20s %14s %10s%s  %s\n", "quantity", "method",
                  "parameters", "estimate", "stderr", "n_paths", timing ? "    wall_ms" : "", "flags");
    out << line;
    for (Row& row : rows) {
        std::string wall;
        if (timing) {
            char w[32];
            std::snprintf(w, sizeof w, " %10.2f", row.rec.wall_ms);
            wall = w;
        }
        std::snprintf(line, sizeof line, "%-16s %-13s %-24s %20.12g %14.6g %10lld%s  %s\n",
                      row.quantity.c_str(), row.method.c_str(), params_text(row.rec).c_str(),
                      row.rec.estimate, row.rec.std_error, static_cast<long long>(row.rec.n_paths),
                      wall.c_str(), flag_text(row).c_str());
        out << line;
    }
}

void write_rows(std::ostream& out, std::vector<Row>& rows, const Common& c) {
    if (c.format == "pretty") {
        write_pretty(out, rows, c.timing);
        return;
    }
    out << asianmc_csv_header() << '\n';
    for (Row& row : rows) out << format_csv(row, c.timing) << '\n';
}

// ---- helpers ---------------------------------------------------------------------

std::vector<int> methods_for(const std::string& name, bool allow_fd, const char* command) {
    if (name == "both") return {ASIANMC_NAIVE, ASIANMC_IDENTITY};
    int m = 0;
    check(asianmc_parse_method(name.c_str(), &m));
    if (m == ASIANMC_FD && !allow_fd)
        throw UsageError(std::string("method 'fd' is not available for '") + command +
                         "'; use --method naive, identity or both");
    return {m};
}

asianmc_mc_config make_config(const Common& c, double horizon) {
    asianmc_mc_config cfg;
    asianmc_default_config(&cfg);
    cfg.n_paths = c.paths;
    cfg.n_steps = asianmc_default_steps(horizon, c.steps, kMinSteps);
    cfg.master_seed = c.seed;
    cfg.antithetic = c.antithetic ? 1 : 0;
    cfg.threads = c.threads;
    return cfg;
}

Row make_row(const char* quantity, int method, const asianmc_mc_config& cfg) {
    Row row(quantity, asianmc_method_name(method));
    row.rec.n_steps = static_cast<int64_t>(cfg.n_steps);
    row.rec.has_seed = 1;
    row.rec.seed = cfg.master_seed;
    row.rec.n_paths = static_cast<int64_t>(cfg.n_paths);
    return row;
}

void set_option(asianmc_record& r, const Params& p) {
    r.s0 = p.s0;
    r.strike = p.strike;
    r.sigma = p.sigma;
    r.rate = p.rate;
    r.expiry = p.expiry;
}

asianmc_option option_of(const Params& p) { return {p.s0, p.strike, p.sigma, p.rate, p.expiry}; }

void attach(Row& row, const asianmc_estimate& e) {
    asianmc_record_attach(&row.rec, &e);
    row.method = asianmc_method_name(e.method);
}

// ---- commands ---------------------------------------------------------------------

std::vector<Row> cmd_price(const Common& c, const Params& p) {
    const asianmc_option opt = option_of(p);
    const asianmc_mc_config cfg = make_config(c, p.sigma * p.sigma * p.expiry);
    std::vector<Row> rows;
    for (int m : methods_for(c.method, false, "price")) {
        asianmc_estimate e;
        check(asianmc_price(&opt, &cfg, m, &e));
        Row row = make_row("price", m, cfg);
        set_option(row.rec, p);
        attach(row, e);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> cmd_greeks(const Common& c, const Params& p) {
    const asianmc_option opt = option_of(p);
    const asianmc_mc_config cfg = make_config(c, p.sigma * p.sigma * p.expiry);
    const std::vector<int> methods = methods_for(c.method, true, "greeks");
    std::vector<Row> rows;
    auto push = [&](const char* name, int method, const asianmc_estimate& e, std::string flags = {}) {
        Row row = make_row(name, method, cfg);
        set_option(row.rec, p);
        attach(row, e);
        row.flags = std::move(flags);
        rows.push_back(std::move(row));
    };
    for (std::size_t k = 0; k < methods.size(); ++k) {
        const bool fd_here = p.fd_check && k + 1 == methods.size();
        asianmc_greek_report* report = nullptr;
        check(asianmc_greeks_compute(&opt, &cfg, methods[k], fd_here, &report));
        std::unique_ptr<asianmc_greek_report, void (*)(asianmc_greek_report*)> guard(
            report, asianmc_greeks_destroy);
        for (const char* name : {"price", "delta", "gamma", "theta", "vega"}) {
            asianmc_estimate e;
            check(asianmc_greeks_get(report, name, &e));
            push(name, methods[k], e);
        }
        asianmc_estimate undiscounted;
        if (asianmc_greeks_get_vega_undiscounted(report, &undiscounted) == ASIANMC_OK)
            push("vega", methods[k], undiscounted, "strike_undiscounted");
        if (fd_here) {
            for (const char* name : {"delta", "gamma", "theta", "vega"}) {
                asianmc_estimate e;
                check(asianmc_greeks_get_fd(report, name, &e));
                push(name, ASIANMC_FD, e, "fd_check");
            }
        }
    }
    return rows;
}

std::vector<Row> cmd_cdf(const Common& c, const Params& p) {
    const asianmc_mc_config cfg = make_config(c, p.t);
    std::vector<Row> rows;
    auto push = [&](int method, const asianmc_estimate& e) {
        Row row = make_row("cdf", method, cfg);
        row.rec.a = p.a;
        row.rec.t = p.t;
        row.rec.nu = p.nu;
        attach(row, e);
        rows.push_back(std::move(row));
        return &rows.back();
    };
    for (int m : methods_for(c.method, false, "cdf")) {
        asianmc_estimate e;
        check(asianmc_cdf(p.a, p.t, p.nu, &cfg, m, &e));
        push(m, e);
        if (m == ASIANMC_IDENTITY && p.nu != 0.0) {
            check(asianmc_cdf_drift_change(p.a, p.t, p.nu, &cfg, &e));
            push(m, e)->method = "drift_change";
        }
    }
    return rows;
}

std::vector<Row> cmd_density(const Common& c, const Params& p) {
    const asianmc_mc_config cfg = make_config(c, p.t);
    std::vector<Row> rows;
    for (int m : methods_for(c.method, false, "density")) {
        asianmc_estimate e;
        check(asianmc_density(p.a, p.t, &cfg, m, p.bandwidth, &e));
        Row row = make_row("density", m, cfg);
        row.rec.a = p.a;
        row.rec.t = p.t;
        row.rec.nu = 0.0;
        attach(row, e);
        if (m == ASIANMC_NAIVE) row.flags = "h=" + real(p.bandwidth > 0.0 ? p.bandwidth : 0.05 * p.a);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> cmd_joint(const Common& c, const Params& p) {
    const asianmc_mc_config cfg = make_config(c, p.t);
    std::vector<Row> rows;
    for (int m : methods_for(c.method, false, "joint")) {
        asianmc_estimate e;
        check(asianmc_joint_cdf(p.b, p.a, p.t, &cfg, m, &e));
        Row row = make_row("joint_cdf", m, cfg);
        row.rec.a = p.a;
        row.rec.t = p.t;
        row.rec.nu = 0.0;
        row.flags = "b=" + real(p.b);
        attach(row, e);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> cmd_kernel(const Common& c, const Params& p) {
    if (p.order != 0 && p.nu != 0.0)
        throw UsageError("kernel derivatives are defined for nu = 0; drop --nu or use --order 0");
    const asianmc_mc_config cfg = make_config(c, p.t);
    static const char* names[] = {"call_kernel", "call_kernel_d1", "call_kernel_d2"};
    std::vector<Row> rows;
    for (int m : methods_for(c.method, false, "kernel")) {
        asianmc_estimate e;
        switch (p.order) {
            case 0: check(asianmc_call_kernel(p.a, p.t, p.nu, &cfg, m, &e)); break;
            case 1: check(asianmc_call_kernel_d1(p.a, p.t, &cfg, m, &e)); break;
            default: check(asianmc_call_kernel_d2(p.a, p.t, &cfg, m, p.bandwidth, &e)); break;
        }
        Row row = make_row(names[p.order], m, cfg);
        row.rec.a = p.a;
        row.rec.t = p.t;
        row.rec.nu = p.nu;
        attach(row, e);
        if (p.order == 2 && m == ASIANMC_NAIVE)
            row.flags = "h=" + real(p.bandwidth > 0.0 ? p.bandwidth : 0.05 * p.a);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Row> cmd_bias(const Common& c, const Params& p, const BiasArgs& b) {
    asianmc_mc_config cfg = make_config(c, p.t);
    std::vector<asianmc_bias_row> table(b.grid.size());
    check(asianmc_quadrature_bias(p.t, p.nu, b.grid.data(), b.grid.size(), &cfg, table.data()));
    std::vector<Row> rows;
    for (const asianmc_bias_row& r : table) {
        cfg.n_steps = r.n_steps;
        Row row = make_row("quadrature_bias", ASIANMC_NAIVE, cfg);
        row.rec.t = p.t;
        row.rec.nu = p.nu;
        row.rec.estimate = r.mean_integral;
        row.rec.std_error = r.std_error;
        row.flags = "closed_form=" + real(r.closed_form) + "|gap=" + real(r.gap);
        rows.push_back(std::move(row));
    }
    return rows;
}

// Grid fields each sweep quantity reads.
std::vector<std::string> required_grids(const std::string& q) {
    if (q == "cdf" || q == "call_kernel") return {"a", "t", "nu"};
    if (q == "joint_cdf") return {"a", "t", "b"};
    if (q == "density" || q == "call_kernel_d1" || q == "call_kernel_d2") return {"a", "t"};
    return {"s0", "strike", "sigma", "rate", "expiry"};
}

struct SweepOutput {
    std::vector<std::string> csv_lines;
    std::string pretty;
};

SweepOutput cmd_sweep(const Common& c, const Params& p, const SweepArgs& s) {
    const bool option = required_grids(s.quantity).front() == "s0";
    const std::vector<int> methods = methods_for(c.method, option, "sweep");

    std::unique_ptr<asianmc_sweep, void (*)(asianmc_sweep*)> sweep(nullptr, asianmc_sweep_destroy);
    {
        asianmc_sweep* raw = nullptr;
        check(asianmc_sweep_create(s.quantity.c_str(), &raw));
        sweep.reset(raw);
    }
    const std::pair<const char*, const std::vector<double>*> grids[] = {
        {"a", &s.a},           {"t", &s.t},         {"nu", &s.nu},     {"b", &s.b},
        {"s0", &s.s0},         {"strike", &s.strike}, {"sigma", &s.sigma}, {"rate", &s.rate},
        {"expiry", &s.expiry}};
    const std::vector<std::string> needed = required_grids(s.quantity);
    for (const auto& [name, values] : grids) {
        const bool wanted = std::find(needed.begin(), needed.end(), name) != needed.end();
        if (!wanted) continue;
        std::vector<double> v = *values;
        // nu defaults to the driftless case.
        if (v.empty() && std::string(name) == "nu") v = {0.0};
        if (v.empty())
            throw UsageError(std::string("sweep of ") + s.quantity + " needs --" + name +
                             " (comma-separated list)");
        check(asianmc_sweep_set_grid(sweep.get(), name, v.data(), v.size()));
    }
    check(asianmc_sweep_set_paths(sweep.get(), s.paths.data(), s.paths.size()));
    check(asianmc_sweep_set_seeds(sweep.get(), s.seeds.data(), s.seeds.size()));
    check(asianmc_sweep_set_methods(sweep.get(), methods.data(), methods.size()));
    check(asianmc_sweep_set_options(sweep.get(), c.steps, c.antithetic, c.threads, p.bandwidth));

    asianmc_sweep_result* raw = nullptr;
    check(asianmc_sweep_run(sweep.get(), &raw));
    std::unique_ptr<asianmc_sweep_result, void (*)(asianmc_sweep_result*)> result(
        raw, asianmc_sweep_result_destroy);

    SweepOutput out;
    if (c.format == "csv") {
        std::string buf(512, '\0');
        for (size_t i = 0; i < asianmc_sweep_result_rows(result.get()); ++i) {
            size_t len = 0;
            asianmc_status st =
                asianmc_sweep_result_csv_row(result.get(), i, c.timing, buf.data(), buf.size(), &len);
            if (st == ASIANMC_ERR_BUFFER) {
                buf.assign(len, '\0');
                st = asianmc_sweep_result_csv_row(result.get(), i, c.timing, buf.data(), buf.size(), &len);
            }
            check(st);
            out.csv_lines.emplace_back(buf.data(), len - 1);
        }
        return out;
    }

    std::ostringstream pretty;
    char line[512];
    std::snprintf(line, sizeof line, "%-32s %8s %18s %12s %18s %12s %9s %6s\n", "point", "n_paths",
                  "naive_mean", "naive_se", "identity_mean", "identity_se", "se_ratio", "wins");
    pretty << line;
    for (size_t i = 0; i < asianmc_sweep_result_summaries(result.get()); ++i) {
        asianmc_point_summary ps;
        check(asianmc_sweep_result_summary(result.get(), i, &ps));
        asianmc_record r;
        asianmc_record_init(&r);
        r.a = ps.a, r.t = ps.t, r.nu = ps.nu, r.s0 = ps.s0, r.strike = ps.strike;
        r.sigma = ps.sigma, r.rate = ps.rate, r.expiry = ps.expiry;
        std::string point = params_text(r);
        if (!std::isnan(ps.b)) point += " b=" + std::to_string(ps.b);
        std::snprintf(line, sizeof line, "%-32s %8llu %18.10g %12.4g %18.10g %12.4g %9.4g %3llu/%-3llu\n",
                      point.c_str(), static_cast<unsigned long long>(ps.n_paths), ps.naive_mean,
                      ps.naive_stderr, ps.identity_mean, ps.identity_stderr, ps.stderr_ratio,
                      static_cast<unsigned long long>(ps.identity_wins),
                      static_cast<unsigned long long>(ps.seeds));
        pretty << line;
    }
    out.pretty = pretty.str();
    return out;
}

std::unique_ptr<std::ostream> open_sink(const std::string& path) {
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
    if (!*f) throw UsageError("cannot open '" + path + "' for writing; check --out");
    return f;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Monte Carlo estimators for the time integral of exponential Brownian motion "
                 "and fixed-strike Asian call Greeks.",
                 "asianmc"};
    app.require_subcommand(1);
    app.footer("Exit status: 0 success, 1 usage error, 2 numeric or domain error.");

    Common c;
    Params p;
    SweepArgs s;
    BiasArgs b;

    auto* price = app.add_subcommand("price", "Asian call price");
    add_common(price, c);
    add_option_spec(price, p);

    auto* greeks = app.add_subcommand("greeks", "Price, delta, gamma, theta and vega");
    add_common(greeks, c);
    add_option_spec(greeks, p);
    greeks->add_flag("--fd-check", p.fd_check, "Add bump-and-revalue estimates of the four sensitivities")
        ->capture_default_str();

    auto* cdf = app.add_subcommand("cdf", "Pr[A_t <= a] for the drift-nu time integral");
    add_common(cdf, c);
    cdf->add_option("--a", p.a, "Threshold a > 0")->capture_default_str();
    cdf->add_option("--t", p.t, "Horizon t >= 0")->capture_default_str();
    cdf->add_option("--nu", p.nu, "Drift nu")->capture_default_str();

    auto* density = app.add_subcommand("density", "Density of A_t at a");
    add_common(density, c);
    density->add_option("--a", p.a, "Point a > 0")->capture_default_str();
    density->add_option("--t", p.t, "Horizon t > 0")->capture_default_str();
    density->add_option("--bandwidth", p.bandwidth, "Naive difference bandwidth, 0 = 0.05 a")
        ->capture_default_str();

    auto* joint = app.add_subcommand("joint", "Pr[M_t < b, A_t < a]");
    add_common(joint, c);
    joint->add_option("--a", p.a, "Threshold a > 0")->capture_default_str();
    joint->add_option("--b", p.b, "Threshold b > 0 on M_t")->capture_default_str();
    joint->add_option("--t", p.t, "Horizon t > 0")->capture_default_str();

    auto* kernel = app.add_subcommand("kernel", "E[(A_t - a)^+] and its first two a-derivatives");
    add_common(kernel, c);
    kernel->add_option("--a", p.a, "Strike level a > 0")->capture_default_str();
    kernel->add_option("--t", p.t, "Horizon t")->capture_default_str();
    kernel->add_option("--nu", p.nu, "Drift nu (order 0 only)")->capture_default_str();
    kernel->add_option("--order", p.order, "0 = kernel, 1 = first, 2 = second derivative")
        ->capture_default_str()
        ->check(CLI::Range(0, 2));
    kernel->add_option("--bandwidth", p.bandwidth, "Naive second-difference bandwidth, 0 = 0.05 a")
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Grid x paths x seeds x methods table");
    add_output_options(sweep, c);
    sweep->add_option("--quantity", s.quantity, "What to sweep")
        ->required()
        ->check(CLI::IsMember({"cdf", "density", "joint_cdf", "call_kernel", "call_kernel_d1",
                               "call_kernel_d2", "price", "delta", "gamma", "theta", "vega"}));
    for (auto& [flag, grid] : std::initializer_list<std::pair<const char*, std::vector<double>*>>{
             {"--a", &s.a}, {"--t", &s.t}, {"--nu", &s.nu}, {"--b", &s.b}, {"--s0", &s.s0},
             {"--strike", &s.strike}, {"--sigma", &s.sigma}, {"--rate", &s.rate},
             {"--expiry", &s.expiry}})
        sweep->add_option(flag, *grid, "Comma-separated grid")->delimiter(',');
    sweep->add_option("--paths", s.paths, "Comma-separated path counts")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed,--seeds", s.seeds, "Comma-separated master seeds")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--bandwidth", p.bandwidth,
                      "Naive difference bandwidth, 0 = max(0.05 a, 2 x a-grid spacing)")
        ->capture_default_str();

    auto* bias = app.add_subcommand("bias", "Trapezoid mean of A_t against its closed form");
    add_common(bias, c);
    bias->add_option("--t", p.t, "Horizon t >= 0")->capture_default_str();
    bias->add_option("--nu", p.nu, "Drift nu")->capture_default_str();
    bias->add_option("--grid", b.grid, "Comma-separated step counts")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::PositiveNumber);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        // Point the user at the help of the subcommand they were using.
        std::string where = "asianmc";
        for (const auto* sub : app.get_subcommands()) where += " " + sub->get_name();
        err << "error: " << e.what() << ". Run '" << where << " --help' for usage.\n";
        return kUsage;
    }

    try {
        std::unique_ptr<std::ostream> file;
        if (!c.out.empty()) file = open_sink(c.out);
        std::ostream& sink = file ? *file : out;

        if (sweep->parsed()) {
            const SweepOutput so = cmd_sweep(c, p, s);
            if (c.format == "csv") {
                sink << asianmc_csv_header() << '\n';
                for (const std::string& line : so.csv_lines) sink << line << '\n';
            } else {
                sink << so.pretty;
            }
        } else {
            std::vector<Row> rows;
            if (price->parsed()) rows = cmd_price(c, p);
            else if (greeks->parsed()) rows = cmd_greeks(c, p);
            else if (cdf->parsed()) rows = cmd_cdf(c, p);
            else if (density->parsed()) rows = cmd_density(c, p);
            else if (joint->parsed()) rows = cmd_joint(c, p);
            else if (kernel->parsed()) rows = cmd_kernel(c, p);
            else if (bias->parsed()) rows = cmd_bias(c, p, b);
            write_rows(sink, rows, c);
        }
        sink.flush();
        if (!sink) throw ApiError("failed writing output");
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ApiError& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace asianmc_cli
