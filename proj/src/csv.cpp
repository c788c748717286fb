#include "asianmc/csv.hpp"

#include <algorithm>
#include <cstdio>

namespace asianmc {

namespace {

std::string real(const std::optional<double>& x) {
    if (!x) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *x);
    return buf;
}

std::string integer(const std::optional<std::uint64_t>& x) {
    return x ? std::to_string(*x) : std::string{};
}

// Flags are a free-form '|' list; keep the row a valid CSV line.
std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '"', '\'');
    return s;
}

void add_flag(std::string& flags, const std::string& f) {
    if (f.empty()) return;
    if (!flags.empty()) flags += '|';
    flags += f;
}

}  // namespace

const std::string& csv_header() {
    static const std::string header =
        "quantity,method,a,t,nu,s0,strike,sigma,rate,expiry,n_paths,n_steps,seed,estimate,stderr,"
        "wall_ms,flags";
    return header;
}

std::string format_record(const Record& r, bool include_timing) {
    std::string line;
    line.reserve(256);
    auto field = [&](const std::string& s) {
        line += s;
        line += ',';
    };
    field(r.quantity);
    field(r.method);
    field(real(r.a));
    field(real(r.t));
    field(real(r.nu));
    field(real(r.s0));
    field(real(r.strike));
    field(real(r.sigma));
    field(real(r.rate));
    field(real(r.expiry));
    field(integer(r.n_paths));
    field(integer(r.n_steps));
    field(integer(r.seed));
    field(real(r.estimate));
    field(real(r.std_error));
    field(include_timing ? real(r.wall_ms) : std::string{});
    line += sanitize(r.flags);
    return line;
}

void attach(Record& r, const Estimate& e) {
    r.estimate = e.mean;
    r.std_error = e.std_error;
    r.wall_ms = e.wall_time_ms;
    r.n_paths = e.n_paths;
    std::string f = flags_to_string(e.flags);
    add_flag(f, r.flags);
    r.flags = f;
}

std::vector<Record> sweep_records(const SweepSpec& spec, const SweepResult& result) {
    std::vector<Record> out;
    out.reserve(result.rows.size());
    for (const SweepRow& row : result.rows) {
        Record r;
        r.quantity = std::string(to_string(spec.quantity));
        r.method = std::string(to_string(row.method));
        const GridPoint& p = row.point;
        r.a = p.a;
        r.t = p.t;
        r.nu = p.nu;
        r.s0 = p.s0;
        r.strike = p.strike;
        r.sigma = p.sigma;
        r.rate = p.rate;
        r.expiry = p.expiry;
        r.n_paths = p.n_paths;
        r.n_steps = row.n_steps;
        r.seed = row.seed;
        if (p.b) add_flag(r.flags, "b=" + real(p.b));
        if (row.estimate) {
            attach(r, *row.estimate);
        } else {
            add_flag(r.flags, "error=" + row.error);
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace asianmc
