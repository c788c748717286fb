#include "asianmc/estimate.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <string>

#include "asianmc/errors.hpp"

namespace asianmc {

namespace {
// exp() is exact-range safe inside this window; outside it we work in logs.
constexpr double kSafeLog = 700.0;
}  // namespace

std::string_view to_string(Method m) {
    switch (m) {
        case Method::naive: return "naive";
        case Method::identity: return "identity";
        case Method::fd: return "fd";
    }
    return "unknown";
}

Method parse_method(std::string_view s) {
    if (s == "naive") return Method::naive;
    if (s == "identity") return Method::identity;
    if (s == "fd") return Method::fd;
    throw DomainError("unknown method '" + std::string(s) + "'");
}

std::string flags_to_string(unsigned f) {
    std::string out;
    auto add = [&](unsigned bit, const char* name) {
        if (!(f & bit)) return;
        if (!out.empty()) out += '|';
        out += name;
    };
    add(flags::closed_form, "closed_form");
    add(flags::tail_underflow, "tail_underflow");
    return out;
}

double combined_stderr(const Estimate& a, const Estimate& b) {
    return std::hypot(a.std_error, b.std_error);
}

PathValues from_log_terms(std::span<const double> coeff, std::span<const double> log_weight) {
    if (coeff.size() != log_weight.size()) throw DomainError("coefficient/weight size mismatch");
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < coeff.size(); ++i) {
        if (!std::isfinite(coeff[i]))
            throw NumericError("non-finite path value at path " + std::to_string(i), static_cast<long long>(i));
        if (coeff[i] == 0.0) continue;
        if (std::isnan(log_weight[i]) || log_weight[i] == std::numeric_limits<double>::infinity())
            throw NumericError("non-finite log weight at path " + std::to_string(i), static_cast<long long>(i));
        shift = std::max(shift, log_weight[i]);
    }
    if (!std::isfinite(shift)) shift = 0.0;

    PathValues out;
    out.log_scale = shift;
    out.values.resize(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i)
        out.values[i] = coeff[i] == 0.0 ? 0.0 : coeff[i] * std::exp(log_weight[i] - shift);
    return out;
}

PathValues linear_combination(std::initializer_list<std::pair<double, const PathValues*>> terms,
                              double extra_offset) {
    std::size_t n = 0;
    double scale = -std::numeric_limits<double>::infinity();
    for (const auto& [c, v] : terms) {
        if (n == 0) n = v->size();
        if (v->size() != n) throw DomainError("path count mismatch in linear combination");
        if (c != 0.0) scale = std::max(scale, v->log_scale);
    }
    if (!std::isfinite(scale)) scale = 0.0;

    PathValues out;
    out.log_scale = scale;
    out.offset = extra_offset;
    out.values.assign(n, 0.0);
    for (const auto& [c, v] : terms) {
        if (c == 0.0) continue;
        out.offset += c * v->offset;
        const double factor = c * std::exp(v->log_scale - scale);
        if (factor == 0.0) continue;
        for (std::size_t i = 0; i < n; ++i) out.values[i] += factor * v->values[i];
    }
    return out;
}

Estimate summarize(const PathValues& v, Method method) {
    const std::size_t n = v.values.size();
    if (n == 0) throw DomainError("cannot summarize an empty sample");

    // Shifted sums: identical inputs give their common value exactly and zero variance.
    const double ref = v.values[0];
    double s1 = 0.0;
    double s2 = 0.0;
    for (double x : v.values) {
        const double d = x - ref;
        s1 += d;
        s2 += d * d;
    }
    const double nd = static_cast<double>(n);
    const double m = ref + s1 / nd;
    const double var = n > 1 ? std::max(0.0, (s2 - s1 * s1 / nd) / (nd - 1.0)) : 0.0;
    const double se = std::sqrt(var / nd);

    Estimate e;
    e.n_paths = n;
    e.method = method;

    if (std::abs(v.log_scale) <= kSafeLog) {
        const double scale = std::exp(v.log_scale);
        if (m != 0.0 && std::abs(scale * m) < DBL_MIN) {
            e.mean = v.offset;
            e.flags |= flags::tail_underflow;
            return e;
        }
        e.mean = v.offset + scale * m;
        e.std_error = scale * se;
    } else if (m == 0.0 && se == 0.0) {
        e.mean = v.offset;
    } else {
        const double log_mag = v.log_scale + std::log(std::max(std::abs(m), se));
        if (log_mag > std::log(DBL_MAX))
            throw NumericError("estimate overflows double precision");
        if (log_mag < std::log(DBL_MIN)) {
            e.mean = v.offset;
            e.std_error = 0.0;
            e.flags |= flags::tail_underflow;
            return e;
        }
        e.mean = v.offset + std::copysign(std::exp(v.log_scale + std::log(std::abs(m))), m);
        e.std_error = se > 0.0 ? std::exp(v.log_scale + std::log(se)) : 0.0;
    }
    if (!std::isfinite(e.mean)) throw NumericError("non-finite estimate");
    return e;
}

Estimate exact(double value, std::size_t n_paths, Method method) {
    Estimate e;
    e.mean = value;
    e.n_paths = n_paths;
    e.method = method;
    e.flags = flags::closed_form;
    return e;
}

}  // namespace asianmc
