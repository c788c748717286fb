#pragma once

// Row format shared by the CLI and sweep output:
// quantity,method,a,t,nu,s0,strike,sigma,rate,expiry,n_paths,n_steps,seed,estimate,stderr,wall_ms,flags

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asianmc/bench.hpp"
#include "asianmc/estimate.hpp"

namespace asianmc {

struct Record {
    std::string quantity;
    std::string method;
    std::optional<double> a, t, nu, s0, strike, sigma, rate, expiry;
    std::optional<std::uint64_t> n_paths, n_steps, seed;
    std::optional<double> estimate, std_error, wall_ms;
    std::string flags;
};

const std::string& csv_header();

/// Floats use 17 significant digits; absent fields are empty. wall_ms is
/// only written when include_timing is set, so output is reproducible by default.
std::string format_record(const Record& r, bool include_timing);

/// Fill estimate, stderr, wall time, n_paths and flags from an Estimate.
void attach(Record& r, const Estimate& e);

std::vector<Record> sweep_records(const SweepSpec& spec, const SweepResult& result);

}  // namespace asianmc
