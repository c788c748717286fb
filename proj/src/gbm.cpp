#include "asianmc/gbm.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <thread>

#include "asianmc/errors.hpp"
#include "parallel.hpp"

namespace asianmc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// One bisection step of the bridge construction:
// B[mid] = w_left * B[left] + w_right * B[right] + sd * z.
struct BridgeStep {
    std::size_t left, mid, right;
    double w_left, w_right, sd;
};

// Breadth-first bisection of [0, n]. Level k of an n-step schedule touches the
// same time points as level k of a 2n-step schedule, and consumes the same
// normals, which is what makes refinements nested.
std::vector<BridgeStep> bridge_schedule(std::size_t n, double dt) {
    std::vector<BridgeStep> steps;
    steps.reserve(n);
    std::vector<std::pair<std::size_t, std::size_t>> queue{{0, n}};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        auto [l, r] = queue[head];
        if (r - l < 2) continue;
        const std::size_t m = l + (r - l) / 2;
        const double span = static_cast<double>(r - l);
        steps.push_back({l, m, r, static_cast<double>(r - m) / span,
                         static_cast<double>(m - l) / span,
                         std::sqrt(static_cast<double>((m - l) * (r - m)) / span * dt)});
        queue.emplace_back(l, m);
        queue.emplace_back(m, r);
    }
    return steps;
}

void validate(double t, const MCConfig& cfg) {
    if (!(t >= 0.0) || !std::isfinite(t))
        throw DomainError("time horizon must be finite and >= 0, got " + std::to_string(t));
    if (cfg.n_steps == 0) throw DomainError("n_steps must be >= 1");
    if (cfg.n_paths == 0) throw DomainError("n_paths must be >= 1");
}

PathSample integrate(std::span<const double> b, double drift_per_step, double dt) {
    double sum = 0.0;
    double prev = std::exp(b[0]);
    for (std::size_t i = 1; i < b.size(); ++i) {
        const double x = std::exp(b[i] + drift_per_step * static_cast<double>(i));
        sum += prev + x;
        prev = x;
    }
    return {prev, 0.5 * dt * sum};
}

class PathBuilder {
public:
    PathBuilder(double t, double nu, std::size_t n_steps)
        : t_(t), n_(n_steps), dt_(t / static_cast<double>(n_steps)),
          schedule_(bridge_schedule(n_steps, dt_)), drift_per_step_((nu - 0.5) * dt_),
          z_(n_steps), b_(n_steps + 1) {}

    void draw(std::uint64_t key) {
        std::mt19937_64 engine(key);
        std::normal_distribution<double> normal;
        for (double& z : z_) z = normal(engine);
    }

    PathSample build(double sign) {
        b_[0] = 0.0;
        b_[n_] = sign * std::sqrt(t_) * z_[0];
        std::size_t k = 1;
        for (const BridgeStep& s : schedule_)
            b_[s.mid] = s.w_left * b_[s.left] + s.w_right * b_[s.right] + sign * s.sd * z_[k++];

        return integrate(b_, drift_per_step_, dt_);
    }

private:
    double t_;
    std::size_t n_;
    double dt_;
    std::vector<BridgeStep> schedule_;
    double drift_per_step_;
    std::vector<double> z_;
    std::vector<double> b_;
};

}  // namespace

PathBatch::PathBatch(double t, DriftSpec drift, const MCConfig& cfg,
                     std::vector<double> terminal, std::vector<double> integral)
    : t_(t), drift_(drift), cfg_(cfg), terminal_(std::move(terminal)),
      integral_(std::move(integral)) {}

std::size_t default_steps(double t, std::size_t steps_per_unit, std::size_t min_steps) {
    if (!(t >= 0.0)) throw DomainError("time horizon must be >= 0");
    const double scaled = std::ceil(static_cast<double>(steps_per_unit) * t);
    return std::max<std::size_t>(min_steps, static_cast<std::size_t>(scaled));
}

std::uint64_t path_key(std::uint64_t master_seed, std::uint64_t path_index) {
    return splitmix64(splitmix64(master_seed) ^ splitmix64(path_index + 0x632BE59BD9B4E019ULL));
}

PathSample path_functionals(double t, DriftSpec drift, std::span<const double> brownian) {
    if (!(t >= 0.0)) throw DomainError("time horizon must be >= 0");
    if (brownian.size() < 2) throw DomainError("need at least one grid interval");
    const double dt = t / static_cast<double>(brownian.size() - 1);
    return integrate(brownian, (drift.nu - 0.5) * dt, dt);
}

PathSample sample_path(double t, DriftSpec drift, const MCConfig& cfg, std::size_t path_index) {
    validate(t, cfg);
    if (path_index >= cfg.n_paths)
        throw DomainError("path index " + std::to_string(path_index) + " outside [0, n_paths)");
    if (t == 0.0) return {};

    PathBuilder builder(t, drift.nu, cfg.n_steps);
    const bool mirrored = cfg.antithetic && (path_index % 2 == 1);
    builder.draw(path_key(cfg.master_seed, mirrored ? path_index - 1 : path_index));
    return builder.build(mirrored ? -1.0 : 1.0);
}

PathBatch sample_batch(double t, DriftSpec drift, const MCConfig& cfg) {
    validate(t, cfg);
    const std::size_t n = cfg.n_paths;
    std::vector<double> terminal(n, 1.0);
    std::vector<double> integral(n, 0.0);
    if (t == 0.0) return PathBatch(t, drift, cfg, std::move(terminal), std::move(integral));

    // Work items are single paths, or antithetic pairs so the normals are drawn once.
    const std::size_t stride = cfg.antithetic ? 2 : 1;
    const std::size_t items = (n + stride - 1) / stride;
    detail::parallel_for(items, cfg.threads, [&](std::size_t begin, std::size_t end) {
        PathBuilder builder(t, drift.nu, cfg.n_steps);
        for (std::size_t item = begin; item < end; ++item) {
            const std::size_t i = item * stride;
            builder.draw(path_key(cfg.master_seed, i));
            const PathSample p = builder.build(1.0);
            terminal[i] = p.terminal;
            integral[i] = p.integral;
            if (stride == 2 && i + 1 < n) {
                const PathSample q = builder.build(-1.0);
                terminal[i + 1] = q.terminal;
                integral[i + 1] = q.integral;
            }
        }
    });
    return PathBatch(t, drift, cfg, std::move(terminal), std::move(integral));
}

}  // namespace asianmc
