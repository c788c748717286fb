#include <cmath>

#include "asianmc/errors.hpp"
#include "asianmc/greeks.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace asianmc;

namespace {

MCConfig small(std::size_t paths = 20000, std::size_t steps = 256, std::uint64_t seed = 42) {
    MCConfig cfg;
    cfg.n_paths = paths;
    cfg.n_steps = steps;
    cfg.master_seed = seed;
    return cfg;
}

OptionSpec unit() { return {}; }

bool close(const Estimate& a, const Estimate& b, double k = 3.0, double slack = 0.0) {
    return std::abs(a.mean - b.mean) <= k * combined_stderr(a, b) + slack;
}

}  // namespace

TEST_CASE("option spec validation and derived scale") {
    OptionSpec s{2.0, 1.5, 0.4, 0.03, 0.5};
    CHECK(s.scale() == doctest::Approx(0.16 * 1.5 * 0.5 / 2.0));
    CHECK(s.horizon() == doctest::Approx(0.08));
    CHECK(s.discount() == doctest::Approx(std::exp(-0.015)));
    CHECK_NOTHROW(s.validate());

    const MCConfig cfg = small(10, 8);
    for (OptionSpec bad : {OptionSpec{0.0, 1, 1, 0, 1}, OptionSpec{1, -1, 1, 0, 1}, OptionSpec{1, 1, 0, 0, 1},
                           OptionSpec{1, 1, 1, -0.1, 1}, OptionSpec{1, 1, 1, 0, 0},
                           OptionSpec{1, 1, 1, 0, std::nan("")}}) {
        CHECK_THROWS_AS(price(bad, cfg, Method::naive), DomainError);
        CHECK_THROWS_AS(greeks(bad, cfg, Method::identity), DomainError);
    }
    CHECK_THROWS_AS(price(unit(), cfg, Method::fd), DomainError);
}

TEST_CASE("zero strike gives the closed forms at two rates") {
    const MCConfig cfg = small(1000, 16);
    for (double r : {0.0, 0.05}) {
        OptionSpec s{1.0, 0.0, 1.0, r, 1.0};
        const double disc = std::exp(-r);
        for (Method m : {Method::naive, Method::identity}) {
            CAPTURE(r);
            CAPTURE(to_string(m));
            const Estimate p = price(s, cfg, m);
            CHECK(p.mean == disc);
            CHECK(p.std_error == 0.0);
            CHECK((p.flags & flags::closed_form) != 0);
            CHECK(delta(s, cfg, m).mean == disc);
            CHECK(gamma(s, cfg, m).mean == 0.0);
            CHECK(vega(s, cfg, m).mean == 0.0);
            CHECK(theta(s, cfg, m).mean == 0.0);

            const GreekReport g = greeks(s, cfg, m);
            CHECK(g.price.mean == disc);
            CHECK(g.delta.mean == disc);
            CHECK(g.gamma.mean == 0.0);
            CHECK(g.vega.mean == 0.0);
            CHECK(g.theta.mean == 0.0);
            CHECK(g.theta.std_error == 0.0);
        }
    }
    OptionSpec rich{2.5, 0.0, 0.3, 0.05, 1.0};
    CHECK(price(rich, cfg, Method::identity).mean == 2.5 * std::exp(-0.05));
}

TEST_CASE("with r = 0 theta is minus half sigma^2 S0^2 gamma") {
    const MCConfig cfg = small(5000);
    for (Method m : {Method::naive, Method::identity}) {
        OptionSpec s{1.0, 1.0, 1.3, 0.0, 0.8};
        const GreekReport g = greeks(s, cfg, m);
        CHECK(g.theta.mean == -0.5 * 1.3 * 1.3 * g.gamma.mean);
        CHECK(g.theta.std_error == doctest::Approx(0.5 * 1.3 * 1.3 * g.gamma.std_error).epsilon(1e-12));
        // The single-Greek entry points use the same paths.
        CHECK(theta(s, cfg, m).mean == g.theta.mean);
        CHECK(price(s, cfg, m).mean == g.price.mean);
        CHECK(delta(s, cfg, m).mean == g.delta.mean);
    }
}

TEST_CASE("the naive price matches the independent simulation") {
    const Estimate p = price(unit(), small(100000, 256, 21), Method::naive);
    CHECK(std::abs(p.mean - oracle::kPriceUnit.value) <=
          3.0 * std::hypot(p.std_error, oracle::kPriceUnit.std_error));
}

TEST_CASE("price is nonincreasing in the strike on shared paths") {
    const MCConfig cfg = small(5000);
    double prev = 1e300;
    for (double k : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) {
        OptionSpec s = unit();
        s.strike = k;
        const double p = price(s, cfg, Method::naive).mean;
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("deep out of the money") {
    OptionSpec s = unit();
    s.strike = 100.0;
    for (Method m : {Method::naive, Method::identity}) {
        const Estimate p = price(s, small(), m);
        CHECK(std::abs(p.mean) <= 3.0 * p.std_error + 1e-8);
    }
}

TEST_CASE("naive sensitivities agree with bump-and-revalue") {
    const GreekReport g = greeks(unit(), small(50000, 256, 3), Method::naive, true);
    REQUIRE(g.fd_cross_checks.size() == 4);
    CHECK(close(g.delta, g.fd_cross_checks.at("delta")));
    // Both gamma estimators are differences with their own O(h^2) bias.
    CHECK(close(g.gamma, g.fd_cross_checks.at("gamma"), 3.0, 0.02));
    CHECK(close(g.vega, g.fd_cross_checks.at("vega")));
    CHECK(g.gamma.mean >= -3.0 * g.gamma.std_error);
}

TEST_CASE("the strike term of vega needs the discount factor") {
    // At r > 0 the two readings of the strike term differ by
    // (2 kappa / sigma)(1 - e^{-r tau}) Pr[A_T > a]; bumping sigma decides.
    OptionSpec s = unit();
    s.rate = 0.2;
    const MCConfig cfg = small(100000, 256, 5);
    const GreekReport g = greeks(s, cfg, Method::naive, true);
    REQUIRE(g.vega_undiscounted_strike.has_value());
    const Estimate& fd = g.fd_cross_checks.at("vega");
    CHECK(close(g.vega, fd));
    CHECK_FALSE(close(*g.vega_undiscounted_strike, fd, 5.0));
}

TEST_CASE("report layout") {
    const MCConfig cfg = small(2000, 32);
    const GreekReport plain = greeks(unit(), cfg, Method::identity);
    CHECK(plain.fd_cross_checks.empty());
    CHECK_FALSE(plain.vega_undiscounted_strike.has_value());
    CHECK(plain.method == Method::identity);

    OptionSpec s = unit();
    s.rate = 0.05;
    const GreekReport checked = greeks(s, cfg, Method::identity, true);
    for (const char* k : {"delta", "gamma", "theta", "vega"}) {
        REQUIRE(checked.fd_cross_checks.count(k) == 1);
        CHECK(checked.fd_cross_checks.at(k).method == Method::fd);
    }
    CHECK(checked.vega_undiscounted_strike.has_value());

    const GreekReport bumped = greeks(unit(), cfg, Method::fd);
    CHECK(bumped.delta.method == Method::fd);
    CHECK(bumped.delta.mean == delta(unit(), cfg, Method::fd).mean);
}

TEST_CASE("bump-and-revalue theta is minus the expiry sensitivity") {
    // For r = 0: Call(tau) = E[(A_{tau} - tau)^+] / tau at s0 = kappa = sigma = 1,
    // which grows with tau, so theta is negative.
    const Estimate t = theta(unit(), small(20000, 256), Method::fd);
    CHECK(t.mean < 0.0);
}
