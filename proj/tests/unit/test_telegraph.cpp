#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "test_support.hpp"
#include "trapnoise/errors.hpp"
#include "trapnoise/rng.hpp"
#include "trapnoise/telegraph.hpp"

using namespace trapnoise;
using doctest::Approx;

TEST_CASE("steady state of a two-state trap") {
    const auto sym = steady_state({1.0, 1.0});
    CHECK(sym.p == 0.5);
    CHECK(sym.tau == 0.5);
    CHECK(sym.variance() == 0.25);

    const auto s = steady_state({2.0, 6.0});
    CHECK(s.p == Approx(0.25));
    CHECK(s.tau == Approx(0.125));

    CHECK(steady_state({3.0, 0.0}).p == 1.0);
    CHECK(steady_state({0.0, 3.0}).p == 0.0);
    CHECK_THROWS_AS(steady_state({0.0, 0.0}), DomainError);
    CHECK_THROWS_AS(steady_state({-1.0, 2.0}), DomainError);
}

TEST_CASE("absorbing charged state keeps the path constant") {
    const auto path = sample_trajectory({2.0, 0.0}, 100.0, 1, 3);
    CHECK(path.switch_times.empty());
    CHECK(path.state_at(0.0) == 1);
    CHECK(path.state_at(99.0) == 1);
    CHECK(path.occupied_fraction() == 1.0);
}

TEST_CASE("long trajectories spend the steady-state fraction charged") {
    const TelegraphRates rates{2.0, 6.0};
    const double tau = steady_state(rates).tau;
    const double duration = 2.0e5 * tau;
    const auto path = sample_trajectory(rates, duration, 0, 42);
    // Time average of a telegraph signal: variance 2 p (1-p) tau / T.
    const double sd = std::sqrt(2.0 * 0.25 * 0.75 * tau / duration);
    CHECK(std::abs(path.occupied_fraction() - 0.25) < 4.0 * sd);

    for (std::size_t i = 1; i < path.switch_times.size(); ++i)
        REQUIRE(path.switch_times[i] > path.switch_times[i - 1]);
}

TEST_CASE("autocorrelation time matches 1/(k+ + k-)") {
    const TelegraphRates rates{2.0, 6.0};
    const double tau = steady_state(rates).tau;
    const double dt = 0.05 * tau;
    const std::size_t n = 400000;  // 20000 tau
    const auto path = sample_trajectory(rates, n * dt, 0, 7);
    const auto x = path.sample_uniform(n, dt);

    double m = 0.0;
    for (int v : x) m += v;
    m /= static_cast<double>(n);
    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - m) * (x[i + lag] - m);
        return s / static_cast<double>(n - lag);
    };
    // Least-squares slope of log C(lag)/C(0) over lags out to 1.5 tau.
    const double c0 = autocov(0);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t lag = 1; lag <= 30; ++lag) {
        const double t = lag * dt;
        const double y = std::log(autocov(lag) / c0);
        sxx += t * t;
        sxy += t * y;
    }
    const double tau_fit = -sxx / sxy;
    CHECK(std::abs(tau_fit / tau - 1.0) < 0.10);
}

TEST_CASE("trajectory marginals agree with stationary sampling") {
    // Start each path from the stationary distribution; the state at a later
    // time must still be Bernoulli(p).
    const TelegraphRates rates{1.0, 3.0};
    const double p = steady_state(rates).p;
    const std::size_t n_paths = 20000;
    Rng init(9);
    double charged_late = 0.0;
    for (std::size_t i = 0; i < n_paths; ++i) {
        const int s0 = init.bernoulli(p) ? 1 : 0;
        const auto path = sample_trajectory(rates, 2.0, s0, derive_seed(9, i));
        charged_late += path.state_at(1.3);
    }
    const double sd = std::sqrt(p * (1.0 - p) / n_paths);
    CHECK(std::abs(charged_late / n_paths - p) < 4.0 * sd);
}

TEST_CASE("trajectories are deterministic per seed") {
    const auto a = sample_trajectory({1.0, 2.0}, 50.0, 0, 123);
    const auto b = sample_trajectory({1.0, 2.0}, 50.0, 0, 123);
    CHECK(a.switch_times == b.switch_times);
    std::ostringstream oa, ob;
    a.write_csv(oa);
    b.write_csv(ob);
    CHECK(oa.str() == ob.str());
    CHECK(oa.str().rfind("t,state\n", 0) == 0);
    CHECK_THROWS_AS(sample_trajectory({1.0, 2.0}, 0.0, 0, 1), DomainError);
    CHECK_THROWS_AS(sample_trajectory({1.0, 2.0}, 1.0, 2, 1), DomainError);
}

TEST_CASE("stationary snapshots") {
    for (auto v : sample_stationary(0.0, 50, 1)) CHECK(v == 0);
    for (auto v : sample_stationary(1.0, 50, 1)) CHECK(v == 1);
    CHECK_THROWS_AS(sample_stationary(1.5, 5, 1), DomainError);

    const double p = 0.35;
    const std::size_t n_traps = 18, draws = 100000;
    Rng rng(77);
    std::vector<std::uint8_t> s(n_traps);
    std::vector<double> sums(draws);
    double total = 0.0;
    for (std::size_t d = 0; d < draws; ++d) {
        sample_stationary(p, rng, s);
        double k = 0.0;
        for (auto v : s) k += v;
        sums[d] = k;
        total += k;
    }
    const double n_total = static_cast<double>(n_traps * draws);
    CHECK(std::abs(total / n_total - p) < 3.0 * std::sqrt(p * (1.0 - p) / n_total));

    // Var of the per-draw count is N p (1-p); the sample variance has
    // relative standard error about sqrt(2/draws).
    const double var = testsupport::variance(sums);
    const double expected = n_traps * p * (1.0 - p);
    CHECK(std::abs(var / expected - 1.0) < 4.0 * std::sqrt(2.0 / draws));

    CHECK(sample_stationary(0.35, 18, 5) == sample_stationary(0.35, 18, 5));
}
