#pragma once

// Two-state (telegraph) trap occupancy: steady state, continuous-time
// trajectories and stationary snapshots. Rates are in an abstract time unit;
// only their ratio enters the steady state.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace trapnoise {

class Rng;

struct TelegraphRates {
    double k_plus = 0.0;   ///< capture, empty -> charged
    double k_minus = 0.0;  ///< release, charged -> empty

    void validate() const;
};

struct OccupancySteadyState {
    double p = 0.0;    ///< stationary occupation probability
    double tau = 0.0;  ///< switching (correlation) time 1/(k+ + k-)

    double variance() const { return p * (1.0 - p); }
};

OccupancySteadyState steady_state(const TelegraphRates& rates);

/// Piecewise-constant path on [0, duration]. switch_times are strictly
/// increasing; the state toggles at each of them.
struct TelegraphPath {
    int initial_state = 0;
    double duration = 0.0;
    std::vector<double> switch_times;

    int state_at(double t) const;
    /// Fraction of [0, duration] spent in state 1.
    double occupied_fraction() const;
    /// Samples the path on a uniform grid of n points starting at t = 0.
    std::vector<int> sample_uniform(std::size_t n, double dt) const;
    /// Writes "t,state" rows, one per segment start plus the end point.
    void write_csv(std::ostream& os) const;
};

TelegraphPath sample_trajectory(const TelegraphRates& rates, double duration, int initial_state,
                                std::uint64_t seed);

/// Independent Bernoulli(p) occupancies for n traps.
std::vector<std::uint8_t> sample_stationary(double p, std::size_t n_traps, std::uint64_t seed);
void sample_stationary(double p, Rng& rng, std::vector<std::uint8_t>& out);

}  // namespace trapnoise
