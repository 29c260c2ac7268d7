#include "trapnoise/telegraph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "trapnoise/errors.hpp"
#include "trapnoise/rng.hpp"

namespace trapnoise {

void TelegraphRates::validate() const {
    if (!(k_plus >= 0.0) || !(k_minus >= 0.0))
        throw DomainError("telegraph rates must be non-negative");
    if (!(k_plus + k_minus > 0.0)) throw DomainError("telegraph rates: k+ + k- must be > 0");
}

OccupancySteadyState steady_state(const TelegraphRates& rates) {
    rates.validate();
    const double total = rates.k_plus + rates.k_minus;
    return {rates.k_plus / total, 1.0 / total};
}

int TelegraphPath::state_at(double t) const {
    const auto flips = std::upper_bound(switch_times.begin(), switch_times.end(), t) -
                       switch_times.begin();
    return (initial_state + static_cast<int>(flips % 2)) % 2;
}

double TelegraphPath::occupied_fraction() const {
    if (!(duration > 0.0)) return static_cast<double>(initial_state);
    double occupied = 0.0;
    double t0 = 0.0;
    int state = initial_state;
    for (double t : switch_times) {
        if (state == 1) occupied += t - t0;
        t0 = t;
        state ^= 1;
    }
    if (state == 1) occupied += duration - t0;
    return occupied / duration;
}

std::vector<int> TelegraphPath::sample_uniform(std::size_t n, double dt) const {
    std::vector<int> out(n);
    std::size_t next = 0;
    int state = initial_state;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        while (next < switch_times.size() && switch_times[next] <= t) {
            state ^= 1;
            ++next;
        }
        out[i] = state;
    }
    return out;
}

void TelegraphPath::write_csv(std::ostream& os) const {
    os << "t,state\n";
    int state = initial_state;
    os << 0.0 << ',' << state << '\n';
    for (double t : switch_times) {
        state ^= 1;
        os << t << ',' << state << '\n';
    }
    os << duration << ',' << state << '\n';
}

TelegraphPath sample_trajectory(const TelegraphRates& rates, double duration, int initial_state,
                                std::uint64_t seed) {
    rates.validate();
    if (!(duration > 0.0)) throw DomainError("sample_trajectory: duration must be > 0");
    if (initial_state != 0 && initial_state != 1)
        throw DomainError("sample_trajectory: initial state must be 0 or 1");

    TelegraphPath path;
    path.initial_state = initial_state;
    path.duration = duration;

    Rng rng(seed);
    double t = 0.0;
    int state = initial_state;
    for (;;) {
        const double rate = state == 0 ? rates.k_plus : rates.k_minus;
        if (rate <= 0.0) break;  // absorbing
        t += rng.exponential(rate);
        if (t >= duration) break;
        path.switch_times.push_back(t);
        state ^= 1;
    }
    return path;
}

void sample_stationary(double p, Rng& rng, std::vector<std::uint8_t>& out) {
    for (auto& s : out) s = rng.uniform() < p ? 1 : 0;
}

std::vector<std::uint8_t> sample_stationary(double p, std::size_t n_traps, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("sample_stationary: p must be in [0, 1]");
    std::vector<std::uint8_t> out(n_traps);
    Rng rng(seed);
    sample_stationary(p, rng, out);
    return out;
}

}  // namespace trapnoise
