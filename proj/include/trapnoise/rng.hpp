#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace trapnoise {

/// SplitMix64 finalizer. Used to derive well-separated child seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for stream (a, b) of a master seed. The mapping depends only on
/// its arguments, so work can be scheduled on any thread without changing the
/// random numbers a given (a, b) unit consumes.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b = 0) noexcept {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ splitmix64(a + 0x632be59bd9b4e019ULL));
    s = splitmix64(s ^ splitmix64(b + 0x85157af5ULL));
    return s;
}

/// 64-bit Mersenne Twister with platform-independent conversions to
/// uniform doubles. The std::*_distribution classes are only used where the
/// standard leaves no simple portable alternative (Poisson, normal).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Exponential waiting time with the given rate (> 0).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    double normal(double mean, double stddev) {
        std::normal_distribution<double> dist(mean, stddev);
        return dist(engine_);
    }

    long poisson(double mean) {
        if (mean <= 0.0) return 0;
        std::poisson_distribution<long> dist(mean);
        return dist(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace trapnoise
