#pragma once

#include <cmath>
#include <cstdint>

#include "ebci/baselines.hpp"

namespace ebci::sim {

// Counter-keyed generator: each replication derives its own stream from
// (seed, index) by hashing, so results do not depend on how replications
// are scheduled across threads. The step is the splitmix64 update, which is
// equidistributed enough for Monte Carlo table work.
class RngStream {
  public:
    static RngStream child(std::uint64_t seed, std::uint64_t index)
    {
        RngStream r;
        r.state_ = mix(mix(seed) + 0x9E3779B97F4A7C15ull * (index + 1));
        return r;
    }

    std::uint64_t next_u64()
    {
        state_ += 0x9E3779B97F4A7C15ull;
        return finalize(state_);
    }

    // uniform on the open interval (0, 1): never 0, never 1
    double uniform01()
    {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // exactly one uniform per draw (inverse cdf), so streams stay aligned
    // across error distributions
    double normal() { return baselines::normal_quantile(uniform01()); }

    // Gamma(2,1) as a sum of two exponentials
    double gamma2()
    {
        return -std::log(uniform01()) - std::log(uniform01());
    }

  private:
    static std::uint64_t finalize(std::uint64_t z)
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    static std::uint64_t mix(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        return finalize(x);
    }

    std::uint64_t state_ = 0;
};

}  // namespace ebci::sim
