#pragma once

#include <cstdint>
#include <string_view>

namespace vlc {

/// Deterministic random stream (xoshiro256++). Streams are derived from a
/// global 64-bit seed plus a purpose tag and replicate index, so every
/// stochastic routine draws from its own stream and results do not depend
/// on execution order.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t index = 0);

    std::uint64_t next_u64();

    /// Uniform in [0, 1).
    double next_double();

    /// Uniform integer in [0, bound). bound must be > 0.
    std::uint64_t next_below(std::uint64_t bound);

    /// Standard normal via Box-Muller; two raw draws per call, no cached spare.
    double next_gaussian();

  private:
    std::uint64_t state_[4];
};

}  // namespace vlc
