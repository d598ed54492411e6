#pragma once

#include <cstdint>
#include <random>

namespace tspga::core {

/// Seeded random stream. Every stochastic decision in the engine funnels
/// through the three helpers below; the mt19937_64 output sequence is
/// standardized, and the mappings here are our own, so equal seeds give
/// bit-identical runs on any platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Unbiased integer in [0, bound). bound must be > 0.
    std::uint64_t uniform_index(std::uint64_t bound) {
        ++draws_;
        // Lemire multiply-shift with rejection.
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform real in [lo, hi).
    double uniform_real(double lo, double hi) {
        ++draws_;
        const double u = (engine_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    /// Bernoulli trial with success probability p.
    bool coin(double p) { return uniform_real(0.0, 1.0) < p; }

    /// Number of draw calls so far (a coin counts as one draw).
    std::uint64_t draw_count() const { return draws_; }

  private:
    std::mt19937_64 engine_;
    std::uint64_t draws_ = 0;
};

}  // namespace tspga::core
