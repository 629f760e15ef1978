#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace fdnet {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Child seed for a named stream. Every random draw in the library traces back
// to one master seed through chains of derive_seed calls, so distinct
// consumers (initializer, generator, each holdout replicate, ...) get
// decorrelated streams and results never depend on evaluation order.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
    return mix64(parent + 0x9E3779B97F4A7C15ull * (stream + 1));
}

// Deterministic PRNG (SplitMix64). Same bits on every platform and thread
// count; the standard library engines/distributions are deliberately avoided
// because their output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix64(state_);
    }

    // Uniform on [0, 1), 53-bit mantissa.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n > 0. Multiply-shift bound (bias < 2^-64).
    std::uint64_t uniform_int(std::uint64_t n) noexcept {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal() noexcept {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) noexcept {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Moves a uniform k-subset to the front of v (partial Fisher-Yates).
    template <typename T>
    void choose_prefix(std::vector<T>& v, std::size_t k) noexcept {
        for (std::size_t i = 0; i < k && i < v.size(); ++i) {
            std::size_t j = i + static_cast<std::size_t>(uniform_int(v.size() - i));
            std::swap(v[i], v[j]);
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace fdnet
