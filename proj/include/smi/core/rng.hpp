#pragma once

#include <cstdint>
#include <string_view>

#include "smi/core/normal.hpp"

namespace smi {

// Deterministic, splittable random stream (xoshiro256** with splitmix64
// seeding). Identical seed + identical call sequence gives a bit-identical
// stream. Independent subsystems take substreams derived from a label, so
// adding draws in one subsystem never shifts another.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    // Substream keyed by (root seed, label). Derivation uses only the root
    // seed, never the current state, so substreams are call-order invariant.
    Rng substream(std::string_view label) const {
        return Rng(mix(seed_, fnv1a(label)));
    }
    Rng substream(std::string_view label, std::uint64_t index) const {
        return Rng(mix(mix(seed_, fnv1a(label)), index + 0x9e3779b97f4a7c15ULL));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on the open interval (0,1); 53-bit resolution, zero excluded.
    double uniform() {
        while (true) {
            const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
            if (u > 0.0) return u;
        }
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via the inverse CDF: exact given the uniform stream,
    // no rejection state to keep in sync.
    double normal() { return std_normal_quantile(uniform()); }

    double exponential() { return -std::log(uniform()); }

    std::uint64_t below(std::uint64_t n) {
        // Lemire-style rejection-free enough for our n; bias < 2^-64 ignored.
        return next_u64() % n;
    }

  private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    static std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
        return splitmix64(x);
    }

    std::uint64_t seed_;
    std::uint64_t state_[4];
};

}  // namespace smi
