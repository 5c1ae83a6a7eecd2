#pragma once

#include <cstdint>
#include <random>

namespace cbt {

// splitmix64 finalizer (Sebastiano Vigna's constants). Used to derive
// independent per-replicate seeds from (master_seed, replicate_index).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Deterministic RNG wrapper. The uniform mapping is fixed here (top 53 bits)
// instead of std::uniform_real_distribution, whose output sequence is
// implementation defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        // rejection to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % n;
    }

  private:
    std::mt19937_64 gen_;
};

// Stream derivation: two splitmix64 rounds over master_seed advanced by the
// replicate index times the golden-ratio increment. Streams for distinct
// indices are independent for any worker layout.
inline Rng rng_stream(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    s = splitmix64(s);
    s = splitmix64(s);
    return Rng(s);
}

} // namespace cbt
