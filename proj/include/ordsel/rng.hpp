#pragma once

#include <cmath>
#include <cstdint>

namespace ordsel {

// Counter-based uniform stream. A (seed, stream_index) pair fully determines
// the sequence, independent of thread count or sharding: draw i is a strong
// 64-bit mix of the stream key and i. Streams derived via derived(k) are
// disjoint for distinct k, which is how Monte Carlo shards replications.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_(stream_index), key_(derive_key(seed, stream_index)) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    // Independent child stream; used one-per-replication in Monte Carlo.
    RandomStream derived(std::uint64_t index) const {
        RandomStream s(*this);
        s.key_ = mix(key_ ^ mix(index + 0x9E3779B97F4A7C15ull));
        s.counter_ = 0;
        s.has_spare_ = false;
        return s;
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    // Strictly inside (0,1).
    double next_uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Standard normal via Marsaglia's polar method (exact, no erf needed).
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double v1, v2, s;
        do {
            v1 = 2.0 * next_uniform() - 1.0;
            v2 = 2.0 * next_uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v2 * f;
        has_spare_ = true;
        return v1 * f;
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBull;
        x ^= x >> 31;
        return x;
    }
    static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
        return mix(mix(seed + 0x2545F4914F6CDD1Dull) ^ mix(stream + 0x9E3779B97F4A7C15ull));
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ordsel
