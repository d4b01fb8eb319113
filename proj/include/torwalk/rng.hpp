#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace torwalk {

inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seeded, stream-splittable generator (xoshiro256++ core, splitmix64 seeding).
// A (seed, stream_id) pair fully determines the sequence, independently of the
// platform; we never go through <random> distributions, whose output is
// implementation-defined.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : seed_(seed), stream_(stream_id) {
        std::uint64_t x = seed ^ (0x632BE59BD9B4E019ull * (stream_id + 0x9E3779B97F4A7C15ull));
        for (auto& s : s_) s = splitmix64(x);
        if (!(s_[0] | s_[1] | s_[2] | s_[3])) s_[0] = 0x1ull;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1), 53 mantissa bits
    double next_real53() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // standard normal, Box-Muller with a cached spare
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - next_real53();  // (0,1], keeps log finite
        double u2 = next_real53();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        has_spare_ = true;
        return r * std::cos(th);
    }

    // Independent-quality child stream; deterministic in (seed, stream, key).
    RngStream derived(std::uint64_t key) const {
        std::uint64_t x = stream_ ^ (key * 0xD1B54A32D192ED03ull + 0x2545F4914F6CDD1Dull);
        return RngStream(seed_, splitmix64(x));
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace torwalk
