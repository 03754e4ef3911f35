#ifndef REARRKIT_RNG_HPP
#define REARRKIT_RNG_HPP

#include <cstdint>

namespace rearrkit {

// Counter-based splittable generator. Output i of a stream depends only on
// (key, i), so substreams derived from (seed, index) give identical draws in
// serial and parallel runs. The mixer is the splitmix64 finalizer.
class RngStream {
public:
    explicit RngStream(std::uint64_t key) : key_(key), ctr_(0) {}

    static RngStream from_seed(std::uint64_t seed) {
        return RngStream(mix(seed ^ 0x6a09e667f3bcc908ULL));
    }

    // Independent child stream; deterministic in (key, index).
    RngStream substream(std::uint64_t index) const {
        return RngStream(mix(key_ ^ mix(index * 0xda942042e4dd58b5ULL + 0x9e3779b97f4a7c15ULL)));
    }

    std::uint64_t next_u64() {
        return mix(key_ + 0x9e3779b97f4a7c15ULL * ++ctr_);
    }

    // Uniform draw in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform draw in [lo, hi).
    double next_range(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t ctr_;
};

} // namespace rearrkit

#endif
