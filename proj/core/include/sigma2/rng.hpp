#pragma once

#include <cstdint>

namespace sigma2 {

// Counter-based generator: output i is a fixed 64-bit mix of (key, i), so a
// stream is a pure function of its key and any draw can be reproduced from
// the seed alone, independent of platform or call history.  The mix is the
// splitmix64 finalizer applied to key + (i+1)*GOLDEN, where GOLDEN is the
// 64-bit golden-ratio increment 0x9E3779B97F4A7C15.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    static std::uint64_t mix(std::uint64_t key, std::uint64_t counter) {
        std::uint64_t z = key + (counter + 1) * 0x9E3779B97F4A7C15ull;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t next_u64() { return mix(key_, counter_++); }

    // 53-bit uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Independent stream derived from this one's key; does not advance this
    // stream.  Distinct tags give distinct keys.
    CounterRng split(std::uint64_t tag) const {
        return CounterRng(mix(key_ ^ 0xA0761D6478BD642Full, tag));
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace sigma2
