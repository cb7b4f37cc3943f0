#ifndef MQH_RNG_HPP
#define MQH_RNG_HPP

#include <cstdint>

#include "mqh/normal.hpp"

namespace mqh {

// Identifies one reproducible stream of draws. The same (seed, stream) pair
// always yields bit-identical values, independent of call order or threads.
struct SeededStream {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

namespace detail {

// SplitMix64 finalizer (a 64-bit bijection).
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

// Counter-based generator: draw i of a stream is a pure function of
// (seed, stream, i). Gaussian variates use the inverse-c.d.f. transform so a
// single counter maps to a single normal draw.
class CounterRng {
  public:
    explicit CounterRng(SeededStream s)
        : base_(detail::mix64(detail::mix64(s.seed + detail::kGolden) ^
                              (s.stream * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL))) {}

    std::uint64_t bits(std::uint64_t i) const {
        return detail::mix64(base_ + (i + 1) * detail::kGolden);
    }

    // Uniform on the open interval (0,1).
    double uniform(std::uint64_t i) const {
        return static_cast<double>(bits(i) >> 11) * 0x1.0p-53 + 0x1.0p-54;
    }

    double normal(std::uint64_t i) const { return normal_quantile(uniform(i)); }

  private:
    std::uint64_t base_;
};

// Sequential convenience wrapper for test/instance generation.
class RandomSequence {
  public:
    explicit RandomSequence(SeededStream s) : rng_(s) {}
    explicit RandomSequence(std::uint64_t seed, std::uint64_t stream = 0)
        : rng_(SeededStream{seed, stream}) {}

    double uniform() { return rng_.uniform(next_++); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal() { return rng_.normal(next_++); }
    // Uniform integer in [lo, hi], inclusive.
    long long uniform_int(long long lo, long long hi) {
        return lo + static_cast<long long>(rng_.bits(next_++) % static_cast<std::uint64_t>(hi - lo + 1));
    }

  private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
};

}  // namespace mqh

#endif  // MQH_RNG_HPP
