#pragma once

#include <cstdint>
#include <random>

namespace gapseq {

// SplitMix64 finalizer. Used for seed derivation and content fingerprints.
constexpr uint64_t mix64(uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream `index` of experiment seed `base`. Fixed hash, so seed fans are
// reproducible without any coordination between workers.
constexpr uint64_t derive_seed(uint64_t base, uint64_t index) noexcept {
    return mix64(base ^ mix64(index));
}

// A single exclusively-owned random stream. The engine is the
// standard-specified mt19937_64, so sequences are bit-identical across
// platforms; the seed is mixed first so adjacent seeds give unrelated
// streams.
class RngStream {
  public:
    explicit RngStream(uint64_t seed) : engine_(mix64(seed)) {}

    static RngStream for_stream(uint64_t base_seed, uint64_t stream_index) {
        return RngStream(derive_seed(base_seed, stream_index));
    }

    uint64_t u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Incremented by samplers when an astronomically unlikely tail value had
    // to be clamped instead of silently wrapping.
    uint64_t clamp_count = 0;

  private:
    std::mt19937_64 engine_;
};

}  // namespace gapseq
