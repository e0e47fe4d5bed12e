#pragma once

#include <cstdint>
#include <vector>

namespace rr {

/// Deterministic counter-based random streams.
///
/// Every consumer derives an independent stream from (seed, stream id,
/// counter) through the splitmix64 finalizer, so results are reproducible
/// bit-for-bit regardless of evaluation order or worker count.
class Rng {
public:
    explicit Rng(std::uint64_t state) : state_(state) {}

    /// Stream derivation: hash the (seed, stream, index) triple into an
    /// independent generator state.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t index = 0) {
        std::uint64_t s = mix(seed ^ mix(stream_id));
        s = mix(s ^ mix(index + 0x9e3779b97f4a7c15ULL));
        return Rng(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Modulo bias is ~n/2^64, irrelevant here.
    std::uint32_t next_below(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

    /// Uniform permutation of {0,..,n-1} by index swaps.
    void fill_permutation(std::vector<int>& p, int n) {
        p.resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            const int j = static_cast<int>(next_below(static_cast<std::uint32_t>(i + 1)));
            std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
        }
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

/// Fixed stream ids, one per randomized subsystem.
namespace streams {
constexpr std::uint64_t kTqSample = 0x01;
constexpr std::uint64_t kBootstrap = 0x02;
constexpr std::uint64_t kMatrixCorpus = 0x03;
constexpr std::uint64_t kStepCorpus = 0x04;
constexpr std::uint64_t kNormProbe = 0x05;
constexpr std::uint64_t kSeqSample = 0x06;
constexpr std::uint64_t kArraySample = 0x07;
}  // namespace streams

/// FNV-1a 64-bit digest for report case identification.
inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rr
