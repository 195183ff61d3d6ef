// Counter-based splittable PRNG. Substreams are indexed by sample number, so
// a parallel Monte Carlo run over samples is bit-identical to a serial one.
#pragma once

#include <cmath>
#include <cstdint>

namespace qclone {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// One independent stream, keyed by (seed, stream index).
class StreamRng {
  public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::splitmix64(seed ^ detail::splitmix64(stream ^ 0xd1b54a32d192ed03ULL))),
          counter_(0) {}

    std::uint64_t next_u64() {
        return detail::splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Pairwise (cascade) summation in fixed order; deterministic regardless of
/// how terms were produced.
inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace qclone
