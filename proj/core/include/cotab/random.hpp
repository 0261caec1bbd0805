#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cotab {

/// Seedable RNG wrapping std::mt19937_64 with explicit variate mappings,
/// so that identical seeds give identical streams independent of the
/// standard library's distribution implementations. Seeds are recorded in
/// every estimate that consumes randomness.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), bound > 0. Rejection sampling keeps the
    /// draw unbiased.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

    /// Standard normal via Box-Muller (pair cached).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    /// k distinct indices from [0, n), order of draw preserved.
    std::vector<int> sample_without_replacement(int n, int k) {
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k; ++i) {
            const auto j = static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
            out.push_back(pool[j]);
            pool[j] = pool[n - 1 - i];
        }
        return out;
    }

    /// Derived stream: deterministic function of (master, stream), suitable for
    /// per-start or per-sample substreams generated in parallel.
    static Rng derive(std::uint64_t master, std::uint64_t stream) {
        return Rng(splitmix64(master ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace cotab
