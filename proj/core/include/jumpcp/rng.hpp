#pragma once

#include <cstdint>
#include <random>

namespace jumpcp {

// Role tags for derived random streams. Every (master seed, replication, role, lane)
// tuple maps to its own engine, so results never depend on thread scheduling.
enum class StreamRole : std::uint64_t {
    path = 1,         // jump draws
    overlay = 2,      // Brownian overlay draws
    multipliers = 3,  // bootstrap multiplier draws
    aux = 4,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t s = splitmix64(master);
    s = splitmix64(s ^ (a * 0xD6E8FEB86659FD93ULL));
    s = splitmix64(s ^ (b * 0xCA5A826395121157ULL));
    s = splitmix64(s ^ (c * 0x9E3779B97F4A7C15ULL));
    return s;
}

// Seeded draw stream. Deterministic for a fixed build: reruns and different job
// counts replay identical sequences.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    static RngStream derive(std::uint64_t master, std::uint64_t replication, StreamRole role,
                            std::uint64_t lane = 0) {
        return RngStream(derive_seed(master, replication, static_cast<std::uint64_t>(role), lane));
    }

    // Uniform on (0, 1]: never returns 0, so inverse-tail draws stay inside the support.
    double uniform() { return 1.0 - unit_(engine_); }

    double normal() { return normal_(engine_); }

    long long poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        std::poisson_distribution<long long> dist(mean);
        return dist(engine_);
    }

    std::uint64_t next_u64() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace jumpcp
