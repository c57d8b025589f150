#pragma once

#include <cstdint>

namespace precis {

// Counter-based pseudo-random stream (splitmix64: Weyl increment plus a
// 64-bit finalizer). Every bit of behavior is specified here, so sequences
// are identical across platforms, standard libraries, and thread counts.
// Replication r of an experiment draws from for_stream(master_seed, r).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed);

    // Independent stream keyed by (master_seed, stream_id).
    static SeededRng for_stream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1): 53 random bits plus a half-ulp
    // offset, so 0 and 1 are never produced.
    double next_uniform();

    // Uniform on (a, b).
    double next_uniform(double a, double b);

    // Standard normal via the inverse-CDF transform of next_uniform().
    double next_normal();

private:
    std::uint64_t state_;
};

} // namespace precis
