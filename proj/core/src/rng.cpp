#include "precis/rng.hpp"

#include "precis/numerics.hpp"

namespace precis {

namespace {

constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

SeededRng::SeededRng(std::uint64_t seed) : state_(mix64(seed ^ kWeyl)) {}

SeededRng SeededRng::for_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    SeededRng rng(0);
    rng.state_ = mix64(mix64(master_seed ^ kWeyl) + mix64(stream_id ^ 0xD1B54A32D192ED03ULL));
    return rng;
}

std::uint64_t SeededRng::next_u64() {
    state_ += kWeyl;
    return mix64(state_);
}

double SeededRng::next_uniform() {
    const std::uint64_t bits = next_u64() >> 11; // top 53 bits
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double SeededRng::next_uniform(double a, double b) { return a + (b - a) * next_uniform(); }

double SeededRng::next_normal() { return std_normal_quantile(next_uniform()); }

} // namespace precis
