#ifndef RAFU_RNG_HPP
#define RAFU_RNG_HPP

#include <cstdint>
#include <string_view>

namespace rafu {

namespace detail {

// 64-bit FNV-1a, used to derive stream ids from role names.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail

/// Id of a named substream. Streams are keyed by role ("param:<name>",
/// "schedule:alpha", ...) so that adding or reordering parameters never
/// perturbs the draws of the existing ones.
inline std::uint64_t stream_id(std::string_view role) { return detail::fnv1a64(role); }

/// Deterministic uniform generator (splitmix64). A (seed, stream) pair
/// fully determines the sequence; distinct streams are independent for
/// all practical purposes.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : state_(seed ^ detail::mix64(stream + 0x9e3779b97f4a7c15ull)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        return detail::mix64(z);
    }

    /// Uniform draw in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform index in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

} // namespace rafu

#endif
