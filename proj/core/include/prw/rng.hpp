#pragma once

#include <cstdint>

#include "prw/directions.hpp"

namespace prw {

// Counter-based pseudorandomness. Every draw is a pure function of a key and
// a counter, so environments get O(1) random access over all of Z^2 and
// trajectory sampling is replayable and splittable without shared state.

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer; passes BigCrush as the splitmix64 output stage.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}
} // namespace detail

/// One 64-bit word from (key, counter).
constexpr std::uint64_t counter_word(std::uint64_t key, std::uint64_t counter) {
    return detail::mix64(key + (counter + 1) * detail::kGolden);
}

/// Keyed hash of up to three 64-bit lanes; used to derive subkeys.
constexpr std::uint64_t derive_key(std::uint64_t key, std::uint64_t a, std::uint64_t b = 0,
                                   std::uint64_t c = 0) {
    std::uint64_t h = detail::mix64(key ^ 0x1b873593a5f4d2c1ULL);
    h = detail::mix64(h ^ (a + detail::kGolden));
    h = detail::mix64(h ^ (b + 0xc2b2ae3d27d4eb4fULL));
    h = detail::mix64(h ^ (c + 0x165667b19e3779f9ULL));
    return h;
}

constexpr double unit_double(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

/// Uniform draw in [0,1) from (key, counter).
constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) {
    return unit_double(counter_word(key, counter));
}

inline constexpr std::uint64_t zigzag(int v) {
    auto s = static_cast<std::int64_t>(v);
    return static_cast<std::uint64_t>((s << 1) ^ (s >> 63));
}

/// Site-indexed key for environment fields: pure in (key, site, stream).
constexpr std::uint64_t site_key(std::uint64_t key, const Site& x, std::uint64_t stream) {
    return derive_key(key, zigzag(x.x1), zigzag(x.x2), stream);
}

constexpr double site_uniform(std::uint64_t key, const Site& x, std::uint64_t stream) {
    return unit_double(site_key(key, x, stream));
}

/// Per-trajectory seed in an ensemble; member i of a run keyed by `master`.
constexpr std::uint64_t trajectory_seed(std::uint64_t master, std::uint64_t index) {
    return derive_key(master, index, 0x7261772d74726a65ULL);
}

/// Sequential uniform stream with a counter; cheap enough for the inner
/// sampling loop (one mix64 per draw).
class CounterStream {
  public:
    explicit CounterStream(std::uint64_t key) : key_(key) {}

    double next_uniform() { return counter_uniform(key_, counter_++); }
    std::uint64_t next_word() { return counter_word(key_, counter_++); }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace prw
