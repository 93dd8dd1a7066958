#pragma once

#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>

namespace prw {

/// Absolute lattice directions, in the fixed index order used everywhere
/// (matrices, file formats, CDF sampling).
enum class Direction : std::uint8_t { E = 0, N = 1, W = 2, S = 3 };

/// Directions relative to the walker's incoming direction.
enum class RelativeMove : std::uint8_t { R = 0, F = 1, L = 2, B = 3 };

inline constexpr std::array<Direction, 4> all_directions{Direction::E, Direction::N,
                                                         Direction::W, Direction::S};
inline constexpr std::array<RelativeMove, 4> all_relative_moves{
    RelativeMove::R, RelativeMove::F, RelativeMove::L, RelativeMove::B};

constexpr int dx(Direction d) {
    constexpr std::array<int, 4> v{1, 0, -1, 0};
    return v[static_cast<int>(d)];
}

constexpr int dy(Direction d) {
    constexpr std::array<int, 4> v{0, 1, 0, -1};
    return v[static_cast<int>(d)];
}

constexpr bool is_horizontal(Direction d) { return d == Direction::E || d == Direction::W; }
constexpr bool is_vertical(Direction d) { return !is_horizontal(d); }

constexpr Direction opposite(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 2) % 4);
}

/// d-perp: the direction such that (d, perp(d)) is oriented like (e1, e2),
/// i.e. d rotated by +90 degrees.
constexpr Direction perp(Direction d) {
    return static_cast<Direction>((static_cast<int>(d) + 1) % 4);
}

/// Composition of an incoming direction with a relative move:
/// r(d) = -perp(d), f(d) = d, l(d) = perp(d), b(d) = -d.
constexpr Direction relative_to_absolute(Direction d, RelativeMove m) {
    switch (m) {
    case RelativeMove::R: return opposite(perp(d));
    case RelativeMove::F: return d;
    case RelativeMove::L: return perp(d);
    default:              return opposite(d);
    }
}

/// Inverse of relative_to_absolute in the second argument.
constexpr RelativeMove move_between(Direction in, Direction out) {
    if (out == in) return RelativeMove::F;
    if (out == opposite(in)) return RelativeMove::B;
    if (out == perp(in)) return RelativeMove::L;
    return RelativeMove::R;
}

constexpr char direction_letter(Direction d) {
    constexpr std::array<char, 4> c{'E', 'N', 'W', 'S'};
    return c[static_cast<int>(d)];
}

bool direction_from_letter(char c, Direction& out);

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

/// Lattice site with signed integer coordinates.
struct Site {
    int x1 = 0;
    int x2 = 0;

    friend constexpr bool operator==(const Site&, const Site&) = default;
    friend constexpr bool operator<(const Site& a, const Site& b) {
        return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
    }

    constexpr Site operator+(const Site& o) const { return {x1 + o.x1, x2 + o.x2}; }
    constexpr Site operator-(const Site& o) const { return {x1 - o.x1, x2 - o.x2}; }
    constexpr Site operator-() const { return {-x1, -x2}; }
    constexpr Site operator+(Direction d) const { return {x1 + dx(d), x2 + dy(d)}; }
};

constexpr Parity parity_class(const Site& x) {
    return ((x.x1 + x.x2) % 2 == 0) ? Parity::Even : Parity::Odd;
}

struct SiteHash {
    std::size_t operator()(const Site& s) const {
        std::uint64_t k = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x1)) << 32) |
                          static_cast<std::uint32_t>(s.x2);
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

std::string to_string(const Site& s);

} // namespace prw
