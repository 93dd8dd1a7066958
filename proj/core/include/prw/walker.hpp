#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "prw/environment.hpp"
#include "prw/rng.hpp"

namespace prw {

/// Position plus the direction the walker arrived by.
struct WalkerState {
    Site position{0, 0};
    Direction incoming = Direction::E;

    friend constexpr bool operator==(const WalkerState&, const WalkerState&) = default;
    friend constexpr bool operator<(const WalkerState& a, const WalkerState& b) {
        if (a.position.x1 != b.position.x1) return a.position.x1 < b.position.x1;
        if (a.position.x2 != b.position.x2) return a.position.x2 < b.position.x2;
        return a.incoming < b.incoming;
    }
};

struct Trajectory {
    WalkerState initial;
    std::vector<Direction> steps; // D_1 .. D_n

    std::size_t length() const { return steps.size(); }

    /// X_0 .. X_n reconstructed from the steps.
    std::vector<Site> positions() const;

    /// (X_0, D_0) .. (X_n, D_n).
    std::vector<WalkerState> states() const;

    WalkerState final_state() const;
};

/// Inverse-CDF draw from a row in the fixed (E,N,W,S) order. The result is
/// always a direction of positive row probability.
Direction sample_row(const std::array<double, 4>& row, double u);

/// One transition: d' ~ row(env(x), incoming) via inverse CDF, walker moves
/// to (x + d', d'). Deterministic in u, which makes runs replayable.
WalkerState step(const Environment& env, const WalkerState& s, double u);

/// Reusable sampler; caches the row CDFs of homogeneous environments so the
/// inner loop of large ensembles stays cheap.
class StepSampler {
  public:
    explicit StepSampler(const Environment& env);

    WalkerState advance(const WalkerState& s, double u) const {
        if (homogeneous_) {
            const auto& cdf = cdf_[static_cast<int>(s.incoming)];
            int k = 0;
            while (k < 3 && u >= cdf[k]) ++k;
            while (k > 0 && row_zero_[static_cast<int>(s.incoming)][k]) --k; // float-dust guard
            auto d = static_cast<Direction>(k);
            return {s.position + d, d};
        }
        Direction d = sample_row(env_->row_at(s.position, s.incoming), u);
        return {s.position + d, d};
    }

  private:
    const Environment* env_;
    bool homogeneous_;
    std::array<std::array<double, 4>, 4> cdf_{};
    std::array<std::array<bool, 4>, 4> row_zero_{};
};

/// Length-n trajectory from xi; bit-reproducible in (env, xi, n, seed).
Trajectory simulate(const Environment& env, const WalkerState& xi, std::uint64_t n,
                    std::uint64_t seed);

/// Smallest n in [1, horizon] with (X_n, D_n) = xi, if any.
std::optional<std::uint64_t> first_return(const Environment& env, const WalkerState& xi,
                                          std::uint64_t horizon, std::uint64_t seed);

/// Steps taken in each direction; components sum to the trajectory length.
std::array<std::uint64_t, 4> counting_vector(const Trajectory& t);

using StateDistribution = std::map<WalkerState, double>;

inline constexpr std::uint64_t kMaxExactHorizon = 24;

/// Exact forward-propagated state distribution after n steps, by sparse
/// dynamic programming over the transition law. Kept at desk scale
/// (n <= 24, HorizonTooLargeError beyond); total mass is checked to 1e-12.
StateDistribution exact_distribution(const Environment& env, const WalkerState& xi,
                                     std::uint64_t n);

/// Total variation distance between two sparse distributions.
template <typename K>
double total_variation(const std::map<K, double>& a, const std::map<K, double>& b) {
    double tv = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() || ib != b.end()) {
        if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
            tv += std::abs(ia->second);
            ++ia;
        } else if (ia == a.end() || ib->first < ia->first) {
            tv += std::abs(ib->second);
            ++ib;
        } else {
            tv += std::abs(ia->second - ib->second);
            ++ia;
            ++ib;
        }
    }
    return tv / 2.0;
}

} // namespace prw
