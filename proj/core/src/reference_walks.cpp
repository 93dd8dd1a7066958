#include "prw/reference_walks.hpp"

#include "prw/rng.hpp"

namespace prw {

SiteDistribution manhattan_walk_distribution(const Site& start, int steps) {
    SiteDistribution dist;
    dist[start] = 1.0;
    for (int t = 0; t < steps; ++t) {
        SiteDistribution next;
        for (const auto& [x, p] : dist) {
            auto nb = manhattan_neighbors(x);
            next[nb[0]] += 0.5 * p;
            next[nb[1]] += 0.5 * p;
        }
        dist = std::move(next);
    }
    return dist;
}

SiteDistribution simple_walk_distribution(const Site& start, int steps) {
    SiteDistribution dist;
    dist[start] = 1.0;
    for (int t = 0; t < steps; ++t) {
        SiteDistribution next;
        for (const auto& [x, p] : dist)
            for (Direction d : all_directions) next[x + d] += 0.25 * p;
        dist = std::move(next);
    }
    return dist;
}

double manhattan_return_fraction(const Site& start, std::uint64_t horizon,
                                 std::uint64_t ensemble, std::uint64_t seed) {
    std::uint64_t returned = 0;
    for (std::uint64_t i = 0; i < ensemble; ++i) {
        std::uint64_t key = trajectory_seed(seed, i);
        Site x = start;
        for (std::uint64_t k = 0; k < horizon; ++k) {
            auto nb = manhattan_neighbors(x);
            x = counter_uniform(key, k) < 0.5 ? nb[0] : nb[1];
            if (x == start) {
                ++returned;
                break;
            }
        }
    }
    return static_cast<double>(returned) / static_cast<double>(ensemble);
}

} // namespace prw
