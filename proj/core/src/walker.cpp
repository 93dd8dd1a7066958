#include "prw/walker.hpp"

#include <cmath>

#include "prw/errors.hpp"

namespace prw {

std::vector<Site> Trajectory::positions() const {
    std::vector<Site> out;
    out.reserve(steps.size() + 1);
    Site x = initial.position;
    out.push_back(x);
    for (Direction d : steps) {
        x = x + d;
        out.push_back(x);
    }
    return out;
}

std::vector<WalkerState> Trajectory::states() const {
    std::vector<WalkerState> out;
    out.reserve(steps.size() + 1);
    WalkerState s = initial;
    out.push_back(s);
    for (Direction d : steps) {
        s = {s.position + d, d};
        out.push_back(s);
    }
    return out;
}

WalkerState Trajectory::final_state() const {
    WalkerState s = initial;
    for (Direction d : steps) s = {s.position + d, d};
    return s;
}

Direction sample_row(const std::array<double, 4>& row, double u) {
    double c = 0.0;
    for (int k = 0; k < 4; ++k) {
        c += row[k];
        if (u < c && row[k] > 0.0) return static_cast<Direction>(k);
    }
    for (int k = 3; k >= 0; --k)
        if (row[k] > 0.0) return static_cast<Direction>(k);
    throw Error("sample_row: all-zero row");
}

WalkerState step(const Environment& env, const WalkerState& s, double u) {
    Direction d = sample_row(env.row_at(s.position, s.incoming), u);
    return {s.position + d, d};
}

StepSampler::StepSampler(const Environment& env)
    : env_(&env), homogeneous_(env.is_homogeneous()) {
    if (homogeneous_) {
        const TransitionMatrix& q = env.homogeneous_matrix();
        for (int i = 0; i < 4; ++i) {
            double c = 0.0;
            for (int j = 0; j < 4; ++j) {
                double p = q(i, j);
                c += p;
                cdf_[i][j] = c;
                row_zero_[i][j] = p == 0.0;
            }
            cdf_[i][3] = 1.0; // close the top against rounding
        }
    }
}

Trajectory simulate(const Environment& env, const WalkerState& xi, std::uint64_t n,
                    std::uint64_t seed) {
    StepSampler sampler(env);
    Trajectory t;
    t.initial = xi;
    t.steps.reserve(static_cast<std::size_t>(n));
    WalkerState s = xi;
    for (std::uint64_t k = 0; k < n; ++k) {
        s = sampler.advance(s, counter_uniform(seed, k));
        t.steps.push_back(s.incoming);
    }
    return t;
}

std::optional<std::uint64_t> first_return(const Environment& env, const WalkerState& xi,
                                          std::uint64_t horizon, std::uint64_t seed) {
    if (horizon < 1) throw BadParameterError("first_return needs horizon >= 1");
    StepSampler sampler(env);
    WalkerState s = xi;
    for (std::uint64_t k = 0; k < horizon; ++k) {
        s = sampler.advance(s, counter_uniform(seed, k));
        if (s == xi) return k + 1;
    }
    return std::nullopt;
}

std::array<std::uint64_t, 4> counting_vector(const Trajectory& t) {
    std::array<std::uint64_t, 4> c{};
    for (Direction d : t.steps) ++c[static_cast<int>(d)];
    return c;
}

StateDistribution exact_distribution(const Environment& env, const WalkerState& xi,
                                     std::uint64_t n) {
    if (n > kMaxExactHorizon)
        throw HorizonTooLargeError("exact_distribution supports horizons up to " +
                                   std::to_string(kMaxExactHorizon));
    StateDistribution dist;
    dist[xi] = 1.0;
    for (std::uint64_t t = 0; t < n; ++t) {
        StateDistribution next;
        for (const auto& [s, p] : dist) {
            auto row = env.row_at(s.position, s.incoming);
            for (int k = 0; k < 4; ++k) {
                if (row[k] == 0.0) continue;
                auto d = static_cast<Direction>(k);
                next[{s.position + d, d}] += p * row[k];
            }
        }
        dist = std::move(next);
    }
    double mass = 0.0;
    for (const auto& [s, p] : dist) mass += p;
    if (std::abs(mass - 1.0) > 1e-12)
        throw Error("exact_distribution lost probability mass: " + std::to_string(mass));
    return dist;
}

} // namespace prw
