#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "prw/environment.hpp"
#include "prw/walker.hpp"

namespace prw {

// Monte Carlo estimation over trajectory ensembles. All accumulators are
// integers (displacements, their products, counts), so merging shards is
// exact integer addition: the merged report is bit-identical to a
// single-shard run no matter how the ensemble is partitioned or threaded.
// Per-trajectory seeds come from trajectory_seed(master, index).

struct CheckpointAccumulator {
    std::uint64_t n = 0; // checkpoint horizon

    long long sum_x = 0, sum_y = 0;
    long long sum_xx = 0, sum_yy = 0, sum_xy = 0;
    unsigned __int128 sum_r4 = 0; // sum of (x^2 + y^2)^2 for the MSD error bar
    long long returned = 0;       // walks with first return <= n
    std::array<long long, 4> quadrant{}; // strict quadrant counts (E/N, W/N, W/S, E/S)
    long long on_axis = 0;

    void merge(const CheckpointAccumulator& o);
};

struct EnsembleAccumulator {
    std::uint64_t horizon = 0;
    std::uint64_t ensemble = 0;
    std::uint64_t master_seed = 0;
    std::vector<CheckpointAccumulator> checkpoints;
    std::array<long long, 4> counting{}; // summed counting vectors at the horizon

    void merge(const EnsembleAccumulator& o);
};

/// Checkpoints at powers of two up to the horizon, with the horizon itself
/// appended when it is not a power of two.
std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t horizon);

/// Runs `ensemble` independent walks of length `horizon` from xi and fills
/// every accumulator in one pass. threads = 0 uses the hardware count; the
/// result does not depend on the thread count.
EnsembleAccumulator run_ensemble(const Environment& env, const WalkerState& xi,
                                 std::uint64_t horizon, std::uint64_t ensemble,
                                 std::uint64_t seed, unsigned threads = 0);

struct CheckpointStat {
    std::uint64_t n = 0;
    double return_fraction = 0.0, return_se = 0.0;
    double msd = 0.0, msd_se = 0.0, msd_ratio = 0.0;
    std::array<double, 2> velocity{};    // mean of X_n / n
    std::array<double, 2> velocity_se{};
};

struct StatReport {
    std::uint64_t ensemble = 0;
    std::uint64_t horizon = 0;
    std::uint64_t master_seed = 0;
    std::vector<CheckpointStat> checkpoints;
    std::vector<long long> first_return_histogram; // per checkpoint bucket

    std::array<double, 4> counting_average{}; // C_horizon / (ensemble * horizon)

    // Endpoint diagnostics at the final horizon, for X / sqrt(horizon).
    std::array<double, 2> normalized_mean{};
    double cov_xx = 0.0, cov_yy = 0.0, cov_xy = 0.0;
    std::array<double, 4> quadrant_fraction{};
    double axis_fraction = 0.0;
    std::array<double, 4> gaussian_quadrant_mass{};
    bool noncentered = false;

    const CheckpointStat& final_checkpoint() const { return checkpoints.back(); }
};

StatReport make_report(const EnsembleAccumulator& acc);

/// Return-fraction curve with binomial standard errors.
StatReport return_statistics(const Environment& env, const WalkerState& xi,
                             std::uint64_t horizon, std::uint64_t ensemble, std::uint64_t seed,
                             unsigned threads = 0);

/// E|X_n|^2 estimates and the ratio E|X_n|^2 / n per checkpoint.
StatReport msd_curve(const Environment& env, const WalkerState& xi, std::uint64_t horizon,
                     std::uint64_t ensemble, std::uint64_t seed, unsigned threads = 0);

/// Ensemble mean of X_horizon / horizon with componentwise standard errors.
StatReport velocity_estimate(const Environment& env, const WalkerState& xi,
                             std::uint64_t horizon, std::uint64_t ensemble, std::uint64_t seed,
                             unsigned threads = 0);

/// Covariance of X / sqrt(horizon), quadrant occupation against the fitted
/// Gaussian's quadrant masses, and a flag for a non-centered limit.
StatReport clt_diagnostic(const Environment& env, const WalkerState& xi, std::uint64_t horizon,
                          std::uint64_t ensemble, std::uint64_t seed, unsigned threads = 0);

} // namespace prw
