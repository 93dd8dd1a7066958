#include "prw/estimators.hpp"

#include <cmath>
#include <thread>

#include "prw/errors.hpp"
#include "prw/rng.hpp"

namespace prw {

void CheckpointAccumulator::merge(const CheckpointAccumulator& o) {
    sum_x += o.sum_x;
    sum_y += o.sum_y;
    sum_xx += o.sum_xx;
    sum_yy += o.sum_yy;
    sum_xy += o.sum_xy;
    sum_r4 += o.sum_r4;
    returned += o.returned;
    for (int i = 0; i < 4; ++i) quadrant[i] += o.quadrant[i];
    on_axis += o.on_axis;
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& o) {
    for (std::size_t i = 0; i < checkpoints.size(); ++i) checkpoints[i].merge(o.checkpoints[i]);
    for (int i = 0; i < 4; ++i) counting[i] += o.counting[i];
}

std::vector<std::uint64_t> checkpoint_schedule(std::uint64_t horizon) {
    std::vector<std::uint64_t> cps;
    for (std::uint64_t n = 1; n <= horizon; n *= 2) {
        cps.push_back(n);
        if (n > horizon / 2) break;
    }
    if (cps.empty() || cps.back() != horizon) cps.push_back(horizon);
    return cps;
}

namespace {

EnsembleAccumulator empty_accumulator(std::uint64_t horizon, std::uint64_t ensemble,
                                      std::uint64_t seed) {
    EnsembleAccumulator acc;
    acc.horizon = horizon;
    acc.ensemble = ensemble;
    acc.master_seed = seed;
    for (std::uint64_t n : checkpoint_schedule(horizon)) {
        CheckpointAccumulator c;
        c.n = n;
        acc.checkpoints.push_back(c);
    }
    return acc;
}

void record_checkpoint(CheckpointAccumulator& c, int x1, int y1, int x0, int y0, bool returned) {
    long long dx = x1 - x0;
    long long dy = y1 - y0;
    c.sum_x += dx;
    c.sum_y += dy;
    c.sum_xx += dx * dx;
    c.sum_yy += dy * dy;
    c.sum_xy += dx * dy;
    auto r2 = static_cast<unsigned __int128>(dx * dx + dy * dy);
    c.sum_r4 += r2 * r2;
    if (returned) ++c.returned;
    if (dx == 0 || dy == 0)
        ++c.on_axis;
    else if (dx > 0 && dy > 0)
        ++c.quadrant[0];
    else if (dx < 0 && dy > 0)
        ++c.quadrant[1];
    else if (dx < 0 && dy < 0)
        ++c.quadrant[2];
    else
        ++c.quadrant[3];
}

/// Homogeneous inner loop: branchless inverse-CDF on cached row prefixes.
/// The comparison sum skips zero-probability cells by itself (their prefix
/// equals the previous one), so the draw always lands in the support.
void run_range_homogeneous(const TransitionMatrix& q, const WalkerState& xi,
                           std::uint64_t horizon, std::uint64_t begin, std::uint64_t end,
                           std::uint64_t seed, EnsembleAccumulator& acc) {
    // Prefix sums per row; prefixes at and beyond the last positive cell are
    // pinned to 1.0 so rounding can never push a draw into a zero cell.
    double c0[4], c1[4], c2[4];
    for (int i = 0; i < 4; ++i) {
        int last_pos = 0;
        for (int j = 0; j < 4; ++j)
            if (q(i, j) > 0.0) last_pos = j;
        c0[i] = last_pos <= 0 ? 1.0 : q(i, 0);
        c1[i] = last_pos <= 1 ? 1.0 : c0[i] + q(i, 1);
        c2[i] = last_pos <= 2 ? 1.0 : c1[i] + q(i, 2);
    }
    static constexpr int kDx[4] = {1, 0, -1, 0};
    static constexpr int kDy[4] = {0, 1, 0, -1};

    const std::size_t ncp = acc.checkpoints.size();
    const int x0 = xi.position.x1, y0 = xi.position.x2;
    const int d0 = static_cast<int>(xi.incoming);

    for (std::uint64_t i = begin; i < end; ++i) {
        const std::uint64_t key = trajectory_seed(seed, i);
        int x = x0, y = y0, d = d0;
        bool returned = false;
        long long counting[4] = {0, 0, 0, 0};
        std::size_t cp = 0;
        std::uint64_t next_cp = acc.checkpoints[0].n;

        for (std::uint64_t k = 0; k < horizon; ++k) {
            double u = counter_uniform(key, k);
            d = (u >= c0[d]) + (u >= c1[d]) + (u >= c2[d]);
            x += kDx[d];
            y += kDy[d];
            ++counting[d];
            if (!returned && x == x0 && y == y0 && d == d0) returned = true;
            if (k + 1 == next_cp) {
                record_checkpoint(acc.checkpoints[cp], x, y, x0, y0, returned);
                ++cp;
                next_cp = cp < ncp ? acc.checkpoints[cp].n : 0;
            }
        }
        for (int j = 0; j < 4; ++j) acc.counting[j] += counting[j];
    }
}

void run_range(const Environment& env, const WalkerState& xi, std::uint64_t horizon,
               std::uint64_t begin, std::uint64_t end, std::uint64_t seed,
               EnsembleAccumulator& acc) {
    if (env.is_homogeneous()) {
        run_range_homogeneous(env.homogeneous_matrix(), xi, horizon, begin, end, seed, acc);
        return;
    }

    StepSampler sampler(env);
    const std::size_t ncp = acc.checkpoints.size();

    for (std::uint64_t i = begin; i < end; ++i) {
        std::uint64_t key = trajectory_seed(seed, i);
        WalkerState s = xi;
        bool returned = false;
        std::array<long long, 4> counting{};
        std::size_t cp = 0;
        std::uint64_t next_cp = acc.checkpoints[0].n;

        for (std::uint64_t k = 0; k < horizon; ++k) {
            s = sampler.advance(s, counter_uniform(key, k));
            ++counting[static_cast<int>(s.incoming)];
            if (!returned && s == xi) returned = true;
            if (k + 1 == next_cp) {
                record_checkpoint(acc.checkpoints[cp], s.position.x1, s.position.x2,
                                  xi.position.x1, xi.position.x2, returned);
                ++cp;
                next_cp = cp < ncp ? acc.checkpoints[cp].n : 0;
            }
        }
        for (int d = 0; d < 4; ++d) acc.counting[d] += counting[d];
    }
}

} // namespace

EnsembleAccumulator run_ensemble(const Environment& env, const WalkerState& xi,
                                 std::uint64_t horizon, std::uint64_t ensemble,
                                 std::uint64_t seed, unsigned threads) {
    if (horizon < 1 || ensemble < 1)
        throw BadParameterError("ensemble run needs horizon >= 1 and ensemble >= 1");

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::uint64_t>(threads, ensemble));

    EnsembleAccumulator total = empty_accumulator(horizon, ensemble, seed);
    if (threads <= 1) {
        run_range(env, xi, horizon, 0, ensemble, seed, total);
        return total;
    }

    std::vector<EnsembleAccumulator> parts(threads, total);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (ensemble + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        std::uint64_t begin = t * chunk;
        std::uint64_t end = std::min<std::uint64_t>(begin + chunk, ensemble);
        if (begin >= end) break;
        pool.emplace_back([&, t, begin, end] {
            run_range(env, xi, horizon, begin, end, seed, parts[t]);
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& p : parts) total.merge(p);
    return total;
}

namespace {

double binomial_se(double fraction, double n) {
    return std::sqrt(std::max(0.0, fraction * (1.0 - fraction)) / n);
}

} // namespace

StatReport make_report(const EnsembleAccumulator& acc) {
    StatReport r;
    r.ensemble = acc.ensemble;
    r.horizon = acc.horizon;
    r.master_seed = acc.master_seed;

    const auto n_d = static_cast<double>(acc.ensemble);
    long long prev_returned = 0;

    for (const auto& c : acc.checkpoints) {
        CheckpointStat s;
        s.n = c.n;
        const auto cn = static_cast<double>(c.n);

        s.return_fraction = static_cast<double>(c.returned) / n_d;
        s.return_se = binomial_se(s.return_fraction, n_d);

        double mean_r2 = static_cast<double>(c.sum_xx + c.sum_yy) / n_d;
        s.msd = mean_r2;
        s.msd_ratio = mean_r2 / cn;
        double mean_r4 = static_cast<double>(c.sum_r4) / n_d;
        double var_r2 = std::max(0.0, mean_r4 - mean_r2 * mean_r2);
        if (acc.ensemble > 1) var_r2 *= n_d / (n_d - 1.0);
        s.msd_se = std::sqrt(var_r2 / n_d);

        double mx = static_cast<double>(c.sum_x) / n_d;
        double my = static_cast<double>(c.sum_y) / n_d;
        s.velocity = {mx / cn, my / cn};
        double var_x = std::max(0.0, static_cast<double>(c.sum_xx) / n_d - mx * mx);
        double var_y = std::max(0.0, static_cast<double>(c.sum_yy) / n_d - my * my);
        if (acc.ensemble > 1) {
            var_x *= n_d / (n_d - 1.0);
            var_y *= n_d / (n_d - 1.0);
        }
        s.velocity_se = {std::sqrt(var_x / n_d) / cn, std::sqrt(var_y / n_d) / cn};

        r.checkpoints.push_back(s);
        r.first_return_histogram.push_back(c.returned - prev_returned);
        prev_returned = c.returned;
    }

    for (int d = 0; d < 4; ++d)
        r.counting_average[d] = static_cast<double>(acc.counting[d]) /
                                (n_d * static_cast<double>(acc.horizon));

    const auto& fc = acc.checkpoints.back();
    const double h = static_cast<double>(acc.horizon);
    double mx = static_cast<double>(fc.sum_x) / n_d;
    double my = static_cast<double>(fc.sum_y) / n_d;
    r.normalized_mean = {mx / std::sqrt(h), my / std::sqrt(h)};
    r.cov_xx = (static_cast<double>(fc.sum_xx) / n_d - mx * mx) / h;
    r.cov_yy = (static_cast<double>(fc.sum_yy) / n_d - my * my) / h;
    r.cov_xy = (static_cast<double>(fc.sum_xy) / n_d - mx * my) / h;

    for (int i = 0; i < 4; ++i)
        r.quadrant_fraction[i] = static_cast<double>(fc.quadrant[i]) / n_d;
    r.axis_fraction = static_cast<double>(fc.on_axis) / n_d;

    if (r.cov_xx > 0.0 && r.cov_yy > 0.0) {
        double rho = r.cov_xy / std::sqrt(r.cov_xx * r.cov_yy);
        rho = std::clamp(rho, -1.0, 1.0);
        double tilt = std::asin(rho) / (2.0 * std::acos(-1.0));
        r.gaussian_quadrant_mass = {0.25 + tilt, 0.25 - tilt, 0.25 + tilt, 0.25 - tilt};
    }

    double se_x = std::sqrt(std::max(r.cov_xx, 1e-300) / n_d);
    double se_y = std::sqrt(std::max(r.cov_yy, 1e-300) / n_d);
    r.noncentered = std::abs(r.normalized_mean[0]) > 4.0 * se_x ||
                    std::abs(r.normalized_mean[1]) > 4.0 * se_y;
    return r;
}

StatReport return_statistics(const Environment& env, const WalkerState& xi,
                             std::uint64_t horizon, std::uint64_t ensemble, std::uint64_t seed,
                             unsigned threads) {
    return make_report(run_ensemble(env, xi, horizon, ensemble, seed, threads));
}

StatReport msd_curve(const Environment& env, const WalkerState& xi, std::uint64_t horizon,
                     std::uint64_t ensemble, std::uint64_t seed, unsigned threads) {
    return make_report(run_ensemble(env, xi, horizon, ensemble, seed, threads));
}

StatReport velocity_estimate(const Environment& env, const WalkerState& xi,
                             std::uint64_t horizon, std::uint64_t ensemble, std::uint64_t seed,
                             unsigned threads) {
    return make_report(run_ensemble(env, xi, horizon, ensemble, seed, threads));
}

StatReport clt_diagnostic(const Environment& env, const WalkerState& xi, std::uint64_t horizon,
                          std::uint64_t ensemble, std::uint64_t seed, unsigned threads) {
    return make_report(run_ensemble(env, xi, horizon, ensemble, seed, threads));
}

} // namespace prw
