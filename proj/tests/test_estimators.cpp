#include <doctest.h>

#include <cmath>

#include "prw/environment.hpp"
#include "prw/estimators.hpp"
#include "prw/rng.hpp"
#include "prw/spectral.hpp"
#include "prw/walker.hpp"

using namespace prw;

namespace {

Environment w_env() { return homogeneous_env(TransitionMatrix::standard_walk()); }

Environment straight_line_env() {
    return homogeneous_env(TransitionMatrix::from_relative({0.0, 1.0, 0.0, 0.0}));
}

bool accumulators_equal(const EnsembleAccumulator& a, const EnsembleAccumulator& b) {
    if (a.counting != b.counting) return false;
    if (a.checkpoints.size() != b.checkpoints.size()) return false;
    for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        const auto& x = a.checkpoints[i];
        const auto& y = b.checkpoints[i];
        if (x.sum_x != y.sum_x || x.sum_y != y.sum_y || x.sum_xx != y.sum_xx ||
            x.sum_yy != y.sum_yy || x.sum_xy != y.sum_xy || !(x.sum_r4 == y.sum_r4) ||
            x.returned != y.returned || x.quadrant != y.quadrant || x.on_axis != y.on_axis)
            return false;
    }
    return true;
}

} // namespace

TEST_SUITE("estimators") {

TEST_CASE("checkpoint schedule") {
    CHECK(checkpoint_schedule(1) == std::vector<std::uint64_t>{1});
    CHECK(checkpoint_schedule(8) == std::vector<std::uint64_t>{1, 2, 4, 8});
    CHECK(checkpoint_schedule(10) == std::vector<std::uint64_t>{1, 2, 4, 8, 10});
}

TEST_CASE("sharded and threaded runs merge bit-for-bit") {
    auto env = flr_env(123, 0.1);
    WalkerState xi{{0, 0}, Direction::N};
    const std::uint64_t horizon = 256, ensemble = 600;

    auto single = run_ensemble(env, xi, horizon, ensemble, 42, 1);
    auto threaded = run_ensemble(env, xi, horizon, ensemble, 42, 2);
    auto threaded4 = run_ensemble(env, xi, horizon, ensemble, 42, 4);
    CHECK(accumulators_equal(single, threaded));
    CHECK(accumulators_equal(single, threaded4));
}

TEST_CASE("straight-line walks never return") {
    auto rep = return_statistics(straight_line_env(), {{0, 0}, Direction::E}, 1024, 500, 1);
    for (const auto& cp : rep.checkpoints) {
        CHECK(cp.return_fraction == 0.0);
        CHECK(cp.return_se == 0.0);
    }
}

TEST_CASE("standard-walk return fraction at horizon two matches the exact value") {
    auto rep = return_statistics(w_env(), {{0, 0}, Direction::E}, 2, 40000, 7);
    const auto& cp = rep.checkpoints[1];
    REQUIRE(cp.n == 2);
    double p = 1.0 / 16.0;
    CHECK(std::abs(cp.return_fraction - p) <= 4 * std::sqrt(p * (1 - p) / 40000.0));

    // fractions never decrease with the horizon
    auto longer = return_statistics(w_env(), {{0, 0}, Direction::E}, 4096, 2000, 7);
    for (std::size_t i = 1; i < longer.checkpoints.size(); ++i)
        CHECK(longer.checkpoints[i].return_fraction >=
              longer.checkpoints[i - 1].return_fraction);
}

TEST_CASE("mean squared displacement") {
    // one step of any environment has displacement exactly one
    auto one = msd_curve(flr_env(5, 0.1), {{0, 0}, Direction::N}, 1, 200, 3);
    CHECK(one.checkpoints[0].msd == 1.0);

    auto rep = msd_curve(w_env(), {{0, 0}, Direction::E}, 1 << 10, 4000, 11);
    for (const auto& cp : rep.checkpoints)
        if (cp.n >= 64) CHECK(std::abs(cp.msd_ratio - 1.0) < 0.15);

    auto ballistic =
        msd_curve(homogeneous_env(TransitionMatrix::rank_one({0.7, 0.1, 0.1, 0.1})),
                  {{0, 0}, Direction::E}, 1 << 10, 2000, 13);
    CHECK(ballistic.final_checkpoint().msd_ratio > 2.0);
}

TEST_CASE("velocity estimates") {
    auto zero = velocity_estimate(w_env(), {{0, 0}, Direction::E}, 10000, 2000, 17);
    const auto& zc = zero.final_checkpoint();
    CHECK(std::abs(zc.velocity[0]) <= 3 * zc.velocity_se[0]);
    CHECK(std::abs(zc.velocity[1]) <= 3 * zc.velocity_se[1]);

    auto drift = velocity_estimate(homogeneous_env(TransitionMatrix::rank_one({0.7, 0.1, 0.1, 0.1})),
                                   {{0, 0}, Direction::E}, 10000, 2000, 19);
    const auto& dc = drift.final_checkpoint();
    CHECK(std::abs(dc.velocity[0] - 0.6) <= 3 * dc.velocity_se[0]);
    CHECK(std::abs(dc.velocity[1]) <= 3 * dc.velocity_se[1]);

    // the trap variant drifts nowhere in the mean
    auto trap = velocity_estimate(forward_trap_env(3, ZetaLaw::uniform(0.2, 0.8)),
                                  {{0, 0}, Direction::N}, 10000, 2000, 23);
    const auto& tc = trap.final_checkpoint();
    CHECK(std::abs(tc.velocity[0]) <= 4 * tc.velocity_se[0]);
    CHECK(std::abs(tc.velocity[1]) <= 4 * tc.velocity_se[1]);
}

TEST_CASE("clt diagnostics") {
    auto rep = clt_diagnostic(w_env(), {{0, 0}, Direction::E}, 4096, 6000, 29);
    CHECK(std::abs(rep.cov_xx - 0.5) < 0.05);
    CHECK(std::abs(rep.cov_yy - 0.5) < 0.05);
    CHECK(std::abs(rep.cov_xy) < 0.03);
    CHECK_FALSE(rep.noncentered);
    for (double q : rep.quadrant_fraction) CHECK(std::abs(q - 0.25) < 0.03);
    for (double g : rep.gaussian_quadrant_mass) CHECK(std::abs(g - 0.25) < 0.03);

    // isotropic random environment: covariance a multiple of the identity
    auto flr = clt_diagnostic(flr_env(31, 0.1), {{0, 0}, Direction::N}, 4096, 6000, 31);
    CHECK(std::abs(flr.cov_xx - flr.cov_yy) < 0.08);
    CHECK(std::abs(flr.cov_xy) < 0.05);
    CHECK_FALSE(flr.noncentered);

    auto ballistic =
        clt_diagnostic(homogeneous_env(TransitionMatrix::rank_one({0.7, 0.1, 0.1, 0.1})),
                       {{0, 0}, Direction::E}, 4096, 2000, 37);
    CHECK(ballistic.noncentered);
}

TEST_CASE("counting vector averages approach the stationary law") {
    auto q = TransitionMatrix::rank_one({0.4, 0.2, 0.3, 0.1});
    auto pi = stationary_vector(q);
    auto env = homogeneous_env(q);
    auto rep = velocity_estimate(env, {{0, 0}, Direction::E}, 10000, 500, 41);
    for (int d = 0; d < 4; ++d) CHECK(std::abs(rep.counting_average[d] - pi[d]) < 0.005);

    // at horizon 1e5, per-walk visit fractions give the standard error
    const int ensemble = 100;
    const std::uint64_t horizon = 100000;
    std::array<double, 4> mean{}, m2{};
    for (int i = 0; i < ensemble; ++i) {
        auto counts = counting_vector(simulate(env, {{0, 0}, Direction::E}, horizon,
                                               trajectory_seed(616, i)));
        for (int d = 0; d < 4; ++d) {
            double f = static_cast<double>(counts[d]) / static_cast<double>(horizon);
            double delta = f - mean[d];
            mean[d] += delta / (i + 1);
            m2[d] += delta * (f - mean[d]);
        }
    }
    for (int d = 0; d < 4; ++d) {
        double se = std::sqrt(m2[d] / (ensemble - 1) / ensemble);
        CHECK(std::abs(mean[d] - pi[d]) <= 3 * se);
    }
}

TEST_CASE("monte carlo moments match the exact law at desk scale") {
    auto env = w_env();
    WalkerState xi{{0, 0}, Direction::E};

    // exact E|X_n|^2 and E(X^1_n)^2 from the dynamic-programming oracle
    const std::uint64_t n = 8;
    auto exact = exact_distribution(env, xi, n);
    double exact_msd = 0.0, exact_xx = 0.0;
    for (const auto& [s, p] : exact) {
        exact_msd += p * (s.position.x1 * s.position.x1 + s.position.x2 * s.position.x2);
        exact_xx += p * s.position.x1 * s.position.x1;
    }
    CHECK(exact_msd == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    CHECK(exact_xx == doctest::Approx(n / 2.0).epsilon(1e-12));

    const std::uint64_t ensemble = 40000;
    auto rep = msd_curve(env, xi, n, ensemble, 47);
    const auto& cp = rep.final_checkpoint();
    CHECK(std::abs(cp.msd - exact_msd) <= 4 * cp.msd_se);

    // covariance diagnostic against the exact second moment at the same n
    auto clt = clt_diagnostic(env, xi, n, ensemble, 47);
    double se_xx = cp.msd_se / static_cast<double>(n); // conservative scale
    CHECK(std::abs(clt.cov_xx - exact_xx / static_cast<double>(n)) <= 4 * se_xx + 1e-3);
}

TEST_CASE("first return histogram sums to the cumulative count") {
    auto rep = return_statistics(w_env(), {{0, 0}, Direction::E}, 1024, 3000, 43);
    long long total = 0;
    for (long long h : rep.first_return_histogram) total += h;
    CHECK(static_cast<double>(total) / 3000.0 ==
          doctest::Approx(rep.final_checkpoint().return_fraction));
}

} // TEST_SUITE
