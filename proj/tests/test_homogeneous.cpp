#include <doctest.h>

#include <cmath>

#include "prw/errors.hpp"
#include "prw/homogeneous.hpp"
#include "prw/rng.hpp"

using namespace prw;

namespace {

TransitionMatrix random_stochastic(CounterStream& rng) {
    std::array<double, 16> e{};
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += (e[i * 4 + j] = -std::log(1.0 - rng.next_uniform()));
        for (int j = 0; j < 4; ++j) e[i * 4 + j] /= s;
    }
    return TransitionMatrix::from_entries(e);
}

TransitionMatrix random_isotropic(CounterStream& rng) {
    std::array<double, 16> e{};
    e.fill(0.05);
    double rest = 1.0 - 4 * 0.05;
    for (int pick = 0; pick < 3; ++pick) {
        std::array<int, 4> p{0, 1, 2, 3};
        for (int j = 3; j > 0; --j) std::swap(p[j], p[rng.next_word() % (j + 1)]);
        for (int r = 0; r < 4; ++r) e[r * 4 + p[r]] += rest / 3.0;
    }
    return TransitionMatrix::from_entries(e);
}

} // namespace

TEST_SUITE("homogeneous") {

TEST_CASE("ratio expressions") {
    auto lw = lambda_expressions(TransitionMatrix::standard_walk());
    for (const auto& l : lw) {
        REQUIRE(l.is_finite());
        CHECK(l.value == doctest::Approx(1.0).epsilon(1e-12));
    }

    auto lr = lambda_expressions(TransitionMatrix::rank_one({0.4, 0.1, 0.4, 0.1}));
    for (const auto& l : lr) {
        REQUIRE(l.is_finite());
        CHECK(l.value == doctest::Approx(0.25).epsilon(1e-12));
    }

    CounterStream rng(derive_key(21, 0));
    for (int trial = 0; trial < 100; ++trial) {
        auto l = lambda_expressions(random_isotropic(rng));
        for (int i = 1; i < 4; ++i) CHECK(ratio_equal(l[0], l[i]));
    }
}

TEST_CASE("pair from ratio") {
    auto p1 = p_from_lambda(ExtendedRatio::finite(1.0));
    CHECK(p1[0] == doctest::Approx(0.25));
    CHECK(p1[1] == doctest::Approx(0.25));

    auto p2 = p_from_lambda(ExtendedRatio::finite(0.25));
    CHECK(p2[0] == doctest::Approx(0.4));
    CHECK(p2[1] == doctest::Approx(0.1));

    auto p3 = p_from_lambda(ExtendedRatio::infinite());
    CHECK(p3[0] == 0.0);
    CHECK(p3[1] == 0.5);

    CHECK_THROWS_AS(p_from_lambda(ExtendedRatio::indeterminate()), IndeterminateRatioError);
    CHECK_THROWS_AS(p_from_lambda(ExtendedRatio::finite(-0.5)), BadParameterError);
}

TEST_CASE("ratio equality rules") {
    CHECK(ratio_equal(ExtendedRatio::finite(2.0), ExtendedRatio::finite(2.0 + 1e-10)));
    CHECK_FALSE(ratio_equal(ExtendedRatio::finite(2.0), ExtendedRatio::finite(2.001)));
    CHECK(ratio_equal(ExtendedRatio::infinite(), ExtendedRatio::infinite()));
    CHECK_FALSE(ratio_equal(ExtendedRatio::infinite(), ExtendedRatio::finite(1e300)));
    CHECK_FALSE(ratio_equal(ExtendedRatio::indeterminate(), ExtendedRatio::indeterminate()));
}

TEST_CASE("asymptotic velocity") {
    auto vw = asymptotic_velocity(TransitionMatrix::standard_walk());
    CHECK(vw[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(vw[1] == doctest::Approx(0.0).epsilon(1e-12));

    auto vb = asymptotic_velocity(TransitionMatrix::rank_one({0.7, 0.1, 0.1, 0.1}));
    CHECK(vb[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(vb[1] == doctest::Approx(0.0).epsilon(1e-12));

    auto vz = asymptotic_velocity(TransitionMatrix::rank_one({0.4, 0.1, 0.4, 0.1}));
    CHECK(std::abs(vz[0]) < 1e-12);
    CHECK(std::abs(vz[1]) < 1e-12);

    std::array<double, 16> id{};
    id[0] = id[5] = id[10] = id[15] = 1.0;
    CHECK_THROWS_AS(asymptotic_velocity(TransitionMatrix::from_entries(id)), NonPrimitiveError);
}

TEST_CASE("classification verdicts") {
    auto w = classify_homogeneous(TransitionMatrix::standard_walk());
    CHECK(w.classification == WalkClass::RecurrentCLT);
    CHECK(w.lambda_criterion);
    CHECK(w.pi_criterion);

    auto b = classify_homogeneous(TransitionMatrix::rank_one({0.7, 0.1, 0.1, 0.1}));
    CHECK(b.classification == WalkClass::Ballistic);
    REQUIRE(b.velocity);
    CHECK((*b.velocity)[0] == doctest::Approx(0.6));

    CounterStream rng(derive_key(22, 0));
    for (int trial = 0; trial < 50; ++trial) {
        auto v = classify_homogeneous(random_isotropic(rng));
        CHECK(v.classification == WalkClass::RecurrentCLT);
    }

    std::array<double, 16> id{};
    id[0] = id[5] = id[10] = id[15] = 1.0;
    auto inc = classify_homogeneous(TransitionMatrix::from_entries(id));
    CHECK(inc.classification == WalkClass::Inconclusive);
    CHECK_FALSE(inc.pi);
    CHECK_FALSE(inc.velocity);
}

TEST_CASE("criterion equivalences on a random corpus") {
    CounterStream rng(derive_key(23, 0));
    for (int trial = 0; trial < 500; ++trial) {
        TransitionMatrix q = trial % 3 == 0 ? random_isotropic(rng) : random_stochastic(rng);
        if (!is_primitive(q)) continue;
        auto v = classify_homogeneous(q);
        REQUIRE(v.pi);
        const auto& pi = *v.pi;

        bool balanced_form =
            std::abs(pi[0] - pi[2]) <= 1e-9 && std::abs(pi[1] - pi[3]) <= 1e-9;
        CHECK((v.classification == WalkClass::RecurrentCLT) == balanced_form);

        bool any_indeterminate = false;
        for (const auto& l : v.lambdas) any_indeterminate |= l.is_indeterminate();
        if (!any_indeterminate) CHECK(v.lambda_criterion == v.pi_criterion);

        // When the ratio criterion holds with a finite value, the expanded
        // pair must satisfy stationarity.
        if (v.lambda_criterion && v.lambdas[0].is_finite()) {
            auto p = p_from_lambda(v.lambdas[0]);
            std::array<double, 4> cand{p[0], p[1], p[0], p[1]};
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int i = 0; i < 4; ++i) s += cand[i] * q(i, j);
                CHECK(std::abs(s - cand[j]) < 1e-9);
            }
        }
    }
}

} // TEST_SUITE
