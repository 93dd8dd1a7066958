#include <doctest.h>

#include <cmath>
#include <set>

#include "prw/dual.hpp"
#include "prw/errors.hpp"
#include "prw/reference_walks.hpp"
#include "prw/rng.hpp"

using namespace prw;

namespace {

const EmbeddingTable& table() {
    static EmbeddingTable t = EmbeddingTable::solve();
    return t;
}

Site random_site(CounterStream& rng, int radius = 50) {
    int span = 2 * radius + 1;
    return {static_cast<int>(rng.next_word() % span) - radius,
            static_cast<int>(rng.next_word() % span) - radius};
}

} // namespace

TEST_SUITE("dual") {

TEST_CASE("levels split states between the two sublattices") {
    CHECK(level(Site{0, 0}, Direction::N) == 0);
    CHECK(level(Site{0, 0}, Direction::E) == 1);
    CHECK(level(Site{1, 0}, Direction::N) == 1);
    CHECK(level(Site{1, 0}, Direction::W) == 0);
    CHECK(level(Site{0, 0}, Direction::S) == 0);
}

TEST_CASE("embedding solves to the pinned anchors") {
    const auto& t = table();
    CHECK(t.to_dual({{0, 0}, Direction::N}) == DualVertex{0, 0, 0});
    CHECK(t.to_dual({{0, 1}, Direction::N}) == DualVertex{1, 1, 1});
    CHECK(t.to_dual({{0, -1}, Direction::S}) == DualVertex{0, 0, 1});

    // full solved base table (uniquely forced by the constraints)
    CHECK(t.base(Parity::Even, Direction::N) == std::array<int, 2>{0, 0});
    CHECK(t.base(Parity::Even, Direction::S) == std::array<int, 2>{1, 1});
    CHECK(t.base(Parity::Even, Direction::E) == std::array<int, 2>{0, 1});
    CHECK(t.base(Parity::Even, Direction::W) == std::array<int, 2>{1, 0});
    CHECK(t.base(Parity::Odd, Direction::E) == std::array<int, 2>{1, 0});
    CHECK(t.base(Parity::Odd, Direction::N) == std::array<int, 2>{1, -1});
    CHECK(t.base(Parity::Odd, Direction::W) == std::array<int, 2>{2, -1});
    CHECK(t.base(Parity::Odd, Direction::S) == std::array<int, 2>{2, 0});
}

TEST_CASE("dual correspondence is a bijection") {
    const auto& t = table();
    CounterStream rng(derive_key(41, 0));
    std::set<DualVertex> seen;
    for (int trial = 0; trial < 10000; ++trial) {
        WalkerState s{random_site(rng), static_cast<Direction>(rng.next_word() % 4)};
        DualVertex z = t.to_dual(s);
        CHECK(t.from_dual(z) == s);
        CHECK((z.z3 == 0 || z.z3 == 1));
        seen.insert(z);
    }
    CHECK_THROWS_AS(table().from_dual({0, 0, 2}), NotInImageError);

    // every vertex of Z^2 x {0,1} in a window is hit exactly once
    std::set<DualVertex> window_hits;
    Box box{-6, 5, -6, 5};
    box.for_each([&](Site x) {
        for (Direction d : all_directions) window_hits.insert(t.to_dual({x, d}));
    });
    CHECK(window_hits.size() == 4u * 12 * 12);
}

TEST_CASE("transition classification") {
    const auto& t = table();
    WalkerState origin{{0, 0}, Direction::N};

    EdgeClass turn = classify_transition(t, origin, {{1, 0}, Direction::E});
    CHECK(turn.part == GraphPart::M1Diag);
    CHECK(turn.move == MoveKind::Turn);

    EdgeClass fwd = classify_transition(t, origin, {{0, 1}, Direction::N});
    CHECK(fwd.part == GraphPart::LPlus);
    CHECK(fwd.move == MoveKind::Forward);

    EdgeClass back = classify_transition(t, origin, {{0, -1}, Direction::S});
    CHECK(back.part == GraphPart::LPlus);
    CHECK(back.move == MoveKind::Backward);

    EdgeClass m2 = classify_transition(t, {{0, 0}, Direction::E}, {{0, 1}, Direction::N});
    CHECK(m2.part == GraphPart::M2Diag);

    CHECK_THROWS_AS(classify_transition(t, origin, {{5, 5}, Direction::N}), NotAdjacentError);
    CHECK_THROWS_AS(classify_transition(t, origin, {{1, 0}, Direction::N}), NotAdjacentError);
}

TEST_CASE("turns preserve the level, forward and backward flip it") {
    Box box{-4, 4, -4, 4};
    box.for_each([&](Site x) {
        for (Direction d : all_directions)
            for (Direction out : all_directions) {
                WalkerState s{x, d}, n{x + out, out};
                RelativeMove mv = move_between(d, out);
                bool flips = mv == RelativeMove::F || mv == RelativeMove::B;
                CHECK((level(n) != level(s)) == flips);
            }
    });
}

TEST_CASE("projection formulas") {
    CHECK(proj_psi({0, 0, 0}) == Site{0, 0});
    CHECK(proj_psi({1, 1, 1}) == Site{0, 0});
    CHECK(proj_psi({2, 0, 1}) == Site{1, -1});

    CHECK(proj_psi_bar({0, 0, 0}) == Site{0, 0});
    CHECK(proj_psi_bar({0, 0, 1}) == Site{1, 1});
    CHECK(proj_psi_bar({2, 2, 1}) == Site{3, 3});

    CHECK(proj_phi({3, 3}) == Site{1, 1});
    CHECK(proj_phi({-1, -1}) == Site{-1, -1});
    CHECK(proj_phi({0, 1}) == Site{0, 0});

    CHECK(proj_phi_bar({0, 0, 0}) == Site{0, 0});
    CHECK(proj_phi_bar({2, 0, 0}) == Site{1, 0});
    CHECK(proj_phi_bar({3, 1, 1}) == Site{1, 0});

    CounterStream rng(derive_key(42, 0));
    for (int trial = 0; trial < 10000; ++trial) {
        DualVertex z{static_cast<int>(rng.next_word() % 201) - 100,
                     static_cast<int>(rng.next_word() % 201) - 100,
                     static_cast<int>(rng.next_word() % 2)};
        CHECK(proj_psi(z) == Site{z.z1 - z.z3, z.z2 - z.z3});
        CHECK(proj_psi_bar(z) == Site{z.z1 + z.z3, z.z2 + z.z3});
        CHECK(proj_phi_bar(z) ==
              Site{static_cast<int>(std::floor(z.z1 / 2.0)),
                   static_cast<int>(std::floor(z.z2 / 2.0))});
    }
}

TEST_CASE("dead time removal") {
    using V = std::vector<Site>;
    Site a{0, 0}, b{1, 0}, c{1, 1};
    CHECK(remove_dead_times(V{a, a, b, b, c}) == V{a, b, c});
    CHECK(remove_dead_times(V{a, b, c}) == V{a, b, c});
    CHECK(remove_dead_times(V{a, a, a}) == V{a});
    CHECK(remove_dead_times(V{}) == V{});

    CounterStream rng(derive_key(43, 0));
    V seq;
    Site cur{0, 0};
    for (int k = 0; k < 500; ++k) {
        if (rng.next_uniform() < 0.6) cur = cur + static_cast<Direction>(rng.next_word() % 4);
        seq.push_back(cur);
    }
    auto cleaned = remove_dead_times(seq);
    for (std::size_t k = 1; k < cleaned.size(); ++k) CHECK(cleaned[k] != cleaned[k - 1]);
}

TEST_CASE("manhattan neighbors") {
    CHECK(manhattan_neighbors({0, 0}) == std::array<Site, 2>{Site{1, 0}, Site{0, 1}});
    CHECK(manhattan_neighbors({1, 1}) == std::array<Site, 2>{Site{0, 1}, Site{1, 0}});
    CHECK(manhattan_neighbors({1, 0}) == std::array<Site, 2>{Site{2, 0}, Site{1, -1}});

    CounterStream rng(derive_key(44, 0));
    for (int trial = 0; trial < 1000; ++trial) {
        Site x = random_site(rng);
        auto nb = manhattan_neighbors(x);
        CHECK(std::abs(nb[0].x1 - x.x1) == 1);
        CHECK(nb[0].x2 == x.x2);
        CHECK(nb[1].x1 == x.x1);
        CHECK(std::abs(nb[1].x2 - x.x2) == 1);
    }
}

TEST_CASE("embedding validates exhaustively over a box") {
    const Environment envs[] = {
        homogeneous_env(TransitionMatrix::standard_walk()),
        flr_env(99, 0.1),
        forward_inhom_env(99, ZetaLaw::uniform(0.2, 0.8)),
        forward_trap_env(99, ZetaLaw::uniform(0.2, 0.8)),
        backward_inhom_env(99, ZetaLaw::constant(0.7), true),
        leftright_env(99, 0.25),
    };
    for (const auto& env : envs) {
        auto violations = validate_embedding(table(), env, Box::centered(5));
        CHECK(violations.empty());
    }
}

TEST_CASE("appendix isomorphism at small horizons") {
    for (int n = 1; n <= 3; ++n) {
        auto manhattan = manhattan_walk_distribution({0, 0}, 2 * n);
        SiteDistribution pushed;
        for (const auto& [x, p] : manhattan) pushed[proj_phi(x)] += p;
        CHECK(total_variation(pushed, simple_walk_distribution({0, 0}, n)) < 1e-12);
    }
}

TEST_CASE("projected trajectories move along the expected lattices") {
    const auto& t = table();

    auto sym = symmetric_leftright_env();
    auto traj = simulate(sym, {{0, 0}, Direction::N}, 500, 5);
    auto path41 = project_walk(t, traj, ProjectionScheme::Prop41);
    CHECK(path41.size() == 501); // no dead times in a pure left-right walk
    for (std::size_t k = 1; k < path41.size(); ++k) {
        auto nb = manhattan_neighbors(path41[k - 1]);
        CHECK((path41[k] == nb[0] || path41[k] == nb[1]));
    }

    auto bwd = backward_inhom_env(11, ZetaLaw::constant(0.4), true);
    auto traj2 = simulate(bwd, {{0, 0}, Direction::N}, 500, 6);
    auto path42 = project_walk(t, traj2, ProjectionScheme::Prop42);
    CHECK(path42.size() > 1);
    for (std::size_t k = 1; k < path42.size(); ++k) {
        Site d = path42[k] - path42[k - 1];
        CHECK(std::abs(d.x1) + std::abs(d.x2) == 1);
    }

    auto lr = leftright_env(17, 0.2);
    auto traj3 = simulate(lr, {{0, 0}, Direction::N}, 500, 7);
    auto path43 = project_walk(t, traj3, ProjectionScheme::Prop43);
    CHECK(path43.size() == 251);
    for (std::size_t k = 1; k < path43.size(); ++k) {
        Site d = path43[k] - path43[k - 1];
        CHECK(std::abs(d.x1) + std::abs(d.x2) == 1);
    }

    // appendix scheme halves both time and space
    auto path_app = project_walk(t, traj, ProjectionScheme::Appendix);
    CHECK(path_app.size() == 251);
}

TEST_CASE("jump law of the dead-time-removed projection") {
    const auto& t = table();
    auto fwd = forward_inhom_env(7, ZetaLaw::constant(0.3));
    WalkerState xi{{0, 0}, Direction::N};
    auto laws = projected_jump_distribution(fwd, t, xi, 3, ProjectionScheme::Prop41);
    Site y0 = proj_psi(t.to_dual(xi));
    for (int m = 0; m <= 3; ++m)
        CHECK(total_variation(laws[m], manhattan_walk_distribution(y0, m)) < 1e-12);

    CHECK_THROWS_AS(projected_jump_distribution(fwd, t, xi, 2, ProjectionScheme::Appendix),
                    BadParameterError);
}

TEST_CASE("horizontal-incoming starts differ in their first projected jump") {
    // The collapsed projection of the backward walk is the simple walk from
    // states over the twin-edge diagonal (vertical incoming); from a
    // horizontal-incoming start the first jump reaches only two directions.
    const auto& t = table();
    auto bwd = backward_inhom_env(11, ZetaLaw::constant(0.4), true);
    WalkerState xi{{0, 0}, Direction::E};
    auto laws = projected_jump_distribution(bwd, t, xi, 2, ProjectionScheme::Prop42);
    Site y0 = proj_phi(proj_psi_bar(t.to_dual(xi)));
    CHECK(laws[1].size() == 2);
    CHECK(total_variation(laws[1], simple_walk_distribution(y0, 1)) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

} // TEST_SUITE
