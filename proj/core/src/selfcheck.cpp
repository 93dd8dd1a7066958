#include "prw/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "prw/dual.hpp"
#include "prw/environment.hpp"
#include "prw/errors.hpp"
#include "prw/estimators.hpp"
#include "prw/homogeneous.hpp"
#include "prw/reference_walks.hpp"
#include "prw/rng.hpp"
#include "prw/spectral.hpp"
#include "prw/walker.hpp"

namespace prw::selfcheck {

namespace {

using Clock = std::chrono::steady_clock;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string& msg) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << msg;
        }
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

TransitionMatrix remark_exception_matrix() {
    return TransitionMatrix::from_rows({{{0.0, 0.0, 0.0, 1.0},
                                         {0.0, 0.5, 0.5, 0.0},
                                         {1.0, 0.0, 0.0, 0.0},
                                         {0.0, 0.5, 0.5, 0.0}}});
}

TransitionMatrix cyclic_permutation_matrix() {
    // E -> N -> W -> S -> E
    std::array<double, 16> e{};
    e[0 * 4 + 1] = 1.0;
    e[1 * 4 + 2] = 1.0;
    e[2 * 4 + 3] = 1.0;
    e[3 * 4 + 0] = 1.0;
    return TransitionMatrix::from_entries(e);
}

const std::array<std::array<int, 4>, 24>& permutations4() {
    static const std::array<std::array<int, 4>, 24> perms = [] {
        std::array<std::array<int, 4>, 24> out{};
        std::array<int, 4> p{0, 1, 2, 3};
        int i = 0;
        do {
            out[i++] = p;
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return perms;
}

TransitionMatrix permutation_matrix(const std::array<int, 4>& p) {
    std::array<double, 16> e{};
    for (int i = 0; i < 4; ++i) e[i * 4 + p[i]] = 1.0;
    return TransitionMatrix::from_entries(e);
}

/// Convex combination of k random permutation matrices, weights >= min_w.
TransitionMatrix random_birkhoff(CounterStream& rng, int k, double min_w) {
    std::array<double, 16> e{};
    std::vector<double> w(k);
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        w[i] = min_w + rng.next_uniform();
        total += w[i];
    }
    for (int i = 0; i < k; ++i) {
        const auto& p = permutations4()[rng.next_word() % 24];
        for (int r = 0; r < 4; ++r) e[r * 4 + p[r]] += w[i] / total;
    }
    return TransitionMatrix::from_entries(e);
}

/// Sinkhorn normalization of strictly positive random entries.
TransitionMatrix random_sinkhorn(CounterStream& rng) {
    std::array<double, 16> e{};
    for (auto& v : e) v = 0.05 + rng.next_uniform();
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < 4; ++i) {
            double s = e[i * 4] + e[i * 4 + 1] + e[i * 4 + 2] + e[i * 4 + 3];
            for (int j = 0; j < 4; ++j) e[i * 4 + j] /= s;
        }
        double worst = 0.0;
        for (int j = 0; j < 4; ++j) {
            double s = e[j] + e[4 + j] + e[8 + j] + e[12 + j];
            worst = std::max(worst, std::abs(s - 1.0));
            for (int i = 0; i < 4; ++i) e[i * 4 + j] /= s;
        }
        if (worst < 1e-13) break;
    }
    return TransitionMatrix::from_entries(e);
}

TransitionMatrix random_stochastic(CounterStream& rng) {
    std::array<double, 16> e{};
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) {
            double g = -std::log(1.0 - rng.next_uniform());
            e[i * 4 + j] = g;
            s += g;
        }
        for (int j = 0; j < 4; ++j) e[i * 4 + j] /= s;
    }
    return TransitionMatrix::from_entries(e);
}

CriterionResult deviation_norm_suite(const Options&) {
    Check c;
    constexpr double kBoundary = 1e-10;

    auto probe = [&](const TransitionMatrix& q, const char* what) {
        double norm = deviation_norm(q);
        c.require(norm >= -1e-12 && norm <= 1.0 + 1e-12,
                  std::string(what) + ": norm outside [0,1]: " + fmt(norm));
        bool strictly_less = norm < 1.0 - kBoundary;
        bool primitive = is_primitive(q.transpose().multiply(q));
        c.require(strictly_less == primitive,
                  std::string(what) + ": norm<1 vs primitivity of Q^T Q disagree (norm " +
                      fmt(norm) + ")");
    };

    CounterStream rng(derive_key(20260808, 1));
    long done = 0;
    for (int i = 0; i < 8000; ++i, ++done) probe(random_sinkhorn(rng), "sinkhorn");
    for (int i = 0; i < 2000; ++i, ++done) probe(random_birkhoff(rng, 2 + i % 3, 0.05), "birkhoff");
    for (const auto& p : permutations4()) {
        probe(permutation_matrix(p), "permutation");
        ++done;
    }
    probe(cyclic_permutation_matrix(), "cyclic");
    probe(TransitionMatrix::standard_walk(), "W");
    done += 2;

    double exception_norm = deviation_norm(remark_exception_matrix());
    c.require(std::abs(exception_norm - 1.0) <= kBoundary,
              "exception matrix norm " + fmt(exception_norm) + " != 1");
    c.require(deviation_norm(TransitionMatrix::standard_walk()) == 0.0, "norm(W) != 0");

    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? std::to_string(done) + " matrices, norm in [0,1], equivalence exact, "
                          "exception norm " + fmt(exception_norm)
                    : c.detail.str();
    return r;
}

TransitionMatrix random_balanced(CounterStream& rng) {
    double p1 = 0.05 + 0.4 * rng.next_uniform();
    return TransitionMatrix::rank_one({p1, 0.5 - p1, p1, 0.5 - p1});
}

CriterionResult homogeneous_classification_suite(const Options& opts) {
    Check c;

    // Part (a): ratio criterion vs stationary-form criterion, 1000 matrices.
    CounterStream rng(derive_key(20260808, 2));
    int disagreements = 0;
    for (int i = 0; i < 1000; ++i) {
        TransitionMatrix q = i % 5 == 3   ? random_birkhoff(rng, 3, 0.2)
                             : i % 5 == 4 ? random_balanced(rng)
                                          : random_stochastic(rng);
        if (!is_primitive(q)) continue;
        auto v = classify_homogeneous(q);
        bool indeterminate = false;
        for (const auto& l : v.lambdas) indeterminate |= l.is_indeterminate();
        if (indeterminate) continue;
        if (v.lambda_criterion != v.pi_criterion) ++disagreements;
    }
    c.require(disagreements == 0, std::to_string(disagreements) + " criterion disagreements");

    // Part (b): 20 zero-velocity matrices, MC velocity within 3 SE of 0.
    const std::uint64_t horizon = 100000, ensemble = 10000;
    WalkerState origin{{0, 0}, Direction::E};
    CounterStream mrng(derive_key(20260808, 3));
    double worst_z = 0.0;
    for (int i = 0; i < 20; ++i) {
        TransitionMatrix q = random_birkhoff(mrng, 3, 0.3);
        // Blend with W to keep a safe spectral gap and primitivity.
        std::array<double, 16> e{};
        for (int k = 0; k < 16; ++k) e[k] = 0.75 * q.entries()[k] + 0.25 * 0.25;
        q = TransitionMatrix::from_entries(e);

        auto rep = velocity_estimate(homogeneous_env(q), origin, horizon, ensemble,
                                     derive_key(777101, i), opts.threads);
        const auto& f = rep.final_checkpoint();
        for (int comp = 0; comp < 2; ++comp) {
            double z = std::abs(f.velocity[comp]) / f.velocity_se[comp];
            worst_z = std::max(worst_z, z);
            c.require(std::abs(f.velocity[comp]) <= 3.0 * f.velocity_se[comp],
                      "balanced matrix " + std::to_string(i) + ": velocity component " +
                          std::to_string(comp) + " off zero by " + fmt(z) + " SE");
        }
    }

    // Part (c): 20 ballistic matrices, empirical X_n/n within 3 SE of exact V.
    for (int i = 0; i < 20; ++i) {
        TransitionMatrix q = random_stochastic(mrng);
        auto vel = asymptotic_velocity(q);
        while (std::max(std::abs(vel[0]), std::abs(vel[1])) < 0.05) {
            q = random_stochastic(mrng);
            vel = asymptotic_velocity(q);
        }
        auto rep = velocity_estimate(homogeneous_env(q), origin, horizon, ensemble,
                                     derive_key(777002, i), opts.threads);
        const auto& f = rep.final_checkpoint();
        for (int comp = 0; comp < 2; ++comp) {
            double z = std::abs(f.velocity[comp] - vel[comp]) / f.velocity_se[comp];
            worst_z = std::max(worst_z, z);
            c.require(z <= 3.0, "ballistic matrix " + std::to_string(i) + ": component " +
                                    std::to_string(comp) + " off exact V by " + fmt(z) + " SE");
        }
    }

    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "0 disagreements in 1000; 40 MC velocities within 3 SE (worst " +
                          fmt(worst_z) + ")"
                    : c.detail.str();
    return r;
}

CriterionResult isotropy_corollary(const Options&) {
    Check c;
    Box box{-10, 9, -10, 9};

    Environment flr = flr_env(424242, 0.05);
    double min_margin = 1.0;
    box.for_each([&](Site x) {
        TransitionMatrix m = flr.matrix_at(x);
        c.require(is_isotropic(m), "flr site " + to_string(x) + " not isotropic");
        // the mechanism: no column holds two zeros, forcing a strict bound
        c.require(remark_sufficient_conditions(m).no_column_two_zeros,
                  "flr site " + to_string(x) + " misses the column-zeros condition");
        double margin = 1.0 - deviation_norm(m);
        min_margin = std::min(min_margin, margin);
        c.require(margin > 0.0 && toth_condition(m, margin / 2.0),
                  "flr site " + to_string(x) + " fails the norm condition");
    });

    Environment lr = leftright_env(424242, 0.2);
    box.for_each([&](Site x) {
        c.require(!toth_condition(lr.matrix_at(x), 1e-6),
                  "leftright site " + to_string(x) + " unexpectedly passes");
    });

    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "400 flr sites isotropic with margin >= " + fmt(min_margin) +
                          "; 400 leftright sites all fail"
                    : c.detail.str();
    return r;
}

std::vector<Environment> validation_environments() {
    return {
        homogeneous_env(TransitionMatrix::standard_walk()),
        flr_env(99, 0.1),
        forward_inhom_env(99, ZetaLaw::uniform(0.2, 0.8)),
        forward_trap_env(99, ZetaLaw::uniform(0.2, 0.8)),
        backward_inhom_env(99, ZetaLaw::constant(0.7), true),
        leftright_env(99, 0.25),
    };
}

CriterionResult embedding_validation(const Options&) {
    Check c;
    EmbeddingTable table = EmbeddingTable::solve();
    Box box{-10, 9, -10, 9};
    long long transitions = 0;
    for (const Environment& env : validation_environments()) {
        auto violations = validate_embedding(table, env, box);
        for (const auto& v : violations) c.require(false, std::string(to_string(env.kind())) + ": " + v);
        box.for_each([&](Site x) {
            for (Direction d : all_directions) {
                auto row = env.row_at(x, d);
                for (double p : row)
                    if (p > 0.0) ++transitions;
            }
        });
    }
    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "embedding solved; " + std::to_string(transitions) +
                          " transitions across 6 environments, zero violations"
                    : c.detail.str();
    return r;
}

CriterionResult appendix_isomorphism(const Options&) {
    Check c;
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
        SiteDistribution manhattan = manhattan_walk_distribution({0, 0}, 2 * n);
        SiteDistribution pushed;
        for (const auto& [x, p] : manhattan) pushed[proj_phi(x)] += p;
        SiteDistribution simple = simple_walk_distribution({0, 0}, n);
        double tv = total_variation(pushed, simple);
        worst = std::max(worst, tv);
        c.require(tv < 1e-12, "n=" + std::to_string(n) + ": TV " + fmt(tv));
    }
    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "TV <= " + fmt(worst) + " for n=1..4" : c.detail.str();
    return r;
}

CriterionResult prop41_projection(const Options&) {
    Check c;
    EmbeddingTable table = EmbeddingTable::solve();
    const std::vector<WalkerState> starts{
        {{0, 0}, Direction::N}, {{1, 0}, Direction::E}, {{0, 1}, Direction::N},
        {{2, 1}, Direction::W},
    };
    double worst = 0.0;
    for (const Environment& env :
         {symmetric_leftright_env(), forward_inhom_env(7, ZetaLaw::constant(0.3))}) {
        for (const auto& xi : starts) {
            auto laws = projected_jump_distribution(env, table, xi, 6, ProjectionScheme::Prop41);
            Site y0 = proj_psi(table.to_dual(xi));
            for (int m = 0; m <= 6; ++m) {
                double tv = total_variation(laws[m], manhattan_walk_distribution(y0, m));
                worst = std::max(worst, tv);
                c.require(tv < 1e-12, std::string(to_string(env.kind())) + " from " + to_string(xi.position) +
                                          " m=" + std::to_string(m) + ": TV " + fmt(tv));
            }
        }
    }
    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "8 start/environment pairs, k<=6, TV <= " + fmt(worst) : c.detail.str();
    return r;
}

CriterionResult prop42_projection(const Options&) {
    Check c;
    EmbeddingTable table = EmbeddingTable::solve();
    Environment env = backward_inhom_env(11, ZetaLaw::constant(0.4), true);
    // Starts with a vertical incoming direction: their dual columns lie on
    // the twin-edge diagonal of a 2x2 projection block, where the collapsed
    // walk is exactly the simple walk (horizontal-incoming starts differ in
    // their first jump only).
    const std::vector<WalkerState> starts{
        {{0, 0}, Direction::N}, {{1, 0}, Direction::S}, {{2, -2}, Direction::S},
        {{-1, 1}, Direction::N},
    };
    double worst = 0.0;
    for (const auto& xi : starts) {
        auto laws = projected_jump_distribution(env, table, xi, 6, ProjectionScheme::Prop42);
        Site y0 = proj_phi(proj_psi_bar(table.to_dual(xi)));
        for (int m = 0; m <= 6; ++m) {
            double tv = total_variation(laws[m], simple_walk_distribution(y0, m));
            worst = std::max(worst, tv);
            c.require(tv < 1e-12, "start " + to_string(xi.position) + " m=" + std::to_string(m) +
                                      ": TV " + fmt(tv));
        }
    }
    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "4 starts, k<=6, TV <= " + fmt(worst) : c.detail.str();
    return r;
}

CriterionResult prop43_identity(const Options&) {
    Check c;
    EmbeddingTable table = EmbeddingTable::solve();
    Environment env = leftright_env(31337, 0.2);
    const double eps = 0.2;
    Box box{-5, 4, -5, 4};
    double worst = 0.0;
    box.for_each([&](Site x) {
        if (parity_class(x) != Parity::Even) return;
        double zeta = env.zeta_at(x);
        for (Direction d : {Direction::N, Direction::S}) {
            WalkerState xi{x, d};
            Site y0 = proj_phi_bar(table.to_dual(xi));
            auto two = exact_distribution(env, xi, 2);
            SiteDistribution projected = pushforward_states(
                two, [&](const WalkerState& s) { return proj_phi_bar(table.to_dual(s)); });

            SiteDistribution expect;
            expect[y0 + Direction::E] = zeta / 2.0;
            expect[y0 + Direction::N] = (1.0 - zeta) / 2.0;
            expect[y0 + Direction::W] = zeta / 2.0;
            expect[y0 + Direction::S] = (1.0 - zeta) / 2.0;

            double tv = total_variation(projected, expect);
            worst = std::max(worst, tv);
            c.require(tv < 1e-12, "site " + to_string(x) + ": TV " + fmt(tv));

            // Balanced and elliptic with eps/2.
            auto at = [&](Direction dd) {
                auto it = projected.find(y0 + dd);
                return it == projected.end() ? 0.0 : it->second;
            };
            c.require(std::abs(at(Direction::E) - at(Direction::W)) < 1e-12 &&
                          std::abs(at(Direction::N) - at(Direction::S)) < 1e-12,
                      "projected step not balanced at " + to_string(x));
            for (Direction dd : all_directions)
                c.require(at(dd) >= eps / 2.0 - 1e-12,
                          "projected step not (eps/2)-elliptic at " + to_string(x));
        }
    });
    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "50 even sites x 2 incomings, TV <= " + fmt(worst) : c.detail.str();
    return r;
}

CriterionResult forward_trap_structure(const Options& opts) {
    Check c;
    Environment env = forward_trap_env(5150, ZetaLaw::uniform(0.3, 0.9));
    EmbeddingTable table = EmbeddingTable::solve();

    // Exhaustive effective-edge classification over a 20x20 box.
    Box box{-10, 9, -10, 9};
    long long lplus_forward = 0, lminus = 0;
    box.for_each([&](Site x) {
        for (Direction d : all_directions) {
            WalkerState s{x, d};
            auto row = env.row_at(x, d);
            for (int k = 0; k < 4; ++k) {
                if (row[k] == 0.0) continue;
                auto out = static_cast<Direction>(k);
                EdgeClass cls = classify_transition(table, s, {x + out, out});
                if (cls.part == GraphPart::LPlus && cls.move == MoveKind::Forward)
                    ++lplus_forward;
                if (cls.part == GraphPart::LMinus) ++lminus;
            }
        }
    });
    c.require(lplus_forward > 0, "no effective L+ forward edges found");
    c.require(lminus == 0, std::to_string(lminus) + " effective L- edges found");

    // Walks from M1 never revisit the start after the first L+ crossing.
    const std::uint64_t horizon = 10000, ensemble = 10000;
    WalkerState m1_start{{0, 0}, Direction::N};
    StepSampler sampler(env);
    long long violations = 0;
    for (std::uint64_t i = 0; i < ensemble; ++i) {
        std::uint64_t key = trajectory_seed(4141, i);
        WalkerState s = m1_start;
        bool crossed = false;
        for (std::uint64_t k = 0; k < horizon; ++k) {
            s = sampler.advance(s, counter_uniform(key, k));
            if (!crossed && level(s) == 1) crossed = true;
            if (crossed && s == m1_start) ++violations;
        }
    }
    c.require(violations == 0,
              std::to_string(violations) + " revisits of the M1 start after crossing");

    // Walks from M2 are the standard Manhattan walk on their projected
    // image: nondecreasing return curve within 0.05 of the Manhattan oracle
    // started at the same vertex.
    WalkerState m2_start{{0, 0}, Direction::E};
    auto rep = return_statistics(env, m2_start, horizon, ensemble, 4242, opts.threads);
    for (std::size_t i = 1; i < rep.checkpoints.size(); ++i)
        c.require(rep.checkpoints[i].return_fraction >= rep.checkpoints[i - 1].return_fraction,
                  "return curve decreases");
    double reference =
        manhattan_return_fraction(proj_psi(table.to_dual(m2_start)), horizon, ensemble, 4343);
    double got = rep.final_checkpoint().return_fraction;
    c.require(got > reference - 0.05, "M2 return fraction " + fmt(got) +
                                          " not above Manhattan reference " + fmt(reference) +
                                          " - 0.05");

    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? std::to_string(lplus_forward) + " L+ forward edges, 0 L-; 0/10^4 revisits; "
                          "M2 return " + fmt(got) + " vs reference " + fmt(reference)
                    : c.detail.str();
    return r;
}

CriterionResult diffusivity_bands(const Options& opts) {
    Check c;
    WalkerState origin{{0, 0}, Direction::E};
    const std::uint64_t ensemble = 10000;
    const std::uint64_t horizon = 1 << 14;

    auto band_check = [&](const Environment& env, const char* name, std::uint64_t seed) {
        auto rep = msd_curve(env, origin, horizon, ensemble, seed, opts.threads);
        double lo = 10.0, hi = 0.0;
        for (const auto& cp : rep.checkpoints) {
            if (cp.n < (1u << 7)) continue;
            lo = std::min(lo, cp.msd_ratio);
            hi = std::max(hi, cp.msd_ratio);
            c.require(cp.msd_ratio >= 0.5 && cp.msd_ratio <= 2.0,
                      std::string(name) + ": ratio " + fmt(cp.msd_ratio) + " at n=" +
                          std::to_string(cp.n) + " outside [0.5, 2]");
        }
        return std::pair{lo, hi};
    };

    auto w_band = band_check(homogeneous_env(TransitionMatrix::standard_walk()), "W", 9001);
    auto lr_band = band_check(symmetric_leftright_env(), "leftright", 9002);

    Environment ballistic = homogeneous_env(TransitionMatrix::rank_one({0.7, 0.1, 0.1, 0.1}));
    auto rep = msd_curve(ballistic, origin, 1 << 10, ensemble, 9003, opts.threads);
    double exit_ratio = rep.final_checkpoint().msd_ratio;
    c.require(exit_ratio > 2.0, "ballistic ratio " + fmt(exit_ratio) + " still inside the band");

    CriterionResult r;
    r.passed = c.ok;
    r.detail = c.ok ? "W ratio in [" + fmt(w_band.first) + ", " + fmt(w_band.second) +
                          "], leftright in [" + fmt(lr_band.first) + ", " + fmt(lr_band.second) +
                          "], ballistic exits at " + fmt(exit_ratio)
                    : c.detail.str();
    return r;
}

struct Entry {
    int id;
    const char* name;
    CriterionResult (*fn)(const Options&);
};

constexpr Entry kCriteria[] = {
    {1, "deviation-norm-suite", deviation_norm_suite},
    {2, "homogeneous-classification", homogeneous_classification_suite},
    {3, "isotropy-corollary", isotropy_corollary},
    {4, "embedding-validation", embedding_validation},
    {5, "appendix-isomorphism", appendix_isomorphism},
    {6, "prop41-projection", prop41_projection},
    {7, "prop42-projection", prop42_projection},
    {8, "prop43-identity", prop43_identity},
    {9, "forward-trap-structure", forward_trap_structure},
    {10, "diffusivity-bands", diffusivity_bands},
};

} // namespace

CriterionResult run_criterion(int id, const Options& opts) {
    for (const auto& entry : kCriteria) {
        if (entry.id != id) continue;
        auto start = Clock::now();
        CriterionResult r;
        try {
            r = entry.fn(opts);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.id = entry.id;
        r.name = entry.name;
        r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return r;
    }
    throw BadParameterError("no acceptance criterion with id " + std::to_string(id));
}

std::vector<CriterionResult> run_all(const Options& opts) {
    std::vector<CriterionResult> out;
    for (const auto& entry : kCriteria) {
        if (!opts.only.empty() &&
            std::find(opts.only.begin(), opts.only.end(), entry.id) == opts.only.end())
            continue;
        out.push_back(run_criterion(entry.id, opts));
    }
    return out;
}

std::string format_result_line(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name << " (";
    os.precision(3);
    os << std::fixed << r.seconds << "s): " << r.detail;
    return os.str();
}

} // namespace prw::selfcheck
