#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "prw/directions.hpp"
#include "prw/rng.hpp"
#include "prw/transition_matrix.hpp"

namespace prw {

/// Inclusive rectangle of sites.
struct Box {
    int x1_lo = 0, x1_hi = 0, x2_lo = 0, x2_hi = 0;

    static Box centered(int radius) { return {-radius, radius, -radius, radius}; }
    long long site_count() const {
        return static_cast<long long>(x1_hi - x1_lo + 1) * (x2_hi - x2_lo + 1);
    }
    bool contains(const Site& s) const {
        return s.x1 >= x1_lo && s.x1 <= x1_hi && s.x2 >= x2_lo && s.x2 <= x2_hi;
    }
    template <typename F> void for_each(F&& f) const {
        for (int a = x1_lo; a <= x1_hi; ++a)
            for (int b = x2_lo; b <= x2_hi; ++b) f(Site{a, b});
    }
};

enum class EnvKind : unsigned char {
    Homogeneous,
    Flr,
    ForwardInhom,
    ForwardTrap,
    BackwardInhom,
    LeftRight,
    Snapshot,
};

const char* to_string(EnvKind k);
bool env_kind_from_string(const std::string& name, EnvKind& out);

/// Law of the site field zeta: either a constant or uniform on [lo, hi].
struct ZetaLaw {
    double lo = 0.0;
    double hi = 0.0;

    static ZetaLaw constant(double c) { return {c, c}; }
    static ZetaLaw uniform(double lo, double hi) { return {lo, hi}; }

    bool is_constant() const { return lo == hi; }
    double sample(std::uint64_t key, const Site& x, std::uint64_t stream) const {
        if (is_constant()) return lo;
        return lo + (hi - lo) * site_uniform(key, x, stream);
    }
};

using SnapshotTable = std::unordered_map<Site, TransitionMatrix, SiteHash>;

/// A (possibly random) environment: a pure, seeded map from site to
/// transition matrix. Accessors are deterministic functions of
/// (seed, site, parameters) so repeated queries return bit-identical
/// matrices and concurrent use needs no coordination.
class Environment {
  public:
    TransitionMatrix matrix_at(Site x) const;

    /// Single row of matrix_at(x); the sampling hot path uses this to avoid
    /// building the full matrix.
    std::array<double, 4> row_at(Site x, Direction in) const;

    EnvKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    bool is_homogeneous() const { return kind_ == EnvKind::Homogeneous; }
    Site shift_offset() const { return offset_; }

    /// The zeta field backing the forward/backward/left-right families,
    /// including the trap-exclusion adjustment. Meaningful at even sites for
    /// the left-right family. Throws BadParameterError for families without
    /// a zeta field.
    double zeta_at(Site x) const;

    /// Second field of the left-right family.
    double zeta_prime_at(Site x) const;

    double eps() const { return eps_; }
    const ZetaLaw& zeta_law() const { return law_; }
    bool swap_fb() const { return swap_fb_; }
    bool forbid_trap() const { return forbid_trap_; }
    const TransitionMatrix& homogeneous_matrix() const;
    std::shared_ptr<const SnapshotTable> snapshot_table() const { return snapshot_; }

    friend Environment homogeneous_env(const TransitionMatrix& q);
    friend Environment flr_env(std::uint64_t seed, double eps, bool swap_fb);
    friend Environment forward_inhom_env(std::uint64_t seed, const ZetaLaw& law);
    friend Environment forward_trap_env(std::uint64_t seed, const ZetaLaw& law);
    friend Environment backward_inhom_env(std::uint64_t seed, const ZetaLaw& law,
                                          bool forbid_trap);
    friend Environment leftright_env(std::uint64_t seed, double eps);
    friend Environment snapshot_env(std::shared_ptr<const SnapshotTable> table);
    friend Environment shift_env(const Environment& env, Site y);

  private:
    EnvKind kind_ = EnvKind::Homogeneous;
    std::uint64_t seed_ = 0;
    TransitionMatrix homogeneous_q_ = TransitionMatrix::standard_walk();
    double eps_ = 0.0;
    bool swap_fb_ = false;
    ZetaLaw law_{};
    bool forbid_trap_ = false;
    Site offset_{0, 0};
    std::shared_ptr<const SnapshotTable> snapshot_;
};

/// omega_x = q at every site.
Environment homogeneous_env(const TransitionMatrix& q);

/// Per site an i.i.d. triple (zeta, zeta', zeta'') uniform on the simplex
/// {sum = 1, each component >= eps}; rows give probability zeta to Forward,
/// zeta' to Left, zeta'' to Right and zero to Backward (Forward and Backward
/// swapped when swap_fb). Requires 0 < eps <= 1/3. Every matrix is doubly
/// stochastic.
Environment flr_env(std::uint64_t seed, double eps, bool swap_fb = false);

/// Left-right walk with an extra Forward probability zeta_x when entering an
/// even site from the South (incoming N) or an odd site from the North
/// (incoming S). Backward probability is zero everywhere.
Environment forward_inhom_env(std::uint64_t seed, const ZetaLaw& law);

/// Variant in which even sites give Forward probability zeta_x to both
/// vertical incomings and odd sites are purely left-right; its level
/// crossings are one-way.
Environment forward_trap_env(std::uint64_t seed, const ZetaLaw& law);

/// Left-right walk with an extra Backward probability zeta_x at even sites
/// entered from the South and odd sites entered from the North. With
/// forbid_trap, zeta at an odd site is clamped below 1 whenever its even
/// partner has zeta = 1, so no twin-edge pair can trap the walk forever.
Environment backward_inhom_env(std::uint64_t seed, const ZetaLaw& law, bool forbid_trap = false);

/// Random left-right environment: even sites turn with probability 1/2 each
/// way; the four odd neighbors of an even site x carry (zeta_x, zeta'_x)
/// turn probabilities, i.i.d. uniform on [eps, 1-eps]^2. Forward and
/// Backward entries are exactly zero at every site. Requires 0 < eps < 1/2.
Environment leftright_env(std::uint64_t seed, double eps);

/// The symmetric left-right walk (all turns 1/2) as the zeta = 0 member of
/// the forward family.
Environment symmetric_leftright_env();

/// Finite window materialized from a snapshot file; queries outside the
/// stored sites throw OutOfSnapshotError.
Environment snapshot_env(std::shared_ptr<const SnapshotTable> table);

/// (tau_y env)_x = env_{x+y}.
Environment shift_env(const Environment& env, Site y);

/// Expected single-step displacement from (x, d).
std::array<double, 2> local_drift(const Environment& env, Site x, Direction d);

/// (1 / 4|box|) sum over sites and incoming directions of the local drift.
std::array<double, 2> average_drift(const Environment& env, const Box& box);

/// Flags for a single site.
struct SiteAudit {
    Site site{};
    bool stochastic = false;
    bool isotropic = false;
    bool elliptic = false;
    bool toth = false;
    /// 1 - ||omega_x - W|| when doubly stochastic, else 0.
    double toth_margin = 0.0;
};

SiteAudit audit_site(const Environment& env, Site x, double eps_elliptic = 0.01,
                     double eps_toth = 0.01);

/// Per-box audit: stochasticity, isotropy, ellipticity, the deviation-norm
/// condition, and the structural invariants of the environment's family.
struct EnvAuditReport {
    long long sites = 0;
    long long stochastic = 0;
    long long isotropic = 0;
    long long elliptic = 0;
    long long toth = 0;
    double eps_elliptic = 0.0;
    double eps_toth = 0.0;
    /// min over audited doubly stochastic sites of 1 - ||omega_x - W||;
    /// 0 when no site qualifies.
    double min_toth_margin = 0.0;
    long long family_violations = 0;
    std::vector<std::string> violation_samples; // at most a handful, for messages

    bool all_isotropic() const { return isotropic == sites; }
    bool all_toth() const { return toth == sites; }
    bool family_ok() const { return family_violations == 0; }
};

EnvAuditReport audit_env(const Environment& env, const Box& box, double eps_elliptic = 0.01,
                         double eps_toth = 0.01);

} // namespace prw
