#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "prw/environment.hpp"
#include "prw/walker.hpp"

namespace prw {

// The dual graph of nearest-neighbor persistent walks: states (x, d) become
// vertices of a graph rendered in Z^2 x {0,1}, where the two levels carry
// the two embedded Manhattan sublattices M1 and M2, turn edges stay inside a
// level and forward/backward edges cross levels. The rendering is recovered
// by constraint search (solve_embedding), not hard-coded.

struct DualVertex {
    int z1 = 0;
    int z2 = 0;
    int z3 = 0; // level, 0 or 1

    friend constexpr bool operator==(const DualVertex&, const DualVertex&) = default;
    friend constexpr bool operator<(const DualVertex& a, const DualVertex& b) {
        if (a.z1 != b.z1) return a.z1 < b.z1;
        if (a.z2 != b.z2) return a.z2 < b.z2;
        return a.z3 < b.z3;
    }
};

/// Which part of the edge partition a transition belongs to.
enum class GraphPart : unsigned char { M1Diag, M2Diag, LPlus, LMinus };
enum class MoveKind : unsigned char { Turn, Forward, Backward };

struct EdgeClass {
    GraphPart part;
    MoveKind move;

    friend constexpr bool operator==(const EdgeClass&, const EdgeClass&) = default;
};

const char* to_string(GraphPart p);
const char* to_string(MoveKind m);

/// Level of a state: 0 (in M1) iff the site parity and the incoming axis
/// agree as (even, vertical) or (odd, horizontal); 1 (in M2) otherwise.
constexpr int level(const Site& x, Direction d) {
    int p = parity_class(x) == Parity::Odd ? 1 : 0;
    int h = is_horizontal(d) ? 1 : 0;
    return p ^ h;
}

constexpr int level(const WalkerState& s) { return level(s.position, s.incoming); }

/// The solved correspondence (x, d) <-> Z^2 x {0,1}. Horizontal base offsets
/// are stored for the 8 classes (site parity x incoming direction) at the
/// representative sites (0,0) and (1,0); all other states follow by
/// equivariance under even translations, z(x+v, d) = z(x, d) + (v1+v2, v2-v1, 0).
class EmbeddingTable {
  public:
    /// Exhaustive search over base offsets in [-4,4]^2 subject to:
    ///   C1  levels as in level();
    ///   C2  even-translation equivariance (built into the parametrization);
    ///   C3  turn transitions displace z by a horizontal unit vector;
    ///   C4  backward transitions displace z by (0,0,+-1), and those out of
    ///       (even, N) and (odd, S) states sit over columns in (2Z)^2;
    ///   C5  forward transitions displace z by (+-1,+-1,+-1), and those out
    ///       of (even, N) / (odd, S) by exactly +-(1,1,1);
    ///   C6  z((0,0), N) = (0,0,0);
    /// plus bijectivity onto Z^2 x {0,1}. Candidates are scanned in
    /// lexicographic order so ties resolve deterministically; failure to
    /// find a solution throws UnsatisfiableError.
    static EmbeddingTable solve();

    DualVertex to_dual(const WalkerState& s) const;

    /// Inverse of to_dual; NotInImageError when z3 is not 0 or 1.
    WalkerState from_dual(const DualVertex& z) const;

    /// Base offset of one of the 8 classes.
    std::array<int, 2> base(Parity p, Direction d) const {
        return base_[class_index(p, d)];
    }

    std::string describe() const;

    static constexpr int class_index(Parity p, Direction d) {
        return (p == Parity::Odd ? 4 : 0) + static_cast<int>(d);
    }

  private:
    std::array<std::array<int, 2>, 8> base_{};
    // (level, z1 mod 2, z2 mod 2) -> class, filled after solving
    std::array<int, 8> coset_class_{};

    void index_cosets();
};

/// Class of the one-step transition s -> t; NotAdjacentError unless
/// t.position == s.position + t.incoming.
EdgeClass classify_transition(const EmbeddingTable& table, const WalkerState& s,
                              const WalkerState& t);

constexpr Site proj_psi(const DualVertex& z) { return {z.z1 - z.z3, z.z2 - z.z3}; }
constexpr Site proj_psi_bar(const DualVertex& z) { return {z.z1 + z.z3, z.z2 + z.z3}; }

constexpr int floor_half(int v) { return v >= 0 ? v / 2 : (v - 1) / 2; }
constexpr Site proj_phi(const Site& x) { return {floor_half(x.x1), floor_half(x.x2)}; }
constexpr Site proj_phi_bar(const DualVertex& z) { return {floor_half(z.z1), floor_half(z.z2)}; }

/// Deletes the times at which the projected walker does not move: collapses
/// every run of equal consecutive sites to its first element.
std::vector<Site> remove_dead_times(const std::vector<Site>& seq);

/// The two outgoing Manhattan-lattice edges at x: horizontal to
/// (x1 + eps(x2), x2) and vertical to (x1, x2 + eps(x1)), where eps(j) is +1
/// for even j and -1 for odd j.
std::array<Site, 2> manhattan_neighbors(const Site& x);

enum class ProjectionScheme : unsigned char { Appendix, Prop41, Prop42, Prop43 };

const char* to_string(ProjectionScheme s);
bool scheme_from_string(const std::string& name, ProjectionScheme& out);

/// Site sequence obtained by projecting a trajectory:
///   Appendix  phi of every second position;
///   Prop41    psi of the dual walk, dead times removed;
///   Prop42    phi(psi-bar) of the dual walk, dead times removed;
///   Prop43    phi-bar of the dual walk at even times.
/// The trajectory is not checked against the scheme's environment family;
/// projecting a mismatched walk yields a meaningless sequence.
std::vector<Site> project_walk(const EmbeddingTable& table, const Trajectory& traj,
                               ProjectionScheme scheme);

using SiteDistribution = std::map<Site, double>;

/// Exact laws of the dead-time-removed projection Y'_0 .. Y'_jumps, by
/// dynamic programming over (state, jumps-so-far). Trajectories are dropped
/// once they complete the requested number of jumps; the DP runs until the
/// remaining active mass is below 1e-14 (at most max_steps transitions, an
/// Error if mass above 1e-12 is still active then).
std::vector<SiteDistribution> projected_jump_distribution(const Environment& env,
                                                          const EmbeddingTable& table,
                                                          const WalkerState& xi, int jumps,
                                                          ProjectionScheme scheme,
                                                          int max_steps = 512);

/// Pushforward of an exact state distribution through a projection.
template <typename F>
SiteDistribution pushforward_states(const StateDistribution& dist, F&& proj) {
    SiteDistribution out;
    for (const auto& [s, p] : dist) out[proj(s)] += p;
    return out;
}

/// Exhaustive check of the embedding against every positive-probability
/// transition with source in `box`; returns human-readable violations
/// (empty means the validation passed).
std::vector<std::string> validate_embedding(const EmbeddingTable& table, const Environment& env,
                                            const Box& box);

} // namespace prw
