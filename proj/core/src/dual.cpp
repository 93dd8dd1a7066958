#include "prw/dual.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "prw/errors.hpp"

namespace prw {

namespace {

constexpr int kOffsetBound = 4; // base offsets searched in [-4,4]^2

int mod2(int v) { return v & 1; }

Site even_representative(const Site& x, Parity p) {
    return p == Parity::Odd ? Site{x.x1 - 1, x.x2} : x;
}

std::array<int, 2> even_translation(const Site& v) { return {v.x1 + v.x2, v.x2 - v.x1}; }

struct PartialTable {
    std::array<std::array<int, 2>, 8> base{};
    std::array<bool, 8> assigned{};

    DualVertex z_of(const WalkerState& s) const {
        Parity p = parity_class(s.position);
        int idx = EmbeddingTable::class_index(p, s.incoming);
        Site rep = even_representative(s.position, p);
        auto t = even_translation(rep);
        return {base[idx][0] + t[0], base[idx][1] + t[1], level(s)};
    }

    bool has(const WalkerState& s) const {
        return assigned[EmbeddingTable::class_index(parity_class(s.position), s.incoming)];
    }
};

/// States whose forward/backward moves are the effective level crossings
/// in the one-way and twin-edge families: even sites entered from the
/// South, odd sites entered from the North.
bool is_effective_class(const WalkerState& s) {
    Parity p = parity_class(s.position);
    return (p == Parity::Even && s.incoming == Direction::N) ||
           (p == Parity::Odd && s.incoming == Direction::S);
}

bool transition_geometry_ok(const PartialTable& t, const WalkerState& s, const WalkerState& n) {
    DualVertex a = t.z_of(s);
    DualVertex b = t.z_of(n);
    int d1 = b.z1 - a.z1, d2 = b.z2 - a.z2, d3 = b.z3 - a.z3;
    switch (move_between(s.incoming, n.incoming)) {
    case RelativeMove::L:
    case RelativeMove::R:
        return d3 == 0 && std::abs(d1) + std::abs(d2) == 1;
    case RelativeMove::F:
        if (std::abs(d1) != 1 || std::abs(d2) != 1 || std::abs(d3) != 1) return false;
        if (is_effective_class(s)) return d1 == d2 && d2 == d3;
        return true;
    default: // Backward
        if (d1 != 0 || d2 != 0 || std::abs(d3) != 1) return false;
        if (is_effective_class(s)) return mod2(a.z1) == 0 && mod2(a.z2) == 0;
        return true;
    }
}

/// Checks every transition whose two endpoint classes are assigned, with
/// sources in a small box; the constraints are translation-covariant so a
/// small box exercises every class pair.
bool partial_consistent(const PartialTable& t) {
    for (int x1 = -2; x1 <= 2; ++x1)
        for (int x2 = -2; x2 <= 2; ++x2)
            for (Direction d : all_directions) {
                WalkerState s{{x1, x2}, d};
                if (!t.has(s)) continue;
                for (Direction out : all_directions) {
                    WalkerState n{s.position + out, out};
                    if (!t.has(n)) continue;
                    if (!transition_geometry_ok(t, s, n)) return false;
                }
            }
    return true;
}

bool bijective_cosets(const PartialTable& t) {
    std::array<bool, 8> seen{};
    for (Parity p : {Parity::Even, Parity::Odd})
        for (Direction d : all_directions) {
            int idx = EmbeddingTable::class_index(p, d);
            int lvl = level(Site{p == Parity::Odd ? 1 : 0, 0}, d);
            int key = lvl * 4 + mod2(t.base[idx][0] + 64) * 2 + mod2(t.base[idx][1] + 64);
            if (seen[key]) return false;
            seen[key] = true;
        }
    return true;
}

bool solve_rec(PartialTable& t, const std::vector<int>& order, std::size_t depth) {
    if (depth == order.size()) return bijective_cosets(t);
    int idx = order[depth];
    for (int b1 = -kOffsetBound; b1 <= kOffsetBound; ++b1)
        for (int b2 = -kOffsetBound; b2 <= kOffsetBound; ++b2) {
            t.base[idx] = {b1, b2};
            t.assigned[idx] = true;
            if (partial_consistent(t) && solve_rec(t, order, depth + 1)) return true;
            t.assigned[idx] = false;
        }
    return false;
}

} // namespace

const char* to_string(GraphPart p) {
    switch (p) {
    case GraphPart::M1Diag: return "M1";
    case GraphPart::M2Diag: return "M2";
    case GraphPart::LPlus: return "L+";
    default: return "L-";
    }
}

const char* to_string(MoveKind m) {
    switch (m) {
    case MoveKind::Turn: return "turn";
    case MoveKind::Forward: return "forward";
    default: return "backward";
    }
}

const char* to_string(ProjectionScheme s) {
    switch (s) {
    case ProjectionScheme::Appendix: return "appendix";
    case ProjectionScheme::Prop41: return "prop41";
    case ProjectionScheme::Prop42: return "prop42";
    default: return "prop43";
    }
}

bool scheme_from_string(const std::string& name, ProjectionScheme& out) {
    for (ProjectionScheme s : {ProjectionScheme::Appendix, ProjectionScheme::Prop41,
                               ProjectionScheme::Prop42, ProjectionScheme::Prop43})
        if (name == to_string(s)) {
            out = s;
            return true;
        }
    return false;
}

EmbeddingTable EmbeddingTable::solve() {
    PartialTable t;
    // Anchor: z((0,0), N) = (0,0,0).
    int anchor = class_index(Parity::Even, Direction::N);
    t.base[anchor] = {0, 0};
    t.assigned[anchor] = true;

    // Remaining classes ordered so each is pinned by transitions to the
    // classes before it.
    std::vector<int> order{
        class_index(Parity::Odd, Direction::N),  class_index(Parity::Odd, Direction::S),
        class_index(Parity::Even, Direction::S), class_index(Parity::Odd, Direction::E),
        class_index(Parity::Odd, Direction::W),  class_index(Parity::Even, Direction::E),
        class_index(Parity::Even, Direction::W),
    };

    if (!solve_rec(t, order, 0))
        throw UnsatisfiableError("no embedding satisfies the geometric constraints");

    EmbeddingTable table;
    table.base_ = t.base;
    table.index_cosets();
    return table;
}

void EmbeddingTable::index_cosets() {
    coset_class_.fill(-1);
    for (Parity p : {Parity::Even, Parity::Odd})
        for (Direction d : all_directions) {
            int idx = class_index(p, d);
            int lvl = level(Site{p == Parity::Odd ? 1 : 0, 0}, d);
            int key = lvl * 4 + mod2(base_[idx][0] + 64) * 2 + mod2(base_[idx][1] + 64);
            coset_class_[key] = idx;
        }
}

DualVertex EmbeddingTable::to_dual(const WalkerState& s) const {
    Parity p = parity_class(s.position);
    int idx = class_index(p, s.incoming);
    Site rep = even_representative(s.position, p);
    auto t = even_translation(rep);
    return {base_[idx][0] + t[0], base_[idx][1] + t[1], level(s)};
}

WalkerState EmbeddingTable::from_dual(const DualVertex& z) const {
    if (z.z3 != 0 && z.z3 != 1)
        throw NotInImageError("dual vertex level must be 0 or 1");
    int key = z.z3 * 4 + mod2(z.z1 + 64) * 2 + mod2(z.z2 + 64);
    int idx = coset_class_[key];
    Parity p = idx >= 4 ? Parity::Odd : Parity::Even;
    auto d = static_cast<Direction>(idx % 4);
    int u1 = z.z1 - base_[idx][0];
    int u2 = z.z2 - base_[idx][1];
    // u = (v1+v2, v2-v1) for an even v; both components are even here.
    Site v{(u1 - u2) / 2, (u1 + u2) / 2};
    Site x = p == Parity::Odd ? Site{v.x1 + 1, v.x2} : v;
    return {x, d};
}

std::string EmbeddingTable::describe() const {
    std::ostringstream os;
    os << "base vertices per class (site parity, incoming) -> (z1, z2, z3):\n";
    for (Parity p : {Parity::Even, Parity::Odd}) {
        Site rep{p == Parity::Odd ? 1 : 0, 0};
        for (Direction d : all_directions) {
            int idx = class_index(p, d);
            os << "  (" << (p == Parity::Odd ? "odd " : "even") << ", " << direction_letter(d)
               << ") at " << to_string(rep) << " -> (" << base_[idx][0] << ", " << base_[idx][1]
               << ", " << level(rep, d) << ")\n";
        }
    }
    return os.str();
}

EdgeClass classify_transition(const EmbeddingTable& table, const WalkerState& s,
                              const WalkerState& t) {
    if (!(t.position == s.position + t.incoming))
        throw NotAdjacentError("states are not related by one step");
    RelativeMove mv = move_between(s.incoming, t.incoming);
    int from_level = level(s);
    int to_level = level(t);
    (void)table;
    if (mv == RelativeMove::L || mv == RelativeMove::R)
        return {from_level == 0 ? GraphPart::M1Diag : GraphPart::M2Diag, MoveKind::Turn};
    MoveKind kind = mv == RelativeMove::F ? MoveKind::Forward : MoveKind::Backward;
    return {to_level > from_level ? GraphPart::LPlus : GraphPart::LMinus, kind};
}

std::vector<Site> remove_dead_times(const std::vector<Site>& seq) {
    std::vector<Site> out;
    out.reserve(seq.size());
    for (const Site& s : seq)
        if (out.empty() || !(out.back() == s)) out.push_back(s);
    return out;
}

std::array<Site, 2> manhattan_neighbors(const Site& x) {
    int eps_row = mod2(std::abs(x.x2)) == 0 ? 1 : -1;
    int eps_col = mod2(std::abs(x.x1)) == 0 ? 1 : -1;
    return {Site{x.x1 + eps_row, x.x2}, Site{x.x1, x.x2 + eps_col}};
}

namespace {

Site project_state(const EmbeddingTable& table, const WalkerState& s, ProjectionScheme scheme) {
    switch (scheme) {
    case ProjectionScheme::Prop41: return proj_psi(table.to_dual(s));
    case ProjectionScheme::Prop42: return proj_phi(proj_psi_bar(table.to_dual(s)));
    default: return proj_phi_bar(table.to_dual(s));
    }
}

} // namespace

std::vector<Site> project_walk(const EmbeddingTable& table, const Trajectory& traj,
                               ProjectionScheme scheme) {
    std::vector<Site> out;
    if (scheme == ProjectionScheme::Appendix) {
        auto pos = traj.positions();
        for (std::size_t k = 0; k < pos.size(); k += 2) out.push_back(proj_phi(pos[k]));
        return out;
    }
    auto states = traj.states();
    if (scheme == ProjectionScheme::Prop43) {
        for (std::size_t k = 0; k < states.size(); k += 2)
            out.push_back(project_state(table, states[k], scheme));
        return out;
    }
    for (const auto& s : states) out.push_back(project_state(table, s, scheme));
    return remove_dead_times(out);
}

std::vector<SiteDistribution> projected_jump_distribution(const Environment& env,
                                                          const EmbeddingTable& table,
                                                          const WalkerState& xi, int jumps,
                                                          ProjectionScheme scheme,
                                                          int max_steps) {
    if (scheme != ProjectionScheme::Prop41 && scheme != ProjectionScheme::Prop42)
        throw BadParameterError("jump-chain law is defined for the dead-time-removed schemes");
    if (jumps < 0) throw BadParameterError("jumps must be nonnegative");

    struct Node {
        WalkerState s;
        int jumps_done;
        bool operator<(const Node& o) const {
            if (!(s == o.s)) return s < o.s;
            return jumps_done < o.jumps_done;
        }
    };

    std::vector<SiteDistribution> out(static_cast<std::size_t>(jumps) + 1);
    out[0][project_state(table, xi, scheme)] = 1.0;
    if (jumps == 0) return out;

    std::map<Node, double> dist;
    dist[{xi, 0}] = 1.0;

    for (int t = 0; t < max_steps && !dist.empty(); ++t) {
        double active = 0.0;
        for (const auto& [node, p] : dist) active += p;
        if (active < 1e-14) break;

        std::map<Node, double> next;
        for (const auto& [node, p] : dist) {
            Site y = project_state(table, node.s, scheme);
            auto row = env.row_at(node.s.position, node.s.incoming);
            for (int k = 0; k < 4; ++k) {
                if (row[k] == 0.0) continue;
                auto d = static_cast<Direction>(k);
                WalkerState n{node.s.position + d, d};
                Site y2 = project_state(table, n, scheme);
                double mass = p * row[k];
                if (y2 == y) {
                    next[{n, node.jumps_done}] += mass;
                } else {
                    int m = node.jumps_done + 1;
                    out[static_cast<std::size_t>(m)][y2] += mass;
                    if (m < jumps) next[{n, m}] += mass;
                }
            }
        }
        dist = std::move(next);
    }

    double leftover = 0.0;
    for (const auto& [node, p] : dist) leftover += p;
    if (leftover > 1e-12)
        throw Error("projected jump chain did not drain within the step budget (mass " +
                    std::to_string(leftover) + ")");
    return out;
}

std::vector<std::string> validate_embedding(const EmbeddingTable& table, const Environment& env,
                                            const Box& box) {
    std::vector<std::string> violations;
    auto note = [&](const std::string& msg) {
        if (violations.size() < 32) violations.push_back(msg);
    };

    // C6 anchor and a from_dual round trip.
    WalkerState origin{{0, 0}, Direction::N};
    if (!(table.to_dual(origin) == DualVertex{0, 0, 0})) note("C6: z((0,0),N) != (0,0,0)");

    box.for_each([&](Site x) {
        for (Direction d : all_directions) {
            WalkerState s{x, d};
            DualVertex a = table.to_dual(s);

            if (!(table.from_dual(a) == s)) note("bijection: from_dual(to_dual) mismatch at " +
                                                 to_string(x));

            // C2: equivariance under two even generators.
            for (Site v : {Site{1, 1}, Site{1, -1}}) {
                DualVertex b = table.to_dual({x + v, d});
                auto tr = even_translation(v);
                if (b.z1 - a.z1 != tr[0] || b.z2 - a.z2 != tr[1] || b.z3 != a.z3)
                    note("C2: equivariance fails at " + to_string(x));
            }

            auto row = env.row_at(x, d);
            for (int k = 0; k < 4; ++k) {
                if (row[k] == 0.0) continue;
                auto out = static_cast<Direction>(k);
                WalkerState n{x + out, out};
                DualVertex b = table.to_dual(n);
                int d1 = b.z1 - a.z1, d2 = b.z2 - a.z2, d3 = b.z3 - a.z3;
                EdgeClass cls = classify_transition(table, s, n);

                // C1 / level parity law.
                bool flips = cls.move != MoveKind::Turn;
                if ((level(n) == level(s)) == flips)
                    note("C1: level law violated at " + to_string(x));

                switch (cls.move) {
                case MoveKind::Turn:
                    if (d3 != 0 || std::abs(d1) + std::abs(d2) != 1)
                        note("C3: turn displacement not a horizontal unit at " + to_string(x));
                    break;
                case MoveKind::Forward:
                    if (std::abs(d1) != 1 || std::abs(d2) != 1 || std::abs(d3) != 1)
                        note("C5: forward displacement not (+-1,+-1,+-1) at " + to_string(x));
                    if (is_effective_class(s) && !(d1 == d2 && d2 == d3))
                        note("C5: effective forward not +-(1,1,1) at " + to_string(x));
                    break;
                case MoveKind::Backward:
                    if (d1 != 0 || d2 != 0 || std::abs(d3) != 1)
                        note("C4: backward displacement not vertical at " + to_string(x));
                    if (is_effective_class(s) && (mod2(a.z1 + 64) != 0 || mod2(a.z2 + 64) != 0))
                        note("C4: effective backward column not in (2Z)^2 at " + to_string(x));
                    break;
                }

                // Class geometry consistency.
                if (cls.move == MoveKind::Turn) {
                    GraphPart want = level(s) == 0 ? GraphPart::M1Diag : GraphPart::M2Diag;
                    if (cls.part != want) note("turn edge classified off-level at " + to_string(x));
                } else {
                    GraphPart want = d3 > 0 ? GraphPart::LPlus : GraphPart::LMinus;
                    if (cls.part != want) note("level edge misclassified at " + to_string(x));
                }
            }
        }
    });
    return violations;
}

} // namespace prw
