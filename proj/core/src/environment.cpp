#include "prw/environment.hpp"

#include <algorithm>
#include <cmath>

#include "prw/errors.hpp"
#include "prw/spectral.hpp"

namespace prw {

namespace {

constexpr std::uint64_t kStreamZeta = 0;
constexpr std::uint64_t kStreamZetaPrime = 1;

std::array<double, 4> turn_row(Direction in, double left, double right) {
    std::array<double, 4> row{};
    row[static_cast<int>(relative_to_absolute(in, RelativeMove::L))] = left;
    row[static_cast<int>(relative_to_absolute(in, RelativeMove::R))] = right;
    return row;
}

std::array<double, 4> relative_row(Direction in, double r, double f, double l, double b) {
    std::array<double, 4> row{};
    row[static_cast<int>(relative_to_absolute(in, RelativeMove::R))] += r;
    row[static_cast<int>(relative_to_absolute(in, RelativeMove::F))] += f;
    row[static_cast<int>(relative_to_absolute(in, RelativeMove::L))] += l;
    row[static_cast<int>(relative_to_absolute(in, RelativeMove::B))] += b;
    return row;
}

/// Uniform point on {z + z' + z'' = 1, each >= eps}: uniform barycentric
/// coordinates shrunk toward the center by 1 - 3 eps.
std::array<double, 3> flr_triple(std::uint64_t seed, Site x, double eps) {
    double u = site_uniform(seed, x, kStreamZeta);
    double v = site_uniform(seed, x, kStreamZetaPrime);
    double a = std::min(u, v), b = std::max(u, v);
    std::array<double, 3> bary{a, b - a, 1.0 - b};
    double scale = 1.0 - 3.0 * eps;
    return {eps + scale * bary[0], eps + scale * bary[1], eps + scale * bary[2]};
}

} // namespace

const char* to_string(EnvKind k) {
    switch (k) {
    case EnvKind::Homogeneous: return "homogeneous";
    case EnvKind::Flr: return "flr";
    case EnvKind::ForwardInhom: return "forward";
    case EnvKind::ForwardTrap: return "forward-trap";
    case EnvKind::BackwardInhom: return "backward";
    case EnvKind::LeftRight: return "leftright";
    default: return "snapshot";
    }
}

bool env_kind_from_string(const std::string& name, EnvKind& out) {
    for (EnvKind k : {EnvKind::Homogeneous, EnvKind::Flr, EnvKind::ForwardInhom,
                      EnvKind::ForwardTrap, EnvKind::BackwardInhom, EnvKind::LeftRight,
                      EnvKind::Snapshot})
        if (name == to_string(k)) {
            out = k;
            return true;
        }
    return false;
}

Environment homogeneous_env(const TransitionMatrix& q) {
    Environment e;
    e.kind_ = EnvKind::Homogeneous;
    e.homogeneous_q_ = q;
    return e;
}

Environment flr_env(std::uint64_t seed, double eps, bool swap_fb) {
    if (!(eps > 0.0) || !(eps <= 1.0 / 3.0))
        throw BadParameterError("flr_env needs eps in (0, 1/3]");
    Environment e;
    e.kind_ = EnvKind::Flr;
    e.seed_ = seed;
    e.eps_ = eps;
    e.swap_fb_ = swap_fb;
    return e;
}

Environment forward_inhom_env(std::uint64_t seed, const ZetaLaw& law) {
    if (law.lo < 0.0 || law.hi > 1.0 || law.lo > law.hi)
        throw BadParameterError("zeta law must live in [0,1]");
    Environment e;
    e.kind_ = EnvKind::ForwardInhom;
    e.seed_ = seed;
    e.law_ = law;
    return e;
}

Environment forward_trap_env(std::uint64_t seed, const ZetaLaw& law) {
    Environment e = forward_inhom_env(seed, law);
    e.kind_ = EnvKind::ForwardTrap;
    return e;
}

Environment backward_inhom_env(std::uint64_t seed, const ZetaLaw& law, bool forbid_trap) {
    Environment e = forward_inhom_env(seed, law);
    e.kind_ = EnvKind::BackwardInhom;
    e.forbid_trap_ = forbid_trap;
    return e;
}

Environment leftright_env(std::uint64_t seed, double eps) {
    if (!(eps > 0.0) || !(eps < 0.5))
        throw BadParameterError("leftright_env needs eps in (0, 1/2)");
    Environment e;
    e.kind_ = EnvKind::LeftRight;
    e.seed_ = seed;
    e.eps_ = eps;
    return e;
}

Environment symmetric_leftright_env() { return forward_inhom_env(0, ZetaLaw::constant(0.0)); }

Environment snapshot_env(std::shared_ptr<const SnapshotTable> table) {
    Environment e;
    e.kind_ = EnvKind::Snapshot;
    e.snapshot_ = std::move(table);
    return e;
}

Environment shift_env(const Environment& env, Site y) {
    Environment e = env;
    e.offset_ = e.offset_ + y;
    return e;
}

const TransitionMatrix& Environment::homogeneous_matrix() const {
    if (kind_ != EnvKind::Homogeneous)
        throw BadParameterError("environment is not homogeneous");
    return homogeneous_q_;
}

double Environment::zeta_at(Site x) const {
    x = x + offset_;
    switch (kind_) {
    case EnvKind::ForwardInhom:
    case EnvKind::ForwardTrap:
        return law_.sample(seed_, x, kStreamZeta);
    case EnvKind::BackwardInhom: {
        double z = law_.sample(seed_, x, kStreamZeta);
        if (forbid_trap_ && parity_class(x) == Parity::Odd && z == 1.0) {
            // Pairs are (even x, x + S); clamp the odd member when both hit 1.
            if (law_.sample(seed_, x + Direction::N, kStreamZeta) == 1.0) return 1.0 - 1e-9;
        }
        return z;
    }
    case EnvKind::LeftRight:
        return eps_ + (1.0 - 2.0 * eps_) * site_uniform(seed_, x, kStreamZeta);
    case EnvKind::Flr:
        return flr_triple(seed_, x, eps_)[0];
    default:
        throw BadParameterError("environment family has no zeta field");
    }
}

double Environment::zeta_prime_at(Site x) const {
    x = x + offset_;
    switch (kind_) {
    case EnvKind::LeftRight:
        return eps_ + (1.0 - 2.0 * eps_) * site_uniform(seed_, x, kStreamZetaPrime);
    case EnvKind::Flr:
        return flr_triple(seed_, x, eps_)[1];
    default:
        throw BadParameterError("environment family has no zeta-prime field");
    }
}

std::array<double, 4> Environment::row_at(Site x, Direction in) const {
    x = x + offset_;
    switch (kind_) {
    case EnvKind::Homogeneous:
        return homogeneous_q_.row(in);

    case EnvKind::Flr: {
        auto z = flr_triple(seed_, x, eps_);
        return swap_fb_ ? relative_row(in, z[2], 0.0, z[1], z[0])
                        : relative_row(in, z[2], z[0], z[1], 0.0);
    }

    case EnvKind::ForwardInhom: {
        bool even = parity_class(x) == Parity::Even;
        Direction special = even ? Direction::N : Direction::S;
        if (in == special) {
            double z = law_.sample(seed_, x, kStreamZeta);
            return relative_row(in, (1.0 - z) / 2.0, z, (1.0 - z) / 2.0, 0.0);
        }
        return turn_row(in, 0.5, 0.5);
    }

    case EnvKind::ForwardTrap: {
        if (parity_class(x) == Parity::Even && is_vertical(in)) {
            double z = law_.sample(seed_, x, kStreamZeta);
            return relative_row(in, (1.0 - z) / 2.0, z, (1.0 - z) / 2.0, 0.0);
        }
        return turn_row(in, 0.5, 0.5);
    }

    case EnvKind::BackwardInhom: {
        bool even = parity_class(x) == Parity::Even;
        Direction special = even ? Direction::N : Direction::S;
        if (in == special) {
            double z = zeta_at(x - offset_);
            return relative_row(in, (1.0 - z) / 2.0, 0.0, (1.0 - z) / 2.0, z);
        }
        return turn_row(in, 0.5, 0.5);
    }

    case EnvKind::LeftRight: {
        if (parity_class(x) == Parity::Even) return turn_row(in, 0.5, 0.5);
        Site base = x - offset_;
        std::array<double, 4> row{};
        switch (in) {
        case Direction::E: {
            double z = zeta_at(base + Direction::W); // this site is (even x) + E
            row[static_cast<int>(Direction::N)] = z;
            row[static_cast<int>(Direction::S)] = 1.0 - z;
            break;
        }
        case Direction::W: {
            double z = zeta_at(base + Direction::E); // this site is (even x) + W
            row[static_cast<int>(Direction::S)] = z;
            row[static_cast<int>(Direction::N)] = 1.0 - z;
            break;
        }
        case Direction::N: {
            double z = zeta_prime_at(base + Direction::S); // this site is (even x) + N
            row[static_cast<int>(Direction::E)] = z;
            row[static_cast<int>(Direction::W)] = 1.0 - z;
            break;
        }
        default: {
            double z = zeta_prime_at(base + Direction::N); // this site is (even x) + S
            row[static_cast<int>(Direction::W)] = z;
            row[static_cast<int>(Direction::E)] = 1.0 - z;
            break;
        }
        }
        return row;
    }

    default: {
        auto it = snapshot_->find(x);
        if (it == snapshot_->end())
            throw OutOfSnapshotError("site " + to_string(x) + " is outside the snapshot window");
        return it->second.row(in);
    }
    }
}

TransitionMatrix Environment::matrix_at(Site x) const {
    if (kind_ == EnvKind::Homogeneous) return homogeneous_q_;
    if (kind_ == EnvKind::Snapshot) {
        Site y = x + offset_;
        auto it = snapshot_->find(y);
        if (it == snapshot_->end())
            throw OutOfSnapshotError("site " + to_string(y) + " is outside the snapshot window");
        return it->second;
    }
    std::array<std::array<double, 4>, 4> rows;
    for (Direction d : all_directions) rows[static_cast<int>(d)] = row_at(x, d);
    return TransitionMatrix::from_rows(rows);
}

std::array<double, 2> local_drift(const Environment& env, Site x, Direction d) {
    auto row = env.row_at(x, d);
    double vx = 0.0, vy = 0.0;
    for (Direction out : all_directions) {
        double p = row[static_cast<int>(out)];
        vx += p * dx(out);
        vy += p * dy(out);
    }
    return {vx, vy};
}

std::array<double, 2> average_drift(const Environment& env, const Box& box) {
    if (box.site_count() <= 0) throw BadParameterError("average_drift needs a nonempty box");
    double sx = 0.0, sy = 0.0;
    box.for_each([&](Site x) {
        for (Direction d : all_directions) {
            auto v = local_drift(env, x, d);
            sx += v[0];
            sy += v[1];
        }
    });
    double denom = 4.0 * static_cast<double>(box.site_count());
    return {sx / denom, sy / denom};
}

namespace {

void check_family_structure(const Environment& env, Site x, const TransitionMatrix& m,
                            EnvAuditReport& report) {
    auto note = [&](const std::string& msg) {
        ++report.family_violations;
        if (report.violation_samples.size() < 8)
            report.violation_samples.push_back(to_string(x) + ": " + msg);
    };
    auto expect_zero = [&](Direction in, RelativeMove mv, const char* what) {
        if (m(in, relative_to_absolute(in, mv)) != 0.0) note(what);
    };
    auto expect_equal_turns = [&](Direction in) {
        double l = m(in, relative_to_absolute(in, RelativeMove::L));
        double r = m(in, relative_to_absolute(in, RelativeMove::R));
        if (std::abs(l - r) > 1e-12) note("left/right asymmetry out of pattern");
    };

    bool even = parity_class(x) == Parity::Even;
    switch (env.kind()) {
    case EnvKind::Flr:
        for (Direction in : all_directions)
            expect_zero(in, env.swap_fb() ? RelativeMove::F : RelativeMove::B,
                        "forbidden relative move has positive probability");
        if (!is_doubly_stochastic(m)) note("not doubly stochastic");
        break;
    case EnvKind::ForwardInhom:
        for (Direction in : all_directions) {
            expect_zero(in, RelativeMove::B, "backward probability not zero");
            Direction special = even ? Direction::N : Direction::S;
            if (in != special) expect_zero(in, RelativeMove::F, "forward allowed only at one incoming");
            expect_equal_turns(in);
        }
        break;
    case EnvKind::ForwardTrap:
        for (Direction in : all_directions) {
            expect_zero(in, RelativeMove::B, "backward probability not zero");
            if (!(even && is_vertical(in)))
                expect_zero(in, RelativeMove::F, "forward allowed only at even vertical incomings");
            expect_equal_turns(in);
        }
        break;
    case EnvKind::BackwardInhom: {
        for (Direction in : all_directions) {
            expect_zero(in, RelativeMove::F, "forward probability not zero");
            Direction special = even ? Direction::N : Direction::S;
            if (in != special) expect_zero(in, RelativeMove::B, "backward allowed only at one incoming");
            expect_equal_turns(in);
        }
        if (env.forbid_trap() && even) {
            if (env.zeta_at(x) == 1.0 && env.zeta_at(x + Direction::S) == 1.0)
                note("trapping twin pair with zeta = 1");
        }
        break;
    }
    case EnvKind::LeftRight:
        for (Direction in : all_directions) {
            expect_zero(in, RelativeMove::F, "forward entry not exactly zero");
            expect_zero(in, RelativeMove::B, "backward entry not exactly zero");
        }
        if (even) {
            for (Direction in : all_directions) expect_equal_turns(in);
        } else {
            // Paired odd-site rows must split one zeta of the even neighbor.
            double zn = m(Direction::E, Direction::N);
            if (std::abs(zn - env.zeta_at(x + Direction::W)) > 1e-12)
                note("row E does not match the zeta field of its even neighbor");
        }
        break;
    default:
        break;
    }
}

} // namespace

SiteAudit audit_site(const Environment& env, Site x, double eps_elliptic, double eps_toth) {
    SiteAudit a;
    a.site = x;
    TransitionMatrix m = env.matrix_at(x); // construction validates stochasticity
    a.stochastic = true;
    a.isotropic = is_isotropic(m);
    a.elliptic = is_elliptic(m, eps_elliptic);
    if (a.isotropic) {
        a.toth_margin = 1.0 - deviation_norm(m);
        a.toth = a.toth_margin >= eps_toth;
    }
    return a;
}

EnvAuditReport audit_env(const Environment& env, const Box& box, double eps_elliptic,
                         double eps_toth) {
    EnvAuditReport r;
    r.eps_elliptic = eps_elliptic;
    r.eps_toth = eps_toth;
    r.sites = box.site_count();
    double min_margin = 1.0;
    bool any_ds = false;

    box.for_each([&](Site x) {
        SiteAudit a = audit_site(env, x, eps_elliptic, eps_toth);
        if (a.stochastic) ++r.stochastic;
        if (a.isotropic) {
            ++r.isotropic;
            any_ds = true;
            min_margin = std::min(min_margin, a.toth_margin);
        }
        if (a.elliptic) ++r.elliptic;
        if (a.toth) ++r.toth;
        check_family_structure(env, x, env.matrix_at(x), r);
    });

    r.min_toth_margin = any_ds ? min_margin : 0.0;
    return r;
}

} // namespace prw
