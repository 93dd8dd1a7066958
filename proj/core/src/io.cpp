#include "prw/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "prw/errors.hpp"

namespace prw {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open file: " + path);
    return is;
}

bool parse_double(const std::string& tok, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(tok, &used);
        return used == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_long(const std::string& tok, long& out) {
    try {
        std::size_t used = 0;
        out = std::stol(tok, &used);
        return used == tok.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_matrix(std::ostream& os, const TransitionMatrix& q) {
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j) os << ' ';
            os << format_double(q(i, j));
        }
        os << '\n';
    }
}

TransitionMatrix read_matrix(std::istream& is) {
    std::array<double, 16> e{};
    std::string line;
    int row = 0;
    int line_no = 0;
    while (row < 4 && std::getline(is, line)) {
        ++line_no;
        auto toks = split_tokens(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 4) throw ParseError("expected 4 numbers", line_no, 1);
        for (int j = 0; j < 4; ++j) {
            double v = 0.0;
            if (!parse_double(toks[j], v))
                throw ParseError("bad number '" + toks[j] + "'", line_no, j + 1);
            e[row * 4 + j] = v;
        }
        ++row;
    }
    if (row != 4) throw ParseError("matrix needs 4 rows", line_no, 1);
    return TransitionMatrix::from_entries(e);
}

TransitionMatrix read_matrix_file(const std::string& path) {
    auto is = open_input(path);
    return read_matrix(is);
}

namespace {

std::string env_params_string(const Environment& env) {
    std::ostringstream os;
    switch (env.kind()) {
    case EnvKind::Flr:
        os << "eps=" << format_double(env.eps()) << " swap_fb=" << (env.swap_fb() ? 1 : 0);
        break;
    case EnvKind::ForwardInhom:
    case EnvKind::ForwardTrap:
        os << "zeta_lo=" << format_double(env.zeta_law().lo)
           << " zeta_hi=" << format_double(env.zeta_law().hi);
        break;
    case EnvKind::BackwardInhom:
        os << "zeta_lo=" << format_double(env.zeta_law().lo)
           << " zeta_hi=" << format_double(env.zeta_law().hi)
           << " forbid_trap=" << (env.forbid_trap() ? 1 : 0);
        break;
    case EnvKind::LeftRight:
        os << "eps=" << format_double(env.eps());
        break;
    default:
        break;
    }
    return os.str();
}

} // namespace

void write_env_snapshot(std::ostream& os, const Environment& env, const Box& box) {
    os << "# prw-env v1 kind=" << to_string(env.kind()) << " seed=" << env.seed();
    std::string params = env_params_string(env);
    if (!params.empty()) os << ' ' << params;
    os << " box=" << box.x1_lo << ':' << box.x1_hi << ',' << box.x2_lo << ':' << box.x2_hi
       << '\n';
    box.for_each([&](Site x) {
        os << x.x1 << ' ' << x.x2;
        TransitionMatrix m = env.matrix_at(x);
        for (double v : m.entries()) os << ' ' << format_double(v);
        os << '\n';
    });
}

void write_audit_footer(std::ostream& os, const EnvAuditReport& r) {
    auto bucket = [&](long long k) {
        if (k == r.sites) return std::string("all");
        if (k == 0) return std::string("none");
        return std::to_string(k) + "/" + std::to_string(r.sites);
    };
    os << "# audit sites=" << r.sites << " stochastic=" << bucket(r.stochastic)
       << " isotropic=" << bucket(r.isotropic) << " elliptic(" << format_double(r.eps_elliptic)
       << ")=" << bucket(r.elliptic) << " toth(" << format_double(r.eps_toth)
       << ")=" << bucket(r.toth) << " toth_margin=" << format_double(r.min_toth_margin)
       << " family_violations=" << r.family_violations << '\n';
}

Environment read_env_snapshot(std::istream& is) {
    auto table = std::make_shared<SnapshotTable>();
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto toks = split_tokens(line);
        if (toks.size() != 18)
            throw ParseError("snapshot site line needs 18 fields", line_no, 1);
        long x1 = 0, x2 = 0;
        if (!parse_long(toks[0], x1)) throw ParseError("bad x1", line_no, 1);
        if (!parse_long(toks[1], x2)) throw ParseError("bad x2", line_no, 2);
        std::array<double, 16> e{};
        for (int k = 0; k < 16; ++k)
            if (!parse_double(toks[2 + k], e[k]))
                throw ParseError("bad matrix entry", line_no, 3 + k);
        (*table)[Site{static_cast<int>(x1), static_cast<int>(x2)}] =
            TransitionMatrix::from_entries(e);
    }
    if (table->empty()) throw Error("snapshot holds no sites");
    return snapshot_env(std::move(table));
}

Environment read_env_snapshot_file(const std::string& path) {
    auto is = open_input(path);
    return read_env_snapshot(is);
}

void write_trajectory(std::ostream& os, const Trajectory& t) {
    os << t.initial.position.x1 << ' ' << t.initial.position.x2 << ' '
       << direction_letter(t.initial.incoming) << '\n';
    for (Direction d : t.steps) os << direction_letter(d) << '\n';
}

Trajectory read_trajectory(std::istream& is) {
    Trajectory t;
    std::string line;
    int line_no = 0;
    bool have_initial = false;
    while (std::getline(is, line)) {
        ++line_no;
        auto toks = split_tokens(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (!have_initial) {
            if (toks.size() != 3) throw ParseError("initial state needs 'x1 x2 D'", line_no, 1);
            long x1 = 0, x2 = 0;
            if (!parse_long(toks[0], x1)) throw ParseError("bad x1", line_no, 1);
            if (!parse_long(toks[1], x2)) throw ParseError("bad x2", line_no, 2);
            Direction d{};
            if (toks[2].size() != 1 || !direction_from_letter(toks[2][0], d))
                throw ParseError("bad direction letter", line_no, 3);
            t.initial = {{static_cast<int>(x1), static_cast<int>(x2)}, d};
            have_initial = true;
        } else {
            if (toks.size() != 1 || toks[0].size() != 1)
                throw ParseError("expected one direction letter", line_no, 1);
            Direction d{};
            if (!direction_from_letter(toks[0][0], d))
                throw ParseError("bad direction letter", line_no, 1);
            t.steps.push_back(d);
        }
    }
    if (!have_initial) throw Error("trajectory file has no initial state line");
    return t;
}

Trajectory read_trajectory_file(const std::string& path) {
    auto is = open_input(path);
    return read_trajectory(is);
}

void write_site_sequence(std::ostream& os, const std::vector<Site>& seq) {
    for (const Site& s : seq) os << s.x1 << ' ' << s.x2 << '\n';
}

std::vector<Site> read_site_sequence(std::istream& is) {
    std::vector<Site> seq;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        auto toks = split_tokens(line);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks.size() != 2) throw ParseError("site line needs 'x1 x2'", line_no, 1);
        long x1 = 0, x2 = 0;
        if (!parse_long(toks[0], x1)) throw ParseError("bad x1", line_no, 1);
        if (!parse_long(toks[1], x2)) throw ParseError("bad x2", line_no, 2);
        seq.push_back(Site{static_cast<int>(x1), static_cast<int>(x2)});
    }
    return seq;
}

bool report_format_from_string(const std::string& name, ReportFormat& out) {
    if (name == "csv") {
        out = ReportFormat::Csv;
        return true;
    }
    if (name == "jsonl") {
        out = ReportFormat::Jsonl;
        return true;
    }
    return false;
}

void write_report(std::ostream& os, const StatReport& r, ReportFormat format) {
    if (format == ReportFormat::Csv) {
        os << "# prw-report-v1 columns: n,return_fraction,return_se,first_returns,msd,msd_se,"
              "msd_ratio,vx,vy,vx_se,vy_se\n";
        for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
            const auto& c = r.checkpoints[i];
            os << c.n << ',' << format_double(c.return_fraction) << ','
               << format_double(c.return_se) << ',' << r.first_return_histogram[i] << ','
               << format_double(c.msd) << ',' << format_double(c.msd_se) << ','
               << format_double(c.msd_ratio) << ',' << format_double(c.velocity[0]) << ','
               << format_double(c.velocity[1]) << ',' << format_double(c.velocity_se[0]) << ','
               << format_double(c.velocity_se[1]) << '\n';
        }
        os << "# summary ensemble=" << r.ensemble << " horizon=" << r.horizon
           << " seed=" << r.master_seed << " counting="
           << format_double(r.counting_average[0]) << ':'
           << format_double(r.counting_average[1]) << ':'
           << format_double(r.counting_average[2]) << ':'
           << format_double(r.counting_average[3])
           << " cov=" << format_double(r.cov_xx) << ':' << format_double(r.cov_yy) << ':'
           << format_double(r.cov_xy) << " quadrants=" << format_double(r.quadrant_fraction[0])
           << ':' << format_double(r.quadrant_fraction[1]) << ':'
           << format_double(r.quadrant_fraction[2]) << ':'
           << format_double(r.quadrant_fraction[3])
           << " axis=" << format_double(r.axis_fraction)
           << " noncentered=" << (r.noncentered ? 1 : 0) << '\n';
        return;
    }

    for (std::size_t i = 0; i < r.checkpoints.size(); ++i) {
        const auto& c = r.checkpoints[i];
        nlohmann::json row{
            {"n", c.n},
            {"return_fraction", c.return_fraction},
            {"return_se", c.return_se},
            {"first_returns", r.first_return_histogram[i]},
            {"msd", c.msd},
            {"msd_se", c.msd_se},
            {"msd_ratio", c.msd_ratio},
            {"vx", c.velocity[0]},
            {"vy", c.velocity[1]},
            {"vx_se", c.velocity_se[0]},
            {"vy_se", c.velocity_se[1]},
        };
        os << row.dump() << '\n';
    }
    nlohmann::json summary{
        {"summary",
         {{"ensemble", r.ensemble},
          {"horizon", r.horizon},
          {"seed", r.master_seed},
          {"counting_average", r.counting_average},
          {"normalized_mean", r.normalized_mean},
          {"cov", {r.cov_xx, r.cov_yy, r.cov_xy}},
          {"quadrant_fraction", r.quadrant_fraction},
          {"axis_fraction", r.axis_fraction},
          {"gaussian_quadrant_mass", r.gaussian_quadrant_mass},
          {"noncentered", r.noncentered}}}};
    os << summary.dump() << '\n';
}

} // namespace prw
