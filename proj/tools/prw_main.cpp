// prw: persistent random walks on Z^2 - analysis, environment generation,
// simulation, dual-graph checks and the acceptance suite.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "prw/dual.hpp"
#include "prw/environment.hpp"
#include "prw/errors.hpp"
#include "prw/estimators.hpp"
#include "prw/homogeneous.hpp"
#include "prw/io.hpp"
#include "prw/selfcheck.hpp"
#include "prw/spectral.hpp"
#include "prw/walker.hpp"

namespace {

using namespace prw;

struct EnvFlags {
    std::string family;
    std::string matrix_path;
    std::string env_file;
    std::uint64_t seed = 1;
    double eps = 0.1;
    std::optional<double> zeta;
    double zeta_min = 0.0;
    double zeta_max = 1.0;
    bool swap_fb = false;
    bool forbid_trap = false;
};

void add_env_flags(CLI::App* cmd, EnvFlags& f) {
    cmd->add_option("--env", f.family,
                    "environment family: homogeneous|flr|forward|forward-trap|backward|"
                    "leftright|symmetric-lr")
        ->default_val("homogeneous");
    cmd->add_option("--matrix", f.matrix_path, "matrix file for --env homogeneous");
    cmd->add_option("--env-file", f.env_file, "snapshot file (overrides --env)");
    cmd->add_option("--env-seed", f.seed, "environment seed")->default_val(1);
    cmd->add_option("--eps", f.eps, "ellipticity parameter for flr/leftright");
    cmd->add_option("--zeta", f.zeta, "constant zeta field");
    cmd->add_option("--zeta-min", f.zeta_min, "uniform zeta law lower bound");
    cmd->add_option("--zeta-max", f.zeta_max, "uniform zeta law upper bound");
    cmd->add_flag("--swap-fb", f.swap_fb, "swap forward/backward roles (flr)");
    cmd->add_flag("--forbid-trap", f.forbid_trap, "exclude trapping twin pairs (backward)");
}

Environment build_env(const EnvFlags& f) {
    if (!f.env_file.empty()) return read_env_snapshot_file(f.env_file);
    ZetaLaw law = f.zeta ? ZetaLaw::constant(*f.zeta) : ZetaLaw::uniform(f.zeta_min, f.zeta_max);
    if (f.family == "homogeneous") {
        if (f.matrix_path.empty())
            return homogeneous_env(TransitionMatrix::standard_walk());
        return homogeneous_env(read_matrix_file(f.matrix_path));
    }
    if (f.family == "flr") return flr_env(f.seed, f.eps, f.swap_fb);
    if (f.family == "forward") return forward_inhom_env(f.seed, law);
    if (f.family == "forward-trap") return forward_trap_env(f.seed, law);
    if (f.family == "backward") return backward_inhom_env(f.seed, law, f.forbid_trap);
    if (f.family == "leftright") return leftright_env(f.seed, f.eps);
    if (f.family == "symmetric-lr") return symmetric_leftright_env();
    throw BadParameterError("unknown environment family: " + f.family);
}

Box parse_box(const std::string& text) {
    // "a:b,c:d" or a single radius "r" for the centered square.
    Box box;
    if (text.find(':') == std::string::npos) {
        int r = std::stoi(text);
        return Box::centered(r);
    }
    char c1 = 0, c2 = 0;
    std::istringstream is(text);
    if (!(is >> box.x1_lo >> c1 >> box.x1_hi) || c1 != ':')
        throw BadParameterError("bad box spec: " + text);
    is >> c1;
    if (!(is >> box.x2_lo >> c2 >> box.x2_hi) || c1 != ',' || c2 != ':')
        throw BadParameterError("bad box spec: " + text);
    if (box.x1_lo > box.x1_hi || box.x2_lo > box.x2_hi)
        throw BadParameterError("empty box: " + text);
    return box;
}

WalkerState parse_start(const std::string& text) {
    std::istringstream is(text);
    int x1 = 0, x2 = 0;
    char c1 = 0, c2 = 0, letter = 0;
    if (!(is >> x1 >> c1 >> x2 >> c2 >> letter) || c1 != ',' || c2 != ',')
        throw BadParameterError("bad start spec (want x1,x2,D): " + text);
    Direction d{};
    if (!direction_from_letter(letter, d)) throw BadParameterError("bad direction in start spec");
    return {{x1, x2}, d};
}

std::unique_ptr<std::ostream> open_output(const std::string& path, std::ostream*& os) {
    if (path.empty() || path == "-") {
        os = &std::cout;
        return nullptr;
    }
    auto file = std::make_unique<std::ofstream>(path);
    if (!*file) throw Error("cannot open output file: " + path);
    os = file.get();
    return file;
}

void print_ratio(std::ostream& os, const ExtendedRatio& r) {
    if (r.is_indeterminate())
        os << "0/0";
    else if (r.is_infinite())
        os << "+inf";
    else
        os << format_double(r.value);
}

int cmd_analyze_matrix(const std::string& path, const std::string& out_path) {
    std::ostream* os = nullptr;
    auto holder = open_output(out_path, os);

    TransitionMatrix q = read_matrix_file(path);
    HomogeneousVerdict v = classify_homogeneous(q);

    *os << "matrix: " << path << '\n';
    *os << "lambda:";
    for (const auto& l : v.lambdas) {
        *os << ' ';
        print_ratio(*os, l);
    }
    *os << '\n';
    if (v.pi) {
        *os << "pi:";
        for (double p : *v.pi) *os << ' ' << format_double(p);
        *os << '\n';
        *os << "velocity: " << format_double((*v.velocity)[0]) << ' '
            << format_double((*v.velocity)[1]) << '\n';
    } else {
        *os << "pi: (not primitive)\nvelocity: (not primitive)\n";
    }
    *os << "classification: " << to_string(v.classification) << '\n';

    if (is_doubly_stochastic(q)) {
        double norm = deviation_norm(q);
        *os << "deviation_norm: " << format_double(norm) << '\n';
        *os << "toth:";
        for (double eps : {0.5, 0.25, 0.1, 0.01, 0.001})
            *os << ' ' << format_double(eps) << (toth_condition(q, eps) ? "=pass" : "=fail");
        *os << '\n';
        auto rc = remark_sufficient_conditions(q);
        *os << "remark_conditions: no_column_two_zeros=" << rc.no_column_two_zeros
            << " primitive_normal=" << rc.primitive_and_normal
            << " primitive_positive_diagonal=" << rc.primitive_positive_diagonal << '\n';
    } else {
        *os << "deviation_norm: n/a (not doubly stochastic)\n";
    }
    return 0;
}

int cmd_gen_env(const EnvFlags& flags, const std::string& box_spec,
                const std::string& out_path) {
    std::ostream* os = nullptr;
    auto holder = open_output(out_path, os);
    Environment env = build_env(flags);
    Box box = parse_box(box_spec);
    write_env_snapshot(*os, env, box);
    write_audit_footer(*os, audit_env(env, box));
    return 0;
}

int cmd_simulate(const EnvFlags& flags, const std::string& start_spec, std::uint64_t horizon,
                 std::uint64_t seed, const std::string& out_path) {
    std::ostream* os = nullptr;
    auto holder = open_output(out_path, os);
    Environment env = build_env(flags);
    Trajectory t = simulate(env, parse_start(start_spec), horizon, seed);
    write_trajectory(*os, t);
    return 0;
}

int cmd_ensemble(const EnvFlags& flags, const std::string& start_spec, std::uint64_t horizon,
                 std::uint64_t ensemble, std::uint64_t seed, unsigned threads,
                 const std::string& format_name, const std::string& out_path) {
    std::ostream* os = nullptr;
    auto holder = open_output(out_path, os);
    ReportFormat format{};
    if (!report_format_from_string(format_name, format))
        throw BadParameterError("unknown format: " + format_name);
    Environment env = build_env(flags);
    StatReport rep =
        make_report(run_ensemble(env, parse_start(start_spec), horizon, ensemble, seed, threads));
    write_report(*os, rep, format);
    return 0;
}

int cmd_project(const std::string& in_path, const std::string& scheme_name,
                const std::string& out_path) {
    std::ostream* os = nullptr;
    auto holder = open_output(out_path, os);
    ProjectionScheme scheme{};
    if (!scheme_from_string(scheme_name, scheme))
        throw BadParameterError("unknown scheme: " + scheme_name);
    Trajectory t = read_trajectory_file(in_path);
    EmbeddingTable table = EmbeddingTable::solve();
    write_site_sequence(*os, project_walk(table, t, scheme));
    return 0;
}

int cmd_dual_check(int radius, const std::string& out_path) {
    std::ostream* os = nullptr;
    auto holder = open_output(out_path, os);
    EmbeddingTable table = EmbeddingTable::solve();
    *os << table.describe();

    Box box = Box::centered(radius);
    const Environment envs[] = {
        homogeneous_env(TransitionMatrix::standard_walk()),
        flr_env(99, 0.1),
        forward_inhom_env(99, ZetaLaw::uniform(0.2, 0.8)),
        forward_trap_env(99, ZetaLaw::uniform(0.2, 0.8)),
        backward_inhom_env(99, ZetaLaw::constant(0.7), true),
        leftright_env(99, 0.25),
    };
    long long violations = 0;
    for (const auto& env : envs) {
        auto v = validate_embedding(table, env, box);
        violations += static_cast<long long>(v.size());
        for (const auto& msg : v) *os << to_string(env.kind()) << ": " << msg << '\n';
    }
    *os << "validated box radius " << radius << " over 6 environments: " << violations
        << " violations\n";
    return violations == 0 ? 0 : 1;
}

int cmd_accept(const std::vector<int>& only, unsigned threads) {
    selfcheck::Options opts;
    opts.threads = threads;
    opts.only = only;
    bool all_ok = true;
    for (const auto& r : selfcheck::run_all(opts)) {
        std::cout << selfcheck::format_result_line(r) << std::endl;
        all_ok = all_ok && r.passed;
    }
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistent random walks in random environments on Z^2"};
    app.require_subcommand(1);
    // key=value defaults per verb: a [verb] section or dotted verb.key names;
    // explicit command-line flags win
    app.set_config("--config", "", "configuration file with [verb] key=value sections");

    // analyze-matrix
    std::string matrix_path, out_path;
    auto* analyze = app.add_subcommand("analyze-matrix", "classify a homogeneous walk matrix");
    analyze->add_option("path", matrix_path, "matrix file (4 lines of 4 numbers)")->required();
    analyze->add_option("--out", out_path, "output path (default stdout)");

    // shared numeric flags
    EnvFlags env_flags;
    std::string box_spec = "10";
    std::string start_spec = "0,0,E";
    std::uint64_t horizon = 1024, ensemble = 1000, seed = 1;
    unsigned threads = 0;
    std::string format_name = "csv";
    std::string in_path, scheme_name = "prop41";
    int radius = 10;
    std::vector<int> criteria;

    auto* gen = app.add_subcommand("gen-env", "materialize an environment window");
    add_env_flags(gen, env_flags);
    gen->add_option("--box", box_spec, "box 'a:b,c:d' or centered radius")->default_val("10");
    gen->add_option("--out", out_path, "output path (default stdout)");

    auto* sim = app.add_subcommand("simulate", "sample one trajectory");
    add_env_flags(sim, env_flags);
    sim->add_option("--start", start_spec, "initial state x1,x2,D")->default_val("0,0,E");
    sim->add_option("--horizon", horizon, "number of steps")->default_val(1024);
    sim->add_option("--seed", seed, "trajectory seed")->default_val(1);
    sim->add_option("--out", out_path, "output path (default stdout)");

    for (const char* name : {"recurrence", "msd", "velocity", "clt"}) {
        auto* cmd = app.add_subcommand(
            name, std::string("ensemble ") + name + " report (csv or jsonl)");
        add_env_flags(cmd, env_flags);
        cmd->add_option("--start", start_spec)->default_val("0,0,E");
        cmd->add_option("--horizon", horizon)->default_val(1024);
        cmd->add_option("--ensemble", ensemble)->default_val(1000);
        cmd->add_option("--seed", seed)->default_val(1);
        cmd->add_option("--threads", threads)->default_val(0);
        cmd->add_option("--format", format_name, "csv|jsonl")->default_val("csv");
        cmd->add_option("--out", out_path);
    }

    auto* project = app.add_subcommand("project", "project a trajectory file");
    project->add_option("--in", in_path, "trajectory file")->required();
    project->add_option("--scheme", scheme_name, "appendix|prop41|prop42|prop43")
        ->default_val("prop41");
    project->add_option("--out", out_path);

    auto* dual = app.add_subcommand("dual-check", "solve and validate the dual embedding");
    dual->add_option("--box", radius, "validation box radius")->default_val(10);
    dual->add_option("--out", out_path);

    auto* accept = app.add_subcommand("accept", "run the acceptance suite");
    accept->add_option("--criterion", criteria, "run only these criteria (1..10)");
    accept->add_option("--threads", threads)->default_val(0);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (analyze->parsed()) return cmd_analyze_matrix(matrix_path, out_path);
        if (gen->parsed()) return cmd_gen_env(env_flags, box_spec, out_path);
        if (sim->parsed()) return cmd_simulate(env_flags, start_spec, horizon, seed, out_path);
        for (const char* name : {"recurrence", "msd", "velocity", "clt"})
            if (app.get_subcommand(name)->parsed())
                return cmd_ensemble(env_flags, start_spec, horizon, ensemble, seed, threads,
                                    format_name, out_path);
        if (project->parsed()) return cmd_project(in_path, scheme_name, out_path);
        if (dual->parsed()) return cmd_dual_check(radius, out_path);
        if (accept->parsed()) return cmd_accept(criteria, threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
