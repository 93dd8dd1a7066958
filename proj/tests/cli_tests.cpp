// End-to-end tests that drive the installed CLI binary. The binary path
// arrives as the first program argument (see tests/CMakeLists.txt).

#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string g_cli_path;
std::filesystem::path g_work_dir;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = (g_work_dir / "cmd_output.txt").string();
    std::string command = g_cli_path + " " + args + " > " + out_file + " 2>&1";
    int status = std::system(command.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream is(out_file);
    std::stringstream ss;
    ss << is.rdbuf();
    r.output = ss.str();
    return r;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path write_file(const std::string& name, const std::string& content) {
    auto p = g_work_dir / name;
    std::ofstream os(p);
    os << content;
    return p;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze-matrix classifies the standard walk") {
    auto path = write_file("w.txt",
                           "0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n"
                           "0.25 0.25 0.25 0.25\n0.25 0.25 0.25 0.25\n");
    auto r = run_cli("analyze-matrix " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("classification: RecurrentCLT") != std::string::npos);
    CHECK(r.output.find("deviation_norm: 0") != std::string::npos);
}

TEST_CASE("analyze-matrix reports the norm-one exception") {
    auto path = write_file("ex.txt", "0 0 0 1\n0 0.5 0.5 0\n1 0 0 0\n0 0.5 0.5 0\n");
    auto r = run_cli("analyze-matrix " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("deviation_norm: 1") != std::string::npos);
    CHECK(r.output.find("=pass") == std::string::npos);
}

TEST_CASE("analyze-matrix ballistic example") {
    auto path = write_file("b.txt",
                           "0.7 0.1 0.1 0.1\n0.7 0.1 0.1 0.1\n0.7 0.1 0.1 0.1\n0.7 0.1 0.1 0.1\n");
    auto r = run_cli("analyze-matrix " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("classification: Ballistic") != std::string::npos);

    auto pos = r.output.find("velocity: ");
    REQUIRE(pos != std::string::npos);
    std::istringstream line(r.output.substr(pos + 10));
    double vx = 0.0, vy = 1.0;
    line >> vx >> vy;
    CHECK(vx == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(vy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gen-env is reproducible and audited") {
    auto out1 = (g_work_dir / "env1.txt").string();
    auto out2 = (g_work_dir / "env2.txt").string();
    auto r1 = run_cli("gen-env --env flr --env-seed 7 --eps 0.1 --box 5 --out " + out1);
    auto r2 = run_cli("gen-env --env flr --env-seed 7 --eps 0.1 --box 5 --out " + out2);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(out1) == slurp(out2));
    CHECK(slurp(out1).find("isotropic=all") != std::string::npos);
    CHECK(slurp(out1).find("toth(0.01)=all") != std::string::npos);

    auto lr = (g_work_dir / "envlr.txt").string();
    auto r3 = run_cli("gen-env --env leftright --env-seed 7 --eps 0.2 --box 5 --out " + lr);
    CHECK(r3.exit_code == 0);
    CHECK(slurp(lr).find("toth(0.01)=none") != std::string::npos);
}

TEST_CASE("simulate round trips through a snapshot file") {
    auto env_file = (g_work_dir / "window.txt").string();
    CHECK(run_cli("gen-env --env leftright --env-seed 3 --eps 0.2 --box 40 --out " + env_file)
              .exit_code == 0);

    auto direct = (g_work_dir / "direct.txt").string();
    auto via_file = (g_work_dir / "via_file.txt").string();
    CHECK(run_cli("simulate --env leftright --env-seed 3 --eps 0.2 --start 0,0,N --horizon 30 "
                  "--seed 11 --out " + direct)
              .exit_code == 0);
    CHECK(run_cli("simulate --env-file " + env_file +
                  " --start 0,0,N --horizon 30 --seed 11 --out " + via_file)
              .exit_code == 0);
    CHECK(slurp(direct) == slurp(via_file));
}

TEST_CASE("simulate then project yields nearest-neighbor site moves") {
    auto traj = (g_work_dir / "traj.txt").string();
    CHECK(run_cli("simulate --env symmetric-lr --start 0,0,N --horizon 50 --seed 2 --out " + traj)
              .exit_code == 0);
    auto proj = (g_work_dir / "proj.txt").string();
    CHECK(run_cli("project --in " + traj + " --scheme prop41 --out " + proj).exit_code == 0);

    std::ifstream is(proj);
    int prev_x = 0, prev_y = 0, x = 0, y = 0;
    bool first = true;
    int rows = 0;
    while (is >> x >> y) {
        if (!first) CHECK(std::abs(x - prev_x) + std::abs(y - prev_y) == 1);
        prev_x = x;
        prev_y = y;
        first = false;
        ++rows;
    }
    CHECK(rows == 51);
}

TEST_CASE("prop43 projection of a left-right trajectory") {
    auto traj = (g_work_dir / "traj_lr.txt").string();
    CHECK(run_cli("simulate --env leftright --env-seed 3 --eps 0.2 --start 0,0,N --horizon 60 "
                  "--seed 4 --out " + traj)
              .exit_code == 0);
    auto proj = (g_work_dir / "proj43.txt").string();
    CHECK(run_cli("project --in " + traj + " --scheme prop43 --out " + proj).exit_code == 0);

    std::ifstream is(proj);
    int prev_x = 0, prev_y = 0, x = 0, y = 0;
    bool first = true;
    int rows = 0;
    while (is >> x >> y) {
        if (!first) CHECK(std::abs(x - prev_x) + std::abs(y - prev_y) == 1);
        prev_x = x;
        prev_y = y;
        first = false;
        ++rows;
    }
    CHECK(rows == 31);
}

TEST_CASE("recurrence report on a straight-line walk is all zero") {
    // forward-probability-one rows make the identity matrix: the walker
    // never turns and never returns
    auto id = write_file("id.txt", "1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n");
    auto r = run_cli("recurrence --env homogeneous --matrix " + id.string() +
                     " --horizon 64 --ensemble 200 --seed 5 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("# prw-report-v1") != std::string::npos);
    std::istringstream rows(r.output);
    for (std::string line; std::getline(rows, line);) {
        if (line.empty() || line[0] == '#') continue;
        auto first_comma = line.find(',');
        auto second_comma = line.find(',', first_comma + 1);
        CHECK(line.substr(first_comma + 1, second_comma - first_comma - 1) == "0");
    }
}

TEST_CASE("byte reproducibility of ensemble reports") {
    std::string flags = "msd --env flr --env-seed 9 --eps 0.1 --horizon 128 --ensemble 300 "
                        "--seed 21 --format jsonl";
    auto a = run_cli(flags + " --threads 1");
    auto b = run_cli(flags + " --threads 2");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("dual-check validates the embedding") {
    auto r = run_cli("dual-check --box 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("(even, N) at (0,0) -> (0, 0, 0)") != std::string::npos);
    CHECK(r.output.find("0 violations") != std::string::npos);
}

TEST_CASE("usage and validation errors use distinct exit codes") {
    CHECK(run_cli("no-such-verb").exit_code == 2);
    CHECK(run_cli("simulate --no-such-flag 1").exit_code == 2);

    auto missing = run_cli("analyze-matrix /nonexistent/matrix.txt");
    CHECK(missing.exit_code == 1);

    auto bad = write_file("bad.txt", "1 1 1 1\n0.25 0.25 0.25 0.25\n");
    CHECK(run_cli("analyze-matrix " + bad.string()).exit_code == 1);
}

TEST_CASE("config files preload flags, command line wins") {
    auto conf = write_file("run.ini", "[msd]\nhorizon=32\nensemble=50\nseed=9\n");
    auto a = run_cli("--config " + conf.string() + " msd --env homogeneous");
    CHECK(a.exit_code == 0);
    int rows = 0;
    {
        std::istringstream is(a.output);
        for (std::string line; std::getline(is, line);)
            if (!line.empty() && line[0] != '#') ++rows;
    }
    CHECK(rows == 6); // checkpoints 1,2,4,8,16,32

    auto b = run_cli("--config " + conf.string() + " msd --env homogeneous --horizon 8");
    int rows_b = 0;
    {
        std::istringstream is(b.output);
        for (std::string line; std::getline(is, line);)
            if (!line.empty() && line[0] != '#') ++rows_b;
    }
    CHECK(rows_b == 4); // the explicit flag overrides the file
}

TEST_CASE("accept runs a single fast criterion") {
    auto r = run_cli("accept --criterion 5");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("[PASS] 5 appendix-isomorphism") != std::string::npos);
}

} // TEST_SUITE

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <path-to-prw-cli> [doctest args]\n", argv[0]);
        return 2;
    }
    g_cli_path = argv[1];
    g_work_dir = std::filesystem::temp_directory_path() / "prw_cli_tests";
    std::filesystem::create_directories(g_work_dir);

    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
