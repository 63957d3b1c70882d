#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "devur/json_io.hpp"

namespace {

std::string g_binary;
std::string g_dir;

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const std::string out_file = g_dir + "/stdout.txt";
    const std::string cmd = g_binary + " " + args + " > " + out_file + " 2> " + g_dir + "/stderr.txt";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream f(out_file);
    std::stringstream ss;
    ss << f.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

void write_file(const std::string& name, const std::string& content) {
    std::ofstream f(g_dir + "/" + name);
    f << content;
}

std::string path(const std::string& name) { return g_dir + "/" + name; }

} // namespace

TEST_CASE("md subcommand reproduces the balanced-superposition deviation") {
    write_file("sz.json", R"({"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[-1,0]]})");
    write_file("plus.json",
               R"({"kind":"pure","amplitudes":[[0.7071067811865476,0],[0.7071067811865476,0]]})");
    const auto r = run_cli("md --observable " + path("sz.json") + " --state " + path("plus.json"));
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(std::abs(j["value"].get<double>() - 1.0) < 1e-12);
    CHECK(std::abs(j["mean"].get<double>()) < 1e-12);
}

TEST_CASE("emitted reports are accepted back without loss") {
    const auto r = run_cli("md --observable pauli-z --state " + path("plus.json") + " --alpha 1.7");
    REQUIRE(r.exit_code == 0);
    using devur::io::Json;
    const Json j = Json::parse(r.stdout_text);
    const auto rep = devur::io::deviation_report_from_json(j);
    const Json again = devur::io::deviation_report_to_json(rep);
    CHECK(j.dump() == again.dump()); // bit-exact float round trip
}

TEST_CASE("identical invocations produce byte-identical output") {
    const std::string args = "witness stress --a 0.7071067811865476 --b 0.7071067811865475 "
                             "--trials 500 --seed 42";
    const auto r1 = run_cli(args);
    const auto r2 = run_cli(args);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.stdout_text == r2.stdout_text);
}

TEST_CASE("seed falls back to the environment") {
    const std::string args = "witness stress --a 0.7071067811865476 --b 0.7071067811865475 --trials 200";
    const auto direct = run_cli(args + " --seed 777");
    setenv("DEVUR_SEED", "777", 1);
    const auto via_env = run_cli(args);
    unsetenv("DEVUR_SEED");
    REQUIRE(direct.exit_code == 0);
    REQUIRE(via_env.exit_code == 0);
    CHECK(direct.stdout_text == via_env.stdout_text);
}

TEST_CASE("exit codes distinguish validation from internal failures") {
    SUBCASE("success is 0") {
        CHECK(run_cli("witness werner --a 0.70710678 --b 0.70710678").exit_code == 0);
    }
    SUBCASE("bad file is 2") {
        const auto r = run_cli("md --observable missing.json --state also-missing.json --json");
        CHECK(r.exit_code == 2);
    }
    SUBCASE("bad flag value is 2") {
        CHECK(run_cli("steering check --p 2.0 --eta 0.5").exit_code == 2);
    }
    SUBCASE("unknown arguments are 2") {
        CHECK(run_cli("md --frobnicate 1").exit_code == 2);
    }
}

TEST_CASE("werner threshold example value") {
    const auto r = run_cli("witness werner --a 0.70710678 --b 0.70710678");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(std::abs(j["threshold"].get<double>() - 0.5773503) < 1e-6);
}

TEST_CASE("steering curve emits the closed-form efficiency column") {
    const std::string out = path("fig3.csv");
    const auto r = run_cli("steering curve --alpha 1 --p-min 0.58 --p-max 1 --steps 10 --out " + out);
    REQUIRE(r.exit_code == 0);
    std::ifstream f(out);
    std::string header;
    std::getline(f, header);
    CHECK(header == "p,eta_md,eta_sd");
    std::string line;
    int rows = 0;
    while (std::getline(f, line)) {
        ++rows;
        std::stringstream ss(line);
        std::string pf, ef, sf;
        std::getline(ss, pf, ',');
        std::getline(ss, ef, ',');
        std::getline(ss, sf, ',');
        const double p = std::stod(pf);
        const double eta = std::stod(ef);
        CHECK(std::abs(eta - 1.0 / (3.0 * p * p)) < 1e-7);
        CHECK(std::stod(sf) > eta);
    }
    CHECK(rows == 10);
}

TEST_CASE("dispersion reports divergent moments as null") {
    const auto r = run_cli("contwave fdist --d1 1 --d2 3");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(std::abs(j["mean"].get<double>() - 3.0) < 1e-7);
    CHECK(j["sd"].is_null());
    CHECK(j["divergent"] == nlohmann::json::array({"sd"}));
    CHECK(j["tolerances"]["norm"].get<double>() == 1e-6);
}

TEST_CASE("every subcommand runs end to end") {
    write_file("psi8.json",
               R"({"kind":"pure","amplitudes":[[0.92387953251128674,0],[0.38268343236508977,0]]})");
    SUBCASE("relation product") {
        const auto r = run_cli("relation product --observable pauli-z --observable-b pauli-x "
                               "--state " + path("psi8.json"));
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.stdout_text);
        CHECK(j["holds"].get<bool>());
        CHECK(std::abs(j["lhs"].get<double>() - 0.25) < 1e-12);
    }
    SUBCASE("relation sum saturates with the default witness") {
        const auto r = run_cli("relation sum --observable pauli-z --observable-b pauli-x "
                               "--state " + path("psi8.json"));
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.stdout_text);
        CHECK(std::abs(j["slack"].get<double>()) < 1e-10);
    }
    SUBCASE("relation lemma with negative alpha") {
        const auto r = run_cli("relation lemma --observable pauli-z --state " + path("psi8.json") +
                               " --alpha -1.5");
        REQUIRE(r.exit_code == 0);
        CHECK(nlohmann::json::parse(r.stdout_text)["holds"].get<bool>());
    }
    SUBCASE("bound state-indep") {
        const auto r = run_cli("bound state-indep --observable pauli-z --observable-b pauli-x");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.stdout_text);
        CHECK(std::abs(j["bound"].get<double>() -
                       (std::log(2.0) - 2.0 * std::log(1.0 + std::exp(-2.0)))) < 1e-12);
    }
    SUBCASE("intelligent gaussian") {
        const auto r = run_cli("intelligent gaussian --sigma 0.7");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.stdout_text);
        CHECK(std::abs(j["sd_product"].get<double>() - 0.5) < 1e-6);
    }
    SUBCASE("contwave pareto") {
        const auto r = run_cli("contwave pareto --alpha-p 1.5 --lambda 1 --mass 0.5");
        REQUIRE(r.exit_code == 0);
        const auto j = nlohmann::json::parse(r.stdout_text);
        CHECK(j["dispersion"]["sd"].is_null());
        CHECK(j["patch"]["residual_mass"].get<double>() < 1e-8);
    }
    SUBCASE("contwave potential emits a masked csv") {
        const auto r = run_cli("contwave potential --source sqrtf --d1 1 --d2 5 --x-min 0.5 "
                               "--x-max 1.5 --step 0.01 --out " + path("v.csv"));
        REQUIRE(r.exit_code == 0);
        std::ifstream f(path("v.csv"));
        std::string header;
        std::getline(f, header);
        CHECK(header == "x,psi,density,potential");
    }
    SUBCASE("steering check and alpha-sweep") {
        const auto r = run_cli("steering check --p 1 --eta 0.34");
        REQUIRE(r.exit_code == 0);
        CHECK(nlohmann::json::parse(r.stdout_text)["violated"].get<bool>());
        const auto sweep = run_cli("steering alpha-sweep --p 1 --eta 0.5 --alphas 0.5,1.0");
        REQUIRE(sweep.exit_code == 0);
        const auto j = nlohmann::json::parse(sweep.stdout_text);
        for (const auto& row : j["rows"])
            CHECK(std::abs(row["eta_star"].get<double>() - 1.0 / 3.0) < 1e-6);
    }
    SUBCASE("witness check against a Werner state") {
        const auto r = run_cli("witness check --a 0.70710678 --b 0.70710678 --werner-p 0.9");
        REQUIRE(r.exit_code == 0);
        CHECK(nlohmann::json::parse(r.stdout_text)["entangled_by_md"].get<bool>());
    }
    SUBCASE("witness werner curve csv") {
        const auto r = run_cli("witness werner --a 0.70710678 --b 0.70710678 --curve --steps 11 "
                               "--out " + path("werner.csv"));
        REQUIRE(r.exit_code == 0);
        std::ifstream f(path("werner.csv"));
        std::string header;
        std::getline(f, header);
        CHECK(header == "p,sum_md,bound");
    }
}

TEST_CASE("tolerance overrides are echoed") {
    const auto r = run_cli("contwave dispersion --dist gaussian --scale 1 --tol-norm 1e-4 "
                           "--tol-quad-rel 1e-8");
    REQUIRE(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.stdout_text);
    CHECK(j["tolerances"]["norm"].get<double>() == 1e-4);
    CHECK(j["tolerances"]["quad_rel"].get<double>() == 1e-8);
}

int main(int argc, char** argv) {
    if (argc > 1) g_binary = argv[1];
    if (g_binary.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-devur-binary>\n");
        return 1;
    }
    char tmpl[] = "/tmp/devur_cli_XXXXXX";
    g_dir = mkdtemp(tmpl);
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
