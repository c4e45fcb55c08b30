#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "qkdopt/csv.hpp"
#include "qkdopt/model.hpp"
#include "qkdopt/optimizer.hpp"

using nlohmann::json;

namespace {

std::string g_cli;  // path to the qkdopt binary, from argv[1]

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run(const std::string& args) {
    const std::string out_file = "cli_stdout_tmp.txt";
    const std::string cmd = g_cli + " " + args + " > " + out_file + " 2> cli_stderr_tmp.txt";
    const int rc = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    result.stdout_text = ss.str();
    return result;
}

}  // namespace

TEST_CASE("optimize emits an OptimumRecord matching the library") {
    const auto r = run("optimize --eta-a 1 --eta-b 1 --da 0 --db 0 --window 3.5e-9");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    const qkdopt::LinkParams link{1.0, 1.0, 0.0, 0.0, 3.5e-9};
    const auto rec = qkdopt::optimal_epsilon(link, 3);
    CHECK(j.at("p_tf_star").get<double>() ==
          doctest::Approx(rec.p_tf_star).epsilon(1e-9));
    CHECK(j.at("eps_star").get<double>() ==
          doctest::Approx(rec.eps_star.epsilon).epsilon(1e-9));
    CHECK(j.at("metrics").at("skr_per_second").get<double>() > 0.0);
}

TEST_CASE("optimize on a dead link exits 2 with diagnostics") {
    const auto r = run("optimize --eta-a 0 --eta-b 0");
    CHECK(r.exit_code == 2);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("error") == "infeasible-link");
    CHECK(j.contains("best"));
}

TEST_CASE("missing flag exits 1") {
    const auto r = run("optimize --eta-a 1");
    CHECK(r.exit_code == 1);
}

TEST_CASE("unknown subcommand exits 1") {
    const auto r = run("frobnicate");
    CHECK(r.exit_code == 1);
}

TEST_CASE("sweep row count and CSV shape") {
    const auto r = run("sweep --eta 0.1:1:0.05 --d 0,1e-4 --out cli_sweep_tmp.csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = qkdopt::read_sweep_csv("cli_sweep_tmp.csv");
    CHECK(rows.size() == 38);
    std::ifstream in("cli_sweep_tmp.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "eta,d,eps_star,p_tf_star,skr_per_window,mu,feasible");
    std::remove("cli_sweep_tmp.csv");
}

TEST_CASE("model-eval agrees with the library") {
    const auto r = run("model-eval --eta-a 0.8 --eta-b 0.6 --da 1e-3 --db 2e-3");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("p_tf").get<double>() ==
          doctest::Approx(qkdopt::eval_optimal_tf(0.8, 0.6, 1e-3, 2e-3)).epsilon(1e-10));
    CHECK(j.at("noise_budget").get<double>() ==
          doctest::Approx(qkdopt::noise_budget(0.8, 0.6)).epsilon(1e-10));
}

TEST_CASE("sweep output round-trips through refit on synthetic data") {
    // Synthetic sweep from the model itself; refit must reproduce A..E.
    std::vector<qkdopt::SweepRow> rows;
    for (int i = 0; i <= 45; ++i)
        for (double d : {0.0, 1e-4, 1e-3}) {
            qkdopt::SweepRow row;
            row.eta = std::min(0.1 + 0.02 * i, 1.0);
            row.d = d;
            row.p_tf_star = qkdopt::eval_optimal_tf(row.eta, row.eta, d, d);
            row.feasible = row.p_tf_star > 0.0;
            rows.push_back(row);
        }
    qkdopt::write_sweep_csv("cli_synth_tmp.csv", rows);
    const auto r = run("refit --sweep cli_synth_tmp.csv");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    const qkdopt::ModelConstants truth;
    CHECK(j.at("constants").at("A").get<double>() == doctest::Approx(truth.a).epsilon(1e-5));
    CHECK(j.at("constants").at("E").get<double>() == doctest::Approx(truth.e).epsilon(1e-4));
    CHECK(j.at("rms_refit").get<double>() < 1e-9);
    std::remove("cli_synth_tmp.csv");
}

TEST_CASE("malformed CSV exits 1 naming row and column") {
    {
        std::ofstream out("cli_bad_tmp.csv");
        out << "eta,d,eps_star,p_tf_star,skr_per_window,mu,feasible\n"
            << "0.5,0,0.1,bogus,1e-3,2e-2,1\n";
    }
    const auto r = run("refit --sweep cli_bad_tmp.csv");
    CHECK(r.exit_code == 1);
    std::remove("cli_bad_tmp.csv");
}

TEST_CASE("pass report has nonnegative percent increase") {
    {
        std::ofstream out("cli_pass_tmp.csv");
        out << "t_s,loss_db,background_cps\n";
        for (int i = 0; i < 6; ++i)
            out << 10 * i << "," << (40.0 + 2.0 * i) << ",100\n";
    }
    const auto r = run("pass --profile cli_pass_tmp.csv --mode both");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("percent_increase").get<double>() >= 0.0);
    CHECK(j.at("total_key_variable").get<double>() >=
          j.at("total_key_fixed").get<double>() - 1e-9);
    std::remove("cli_pass_tmp.csv");
}

TEST_CASE("oracle is deterministic for a fixed seed") {
    const std::string args =
        "oracle --eta-a 0.5 --eta-b 0.5 --da 0 --db 0 --eps 0.1 --samples 20000 --seed 7";
    const auto r1 = run(args);
    const auto r2 = run(args);
    REQUIRE(r1.exit_code == 0);
    CHECK(r1.stdout_text == r2.stdout_text);
    const json j = json::parse(r1.stdout_text);
    CHECK(std::abs(j.at("q_sigma").get<double>()) < 4.0);
}

TEST_CASE("budget runs a small catalog") {
    {
        std::ofstream out("cli_catalog_tmp.csv");
        out << "name,wavelength_nm,time_resolution_ps,efficiency,dark_cps\n"
            << "Si-SPAD thin,550,35,0.52,300\n";
    }
    const auto r = run("budget --catalog cli_catalog_tmp.csv --duration 3600 --target 50000");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    REQUIRE(j.is_array());
    CHECK(j[0].at("feasible").get<bool>());
    CHECK(j[0].at("channel_db").get<double>() > 0.0);
    std::remove("cli_catalog_tmp.csv");
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        --argc;
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-qkdopt>\n");
        return 1;
    }
    doctest::Context ctx(argc, argv);
    const int rc = ctx.run();
    std::remove("cli_stdout_tmp.txt");
    std::remove("cli_stderr_tmp.txt");
    return rc;
}
