// qkdopt: batch driver for the entanglement-QKD rate optimizer.
//
// Rate/probability boundary: dark-count inputs on optimize/pass/budget/
// oracle are rates in counts per second and are converted to per-window
// probabilities exactly once, here, using --window. The sweep grid is the
// exception: its --d values are per-window probabilities, matching the
// model's domain.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qkdopt/csv.hpp"
#include "qkdopt/errors.hpp"
#include "qkdopt/key_rate.hpp"
#include "qkdopt/link_apps.hpp"
#include "qkdopt/model.hpp"
#include "qkdopt/monte_carlo.hpp"
#include "qkdopt/optimizer.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

json metrics_json(const qkdopt::KeyMetrics& m) {
    return {{"q_coinc", m.q_coinc},
            {"delta1", m.delta1},
            {"delta2", m.delta2},
            {"skr_per_window", m.skr_per_window},
            {"skr_per_second", m.skr_per_second},
            {"delta_defined", m.delta_defined}};
}

json record_json(const qkdopt::OptimumRecord& rec) {
    return {{"eps_star", rec.eps_star.epsilon},
            {"p_tf_star", rec.p_tf_star},
            {"mu", rec.mu},
            {"trunc_converged", rec.trunc_converged},
            {"metrics", metrics_json(rec.metrics)}};
}

json constants_json(const qkdopt::ModelConstants& k) {
    return {{"A", k.a}, {"B", k.b}, {"C", k.c}, {"D", k.d_const}, {"E", k.e}};
}

qkdopt::ModelConstants load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open constants file");
    json j = json::parse(in);
    return {j.at("A").get<double>(), j.at("B").get<double>(), j.at("C").get<double>(),
            j.at("D").get<double>(), j.at("E").get<double>()};
}

// "lo:hi:step" (inclusive endpoints within half a step) or "v1,v2,...".
std::vector<double> parse_range(const std::string& spec) {
    std::vector<double> values;
    if (spec.find(':') != std::string::npos) {
        double lo, hi, step;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0)
            throw std::runtime_error("bad range spec '" + spec + "', want lo:hi:step");
        for (double v = lo; v <= hi + 0.5 * step; v += step)
            values.push_back(std::min(v, hi));
    } else {
        std::size_t pos = 0;
        while (pos <= spec.size()) {
            const std::size_t comma = spec.find(',', pos);
            const std::string tok = spec.substr(pos, comma - pos);
            if (tok.empty()) throw std::runtime_error("bad value list '" + spec + "'");
            values.push_back(std::stod(tok));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    if (values.empty()) throw std::runtime_error("empty range spec '" + spec + "'");
    return values;
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error(out_path + ": cannot open for writing");
        out << j.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entanglement-QKD coincidence-rate optimizer"};
    app.require_subcommand(1);

    int trunc = 3;
    double window = 1.0e-9;
    std::string out_path;
    app.add_option("--trunc", trunc, "Fock truncation per mode")->capture_default_str();

    // ---- optimize ----
    auto* optimize = app.add_subcommand("optimize", "Optimal squeezing for one link");
    double eta_a = 1.0, eta_b = 1.0, dark_a_cps = 0.0, dark_b_cps = 0.0;
    optimize->add_option("--eta-a", eta_a, "Alice arm efficiency")->required();
    optimize->add_option("--eta-b", eta_b, "Bob arm efficiency")->required();
    optimize->add_option("--da", dark_a_cps, "Alice dark count rate (c/s)");
    optimize->add_option("--db", dark_b_cps, "Bob dark count rate (c/s)");
    optimize->add_option("--window", window, "Coincidence window (s)")->capture_default_str();
    optimize->add_option("--out", out_path, "Write JSON here instead of stdout");

    // ---- sweep ----
    auto* sweep = app.add_subcommand("sweep", "Optimal-coincidence grid sweep (CSV)");
    std::string eta_spec, d_spec;
    sweep->add_option("--eta", eta_spec, "Efficiencies, lo:hi:step or comma list")->required();
    sweep->add_option("--d", d_spec, "Per-window dark probabilities, lo:hi:step or list")
        ->required();
    sweep->add_option("--out", out_path, "CSV output path (default stdout)");

    // ---- model-eval ----
    auto* model_eval = app.add_subcommand("model-eval", "Closed-form optimal P_tf");
    double me_da = 0.0, me_db = 0.0;
    std::string constants_path;
    model_eval->add_option("--eta-a", eta_a, "Alice arm efficiency")->required();
    model_eval->add_option("--eta-b", eta_b, "Bob arm efficiency")->required();
    model_eval->add_option("--da", me_da, "Alice per-window dark probability");
    model_eval->add_option("--db", me_db, "Bob per-window dark probability");
    model_eval->add_option("--constants", constants_path, "Constants JSON (A..E)");
    model_eval->add_option("--out", out_path, "Write JSON here instead of stdout");

    // ---- refit ----
    auto* refit = app.add_subcommand("refit", "Refit model constants to a sweep CSV");
    std::string sweep_path;
    refit->add_option("--sweep", sweep_path, "Sweep CSV input")->required();
    refit->add_option("--out", out_path, "Write constants JSON here");

    // ---- budget ----
    auto* budget = app.add_subcommand("budget", "Loss budgets for a detector catalog");
    std::string catalog_path, duration_spec = "3600";
    double key_target = 50000.0;
    double budget_window = 0.0;
    budget->add_option("--catalog", catalog_path, "Detector catalog CSV")->required();
    budget->add_option("--duration", duration_spec, "Seconds, or 'asymptotic'")
        ->capture_default_str();
    budget->add_option("--target", key_target, "Key target (bits)")->capture_default_str();
    budget->add_option("--window", budget_window,
                       "Coincidence window (s); default 2x detector time resolution");
    budget->add_option("--out", out_path, "Write table here instead of stdout");

    // ---- pass ----
    auto* pass = app.add_subcommand("pass", "Satellite-pass key estimate from a profile CSV");
    std::string profile_path, pass_mode = "both";
    double ground_eta = 1.0, sat_qe = 0.5, sat_dark_cps = 100.0, pass_window = 0.5e-9;
    pass->add_option("--profile", profile_path, "Pass profile CSV")->required();
    pass->add_option("--mode", pass_mode, "variable | fixed | both")->capture_default_str();
    pass->add_option("--ground-eta", ground_eta, "Ground arm channel efficiency")
        ->capture_default_str();
    pass->add_option("--sat-qe", sat_qe, "Detector quantum efficiency")->capture_default_str();
    pass->add_option("--sat-dark-cps", sat_dark_cps, "Intrinsic detector darks (c/s)")
        ->capture_default_str();
    pass->add_option("--window", pass_window, "Coincidence window (s)")->capture_default_str();
    pass->add_option("--out", out_path, "Write JSON here instead of stdout");

    // ---- oracle ----
    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo check of Q and delta1");
    double or_eps = -1.0;
    long samples = 1000000;
    std::uint64_t seed = 1;
    oracle->add_option("--eta-a", eta_a, "Alice arm efficiency")->required();
    oracle->add_option("--eta-b", eta_b, "Bob arm efficiency")->required();
    oracle->add_option("--da", dark_a_cps, "Alice dark count rate (c/s)");
    oracle->add_option("--db", dark_b_cps, "Bob dark count rate (c/s)");
    oracle->add_option("--eps", or_eps, "Squeezing parameter; optimized when omitted");
    oracle->add_option("--samples", samples, "Sample count")->capture_default_str();
    oracle->add_option("--seed", seed, "RNG seed")->capture_default_str();
    oracle->add_option("--window", window, "Coincidence window (s)")->capture_default_str();
    oracle->add_option("--out", out_path, "Write JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*optimize) {
            qkdopt::LinkParams link{eta_a, eta_b, dark_a_cps * window, dark_b_cps * window,
                                    window};
            try {
                const auto rec = qkdopt::optimal_epsilon(link, trunc);
                emit(record_json(rec), out_path);
            } catch (const qkdopt::InfeasibleLinkError& e) {
                emit({{"error", "infeasible-link"},
                      {"detail", e.what()},
                      {"best", record_json(e.best())}},
                     out_path);
                return kExitInfeasible;
            }
        } else if (*sweep) {
            const auto etas = parse_range(eta_spec);
            const auto ds = parse_range(d_spec);
            const auto rows = qkdopt::sweep_grid(etas, ds, trunc);
            if (out_path.empty())
                qkdopt::write_sweep_csv(std::cout, rows);
            else
                qkdopt::write_sweep_csv(out_path, rows);
        } else if (*model_eval) {
            const qkdopt::ModelConstants k =
                constants_path.empty() ? qkdopt::ModelConstants{} : load_constants(constants_path);
            const double p_tf = qkdopt::eval_optimal_tf(eta_a, eta_b, me_da, me_db, k);
            emit({{"p_tf", p_tf},
                  {"feasible", qkdopt::model_feasible(p_tf)},
                  {"noise_budget",
                   (eta_a > 0.0 || eta_b > 0.0) ? json(qkdopt::noise_budget(eta_a, eta_b))
                                                : json()}},
                 out_path);
        } else if (*refit) {
            const auto rows = qkdopt::read_sweep_csv(sweep_path);
            const auto result = qkdopt::refit_constants(rows);
            emit({{"constants", constants_json(result.constants)},
                  {"rms_refit", result.rms_refit},
                  {"rms_paper", result.rms_paper},
                  {"points_used", result.points_used}},
                 out_path);
        } else if (*budget) {
            const auto catalog = qkdopt::read_detector_catalog_csv(catalog_path);
            const qkdopt::BudgetDuration duration =
                (duration_spec == "asymptotic") ? qkdopt::BudgetDuration::Asymptotic()
                                                : qkdopt::BudgetDuration::Seconds(
                                                      std::stod(duration_spec));
            json table = json::array();
            for (const auto& det : catalog) {
                json row = {{"name", det.name}};
                try {
                    const auto b =
                        qkdopt::loss_budget(det, duration, key_target, budget_window, trunc);
                    row["channel_db"] = b.channel_db;
                    row["with_detectors_db"] = b.with_detectors_db;
                    row["hit_search_cap"] = b.hit_search_cap;
                    row["feasible"] = true;
                } catch (const qkdopt::InfeasibleDetectorError&) {
                    row["feasible"] = false;
                }
                table.push_back(row);
            }
            emit(table, out_path);
        } else if (*pass) {
            qkdopt::PassProfile profile;
            profile.samples = qkdopt::read_pass_profile_csv(profile_path);
            profile.ground_channel_eta = ground_eta;
            profile.window_s = pass_window;
            const qkdopt::SatelliteDetector det{sat_qe, sat_dark_cps};
            if (pass_mode == "both") {
                const auto report = qkdopt::pass_report(profile, det, trunc);
                emit({{"total_key_variable", report.total_key_variable},
                      {"total_key_fixed", report.total_key_fixed},
                      {"additional_key", report.additional_key},
                      {"percent_increase", report.percent_increase},
                      {"usable_seconds_variable", report.usable_seconds_variable},
                      {"usable_seconds_fixed", report.usable_seconds_fixed}},
                     out_path);
            } else if (pass_mode == "variable" || pass_mode == "fixed") {
                const auto mode = (pass_mode == "variable") ? qkdopt::PassMode::Variable
                                                            : qkdopt::PassMode::Fixed;
                const auto res = qkdopt::simulate_pass(profile, mode, det, trunc);
                emit({{"total_key_bits", res.total_key_bits},
                      {"usable_seconds", res.usable_seconds},
                      {"eps_fixed", res.eps_fixed}},
                     out_path);
            } else {
                throw std::runtime_error("pass: bad --mode '" + pass_mode + "'");
            }
        } else if (*oracle) {
            qkdopt::LinkParams link{eta_a, eta_b, dark_a_cps * window, dark_b_cps * window,
                                    window};
            double eps = or_eps;
            if (eps < 0.0) {
                qkdopt::OptimizeOptions opts;
                opts.check_convergence = false;
                eps = qkdopt::optimal_epsilon(link, trunc, opts).eps_star.epsilon;
            }
            const auto state = qkdopt::spdc_state({eps}, trunc);
            const auto analytic = qkdopt::compute_metrics(state, link);
            const auto mc = qkdopt::mc_metrics(state, link, samples, seed);
            emit({{"eps", eps},
                  {"analytic", metrics_json(analytic)},
                  {"mc",
                   {{"q", mc.q},
                    {"q_se", mc.q_se},
                    {"delta1", mc.delta1},
                    {"delta1_se", mc.delta1_se},
                    {"samples", mc.samples},
                    {"coincidences", mc.coincidences}}},
                  {"q_sigma", mc.q_se > 0.0 ? (mc.q - analytic.q_coinc) / mc.q_se : 0.0},
                  {"delta1_sigma", mc.delta1_se > 0.0
                                       ? (mc.delta1 - analytic.delta1) / mc.delta1_se
                                       : 0.0}},
                 out_path);
        }
    } catch (const qkdopt::InfeasibleLinkError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
