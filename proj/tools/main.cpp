#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "experiment.hpp"
#include "r0gp/allocation.hpp"
#include "r0gp/mobility.hpp"
#include "r0gp/r0.hpp"
#include "r0gp/seir.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace r0gp;
using namespace r0gp::tools;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitSolverFailure = 3;
constexpr int kExitBadInput = 4;

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LoadedModel load_model_file(const std::string& path) {
    return load_model_json(slurp(path), fs::absolute(path).parent_path());
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty() || out_path == "-") {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw InputError("cannot write: " + out_path);
    out << text << '\n';
}

PharmaModel pharma_from(const ExperimentConfig& cfg, double budget_hint) {
    const SeirModel& base = cfg.model.require_seir("allocation");
    return build_pharma_model(
        base,
        default_interventions(base, cfg.intervention.beta_max_reduction,
                              cfg.intervention.delta_max_speedup, cfg.intervention.delta_tilde),
        budget_hint);
}

int exit_code_for(const AllocationResult& res) {
    switch (res.status) {
        case SolveStatus::optimal: return kExitOk;
        case SolveStatus::infeasible: return kExitInfeasible;
        default: return kExitSolverFailure;
    }
}

int cmd_r0(const std::string& model_path, const std::string& method, double tol) {
    const LoadedModel model = load_model_file(model_path);
    const LinearizedEpidemic lin = model.linearize_or_get();
    json out;
    std::vector<double> values;
    if (method == "eigen" || method == "all") {
        values.push_back(r0_eigen(lin));
        out["eigen"] = values.back();
    }
    if (method == "bisect" || method == "all") {
        values.push_back(r0_bisection(lin, tol));
        out["bisect"] = values.back();
    }
    if (method == "gp" || method == "all") {
        values.push_back(r0_gp(lin));
        out["gp"] = values.back();
    }
    if (values.size() > 1) {
        double lo = values[0], hi = values[0];
        for (const double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        out["max_disagreement"] = hi - lo;
    }
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_allocate(const std::string& config_path, std::optional<double> budget,
                 std::optional<double> r_max, double tau, bool abscissa,
                 const std::string& out_path) {
    if (budget.has_value() == r_max.has_value()) {
        throw InputError("exactly one of --budget and --r-max is required");
    }
    const ExperimentConfig cfg = load_config(config_path);
    const PharmaModel pm = pharma_from(cfg, budget.value_or(0.0) > 0.0 ? *budget : 1.0);

    AllocationResult res;
    if (budget && *budget == 0.0) {
        // Zero budget: nothing can be spent, so the answer is the
        // no-intervention corner without a solve.
        res.status = SolveStatus::optimal;
        res.theta_star = pm.no_intervention();
        res.cost_star = 0.0;
        res.r_star = r0_of_theta(pm.model(), res.theta_star);
        res.w_star = Eigen::VectorXd::Zero(pm.model().n);
        res.kkt_residual = 0.0;
        if (abscissa) res.abscissa_star = seir_spectral_abscissa(pm.base());
    } else if (budget && abscissa) {
        res = solve_abscissa_budget(pm.model(), *budget, pm.abscissa_shift(), cfg.solver);
    } else if (budget) {
        res = solve_budget_constrained(pm.model(), *budget, cfg.solver);
    } else {
        res = solve_r0_constrained(pm.model(), *r_max, tau, cfg.solver);
    }
    write_text(out_path, to_json(res));
    return exit_code_for(res);
}

int cmd_simulate(const std::string& config_path, const std::string& allocation_path,
                 const std::string& out_path, const std::string& metrics_path, double dt,
                 double t_max, double seed_frac, int stride) {
    const ExperimentConfig cfg = load_config(config_path);
    SeirModel model = cfg.model.require_seir("simulate");
    if (!allocation_path.empty()) {
        const json alloc = json::parse(slurp(allocation_path));
        Assignment theta;
        for (const auto& [name, value] : alloc.at("theta_star").items()) {
            theta[name] = value.get<double>();
        }
        const PharmaModel pm = pharma_from(cfg, 1.0);
        model = pm.apply(theta);
    }
    const Trajectory traj = simulate(
        model, seeded_init(model, seed_frac),
        {.dt = dt, .t_max = t_max, .record_stride = stride});
    write_trajectory_csv(out_path, traj);
    const TrajectoryMetrics metrics = trajectory_metrics(traj);
    json m;
    m["peak_infections"] = metrics.peak_infections;
    m["cumulative_infections"] = metrics.cumulative_infections;
    m["converged"] = traj.converged;
    m["provisional"] = metrics.provisional;
    m["conservation_error"] = traj.max_conservation_error;
    m["r0"] = r0_eigen(linearize(model));
    if (!metrics_path.empty()) {
        write_text(metrics_path, m.dump(2));
    } else {
        std::cout << m.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_calibrate(const std::string& model_path, double target_r0, double beta, double gamma,
                  double delta) {
    const LoadedModel model = load_model_file(model_path);
    if (!model.mobility) {
        throw InputError("calibrate requires a mobility-based model config");
    }
    const BaseRates at{beta, gamma, delta};
    const double alpha = calibrate_alpha(*model.mobility, at, model.mobility->populations,
                                         target_r0);
    const SeirModel check = make_uniform_seir(*model.mobility, at, alpha);
    json out;
    out["alpha"] = alpha;
    out["target_r0"] = target_r0;
    out["achieved_r0"] = r0_eigen(linearize(check));
    out["rates"] = {{"beta", beta}, {"gamma", gamma}, {"delta", delta}};
    std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir, double budget,
              int jobs) {
    ExperimentConfig cfg = load_config(config_path);
    if (budget > 0.0) cfg.sweep_budget = budget;
    if (jobs > 0) cfg.jobs = jobs;
    const SeirModel& base = cfg.model.require_seir("sweep");

    fs::create_directories(out_dir);
    write_text((fs::path(out_dir) / "sweep_manifest.json").string(),
               sweep_manifest_json(cfg.sweep));
    const std::vector<SweepRow> rows = run_sweep(base, cfg.sweep, cfg.sweep_budget,
                                                 cfg.intervention, cfg.solver, cfg.jobs);
    write_sweep_csv(fs::path(out_dir) / "sweep.csv", rows);

    int both_above_one = 0, r0min_better_peak = 0, r0min_better_cumulative = 0;
    for (const auto& r : rows) {
        if (r.r0_post_r0min > 1.0 && r.r0_post_absmin > 1.0) {
            ++both_above_one;
            if (r.peak_r0min < r.peak_absmin) ++r0min_better_peak;
            if (r.cumulative_r0min < r.cumulative_absmin) ++r0min_better_cumulative;
        }
    }
    json summary;
    summary["models"] = rows.size();
    summary["budget"] = cfg.sweep_budget;
    summary["both_post_r0_above_one"] = both_above_one;
    summary["r0min_lower_peak"] = r0min_better_peak;
    summary["r0min_lower_cumulative"] = r0min_better_cumulative;
    write_text((fs::path(out_dir) / "sweep_summary.json").string(), summary.dump(2));
    std::cout << summary.dump(2) << '\n';
    return kExitOk;
}

int cmd_budget_curve(const std::string& config_path, const std::string& out_dir, int jobs) {
    ExperimentConfig cfg = load_config(config_path);
    if (jobs > 0) cfg.jobs = jobs;
    cfg.model.require_seir("budget-curve");
    if (!cfg.model.mobility) {
        throw InputError("budget-curve requires a mobility-based model config");
    }
    fs::create_directories(out_dir);
    const std::vector<BudgetCurveRow> rows =
        run_budget_curve(*cfg.model.mobility, cfg.model.alpha, cfg.curve_models, cfg.budgets,
                         cfg.intervention, cfg.solver, cfg.jobs);
    write_budget_curve_csv(fs::path(out_dir) / "budget_curve.csv", rows);
    std::cout << "wrote " << rows.size() << " rows\n";
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"R0 analysis and resource allocation for compartmental epidemic models"};
    app.require_subcommand(1);

    auto* r0_cmd = app.add_subcommand("r0", "Compute R0 by one or all characterizations");
    std::string r0_model, r0_method = "all";
    double r0_tol = 1e-9;
    r0_cmd->add_option("--model", r0_model, "model JSON file")->required();
    r0_cmd->add_option("--method", r0_method, "eigen|bisect|gp|all")
        ->check(CLI::IsMember({"eigen", "bisect", "gp", "all"}));
    r0_cmd->add_option("--tol", r0_tol, "bisection tolerance");

    auto* alloc_cmd = app.add_subcommand("allocate", "Solve a resource-allocation problem");
    std::string alloc_config, alloc_out;
    std::optional<double> alloc_budget, alloc_rmax;
    double alloc_tau = 0.0;
    bool alloc_abscissa = false;
    alloc_cmd->add_option("--config", alloc_config, "experiment config JSON")->required();
    alloc_cmd->add_option("--budget", alloc_budget, "budget c_max (minimize R0)");
    alloc_cmd->add_option("--r-max", alloc_rmax, "R0 cap (minimize cost)");
    alloc_cmd->add_option("--tau", alloc_tau, "R0-cap tolerance");
    alloc_cmd->add_flag("--abscissa", alloc_abscissa,
                        "minimize the spectral abscissa instead of R0");
    alloc_cmd->add_option("--out", alloc_out, "result JSON path (default stdout)");

    auto* sim_cmd = app.add_subcommand("simulate", "Integrate the nonlinear dynamics");
    std::string sim_config, sim_alloc, sim_out, sim_metrics;
    double sim_dt = 0.05, sim_tmax = 5000.0, sim_seed_frac = 1e-4;
    int sim_stride = 20;
    sim_cmd->add_option("--config", sim_config, "experiment config JSON")->required();
    sim_cmd->add_option("--allocation", sim_alloc, "apply an AllocationResult JSON");
    sim_cmd->add_option("--out", sim_out, "trajectory CSV path")->required();
    sim_cmd->add_option("--metrics-out", sim_metrics, "metrics JSON path (default stdout)");
    sim_cmd->add_option("--dt", sim_dt, "step size (days)");
    sim_cmd->add_option("--t-max", sim_tmax, "horizon (days)");
    sim_cmd->add_option("--seed-frac", sim_seed_frac, "initial exposed fraction of s0");
    sim_cmd->add_option("--stride", sim_stride, "record every k-th step");

    auto* cal_cmd = app.add_subcommand("calibrate", "Report the contact-scale calibration");
    std::string cal_model;
    double cal_target = 2.5, cal_beta = 0.1, cal_gamma = 0.2, cal_delta = 0.1;
    cal_cmd->add_option("--model", cal_model, "model JSON file")->required();
    cal_cmd->add_option("--target-r0", cal_target, "calibration target");
    cal_cmd->add_option("--beta", cal_beta, "calibration beta");
    cal_cmd->add_option("--gamma", cal_gamma, "calibration gamma");
    cal_cmd->add_option("--delta", cal_delta, "calibration delta");

    auto* sweep_cmd = app.add_subcommand("sweep", "Budget allocation + simulation over a rate grid");
    std::string sweep_config, sweep_out_dir;
    double sweep_budget = 0.0;
    int sweep_jobs = 0;
    sweep_cmd->add_option("--config", sweep_config, "experiment config JSON")->required();
    sweep_cmd->add_option("--out-dir", sweep_out_dir, "output directory")->required();
    sweep_cmd->add_option("--budget", sweep_budget, "override the sweep budget");
    sweep_cmd->add_option("--jobs", sweep_jobs, "worker threads");

    auto* curve_cmd = app.add_subcommand("budget-curve",
                                         "Allocations across a budget grid for named models");
    std::string curve_config, curve_out_dir;
    int curve_jobs = 0;
    curve_cmd->add_option("--config", curve_config, "experiment config JSON")->required();
    curve_cmd->add_option("--out-dir", curve_out_dir, "output directory")->required();
    curve_cmd->add_option("--jobs", curve_jobs, "worker threads");

    CLI11_PARSE(app, argc, argv);

    if (r0_cmd->parsed()) return cmd_r0(r0_model, r0_method, r0_tol);
    if (alloc_cmd->parsed()) {
        return cmd_allocate(alloc_config, alloc_budget, alloc_rmax, alloc_tau, alloc_abscissa,
                            alloc_out);
    }
    if (sim_cmd->parsed()) {
        return cmd_simulate(sim_config, sim_alloc, sim_out, sim_metrics, sim_dt, sim_tmax,
                            sim_seed_frac, sim_stride);
    }
    if (cal_cmd->parsed()) {
        return cmd_calibrate(cal_model, cal_target, cal_beta, cal_gamma, cal_delta);
    }
    if (sweep_cmd->parsed()) {
        return cmd_sweep(sweep_config, sweep_out_dir, sweep_budget, sweep_jobs);
    }
    if (curve_cmd->parsed()) return cmd_budget_curve(curve_config, curve_out_dir, curve_jobs);
    return kExitBadInput;
}

int error_json(const char* type, const std::string& message, int code) {
    json err;
    err["error"] = {{"type", type}, {"message", message}};
    std::cerr << err.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const InputError& e) {
        return error_json("input", e.what(), kExitBadInput);
    } catch (const ContractError& e) {
        return error_json("contract", e.what(), kExitBadInput);
    } catch (const SolverError& e) {
        return error_json("solver", e.what(), kExitSolverFailure);
    } catch (const std::exception& e) {
        return error_json("internal", e.what(), kExitSolverFailure);
    }
}
