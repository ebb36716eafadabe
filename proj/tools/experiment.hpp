#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "r0gp/allocation.hpp"
#include "r0gp/mobility.hpp"
#include "r0gp/r0.hpp"
#include "r0gp/seir.hpp"

namespace r0gp::tools {

/// Model source resolved from a config document: either a SEIR model (rates +
/// mobility + calibration) or a directly supplied (F, V) pair.
struct LoadedModel {
    std::optional<SeirModel> seir;
    std::optional<LinearizedEpidemic> linearized;
    std::optional<MobilityData> mobility;
    double alpha = 0.0;

    const SeirModel& require_seir(const char* what) const;
    LinearizedEpidemic linearize_or_get() const;
};

struct InterventionConfig {
    double beta_max_reduction = 0.9;
    double delta_max_speedup = 2.0;
    double delta_tilde = 2.0;
};

/// Parsed run configuration; CLI flags override individual fields after parse.
struct ExperimentConfig {
    LoadedModel model;
    InterventionConfig intervention;
    SolverOptions solver;
    std::uint64_t seed = 7;
    SweepSpec sweep = SweepSpec::default_grid();
    double sweep_budget = 0.1;
    std::vector<double> budgets{0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0};
    std::vector<BaseRates> curve_models{{0.05, 0.2, 0.2}, {0.1, 0.2, 0.1}, {0.15, 0.2, 0.075}};
    int jobs = 4;
};

/// Loads a config JSON document (path may be empty for an empty document);
/// the model section is resolved eagerly so file errors surface here.
ExperimentConfig load_config(const std::string& path);

/// Parses only the model section of a config document.
LoadedModel load_model_json(const std::string& json_text,
                            const std::filesystem::path& base_dir);

double seir_spectral_abscissa(const SeirModel& m);

/// One sweep model: budget-constrained allocation under both objectives,
/// post-intervention spectra, and nonlinear simulation metrics.
struct SweepRow {
    int index = 0;
    double beta = 0, gamma = 0, delta = 0;
    double r0_pre = 0;
    double r0_post_r0min = 0, abscissa_post_r0min = 0;
    double cost_r0min = 0, vaccine_cost_r0min = 0, antidote_cost_r0min = 0;
    double peak_r0min = 0, cumulative_r0min = 0;
    double r0_post_absmin = 0, abscissa_post_absmin = 0;
    double cost_absmin = 0, vaccine_cost_absmin = 0, antidote_cost_absmin = 0;
    double peak_absmin = 0, cumulative_absmin = 0;
    /// Solver-quality audit: worst KKT residual of the two allocation solves
    /// and worst population-conservation error of the two simulations.
    double max_kkt = 0, max_conservation = 0;
};

std::vector<SweepRow> run_sweep(const SeirModel& base, const SweepSpec& spec, double c_max,
                                const InterventionConfig& intervention,
                                const SolverOptions& solver, int jobs);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

/// One (model, budget, objective) cell of the budget-curve experiment.
struct BudgetCurveRow {
    int model_index = 0;
    double beta = 0, gamma = 0, delta = 0;
    double budget = 0;
    std::string objective;  // "r0" or "abscissa"
    double r0_post = 0, abscissa_post = 0;
    double cost = 0, vaccine_cost = 0, antidote_cost = 0, vaccine_share = 0;
    double peak = 0, cumulative = 0;
    double kkt = 0, conservation = 0;
};

std::vector<BudgetCurveRow> run_budget_curve(const MobilityData& mob, double alpha,
                                             const std::vector<BaseRates>& models,
                                             const std::vector<double>& budgets,
                                             const InterventionConfig& intervention,
                                             const SolverOptions& solver, int jobs);

void write_budget_curve_csv(const std::filesystem::path& path,
                            const std::vector<BudgetCurveRow>& rows);

}  // namespace r0gp::tools
