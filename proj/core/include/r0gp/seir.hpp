#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "r0gp/matrix.hpp"
#include "r0gp/r0.hpp"

namespace r0gp {

/// Multigroup SEIR model. Group i obeys
///   sdot_i = -beta_i s_i (A z)_i        edot_i =  beta_i s_i (A z)_i - gamma_i e_i
///   zdot_i =  gamma_i e_i - delta_i z_i rdot_i =  delta_i z_i
/// with disease-free equilibrium (s0, 0, 0, 0).
struct SeirModel {
    Eigen::VectorXd beta;    ///< transmission rates (1/day)
    Eigen::VectorXd gamma;   ///< incubation rates (1/day)
    Eigen::VectorXd delta;   ///< recovery rates (1/day)
    SquareMatrix contacts;   ///< A >= 0, inter-group contact rates
    Eigen::VectorXd s0;      ///< susceptibles at the disease-free equilibrium

    Eigen::Index groups() const { return beta.size(); }
    void validate() const;
};

/// (F, V) blocks of the 2n-dimensional infected subsystem x = (e, z):
/// F = [[0, diag(beta) diag(s0) A], [0, 0]],
/// V = [[-diag(gamma), 0], [diag(gamma), -diag(delta)]].
LinearizedEpidemic linearize(const SeirModel& m);

struct SeirState {
    Eigen::VectorXd s, e, z, r;
};

/// Seeds e_i = exposed_frac * s0_i, s_i = s0_i - e_i, z = r = 0.
SeirState seeded_init(const SeirModel& m, double exposed_frac = 1e-4);

struct SimulateOptions {
    double dt = 0.05;      ///< days
    double t_max = 5000.0;  ///< days
    /// Convergence floor for total infections, as a fraction of population.
    double infection_floor_frac = 1e-6;
    /// Keep every k-th step in the stored trajectory (metrics stay exact).
    int record_stride = 1;
};

struct Trajectory {
    Eigen::Index groups = 0;
    std::vector<double> times;
    std::vector<Eigen::VectorXd> states;  ///< stacked (s, e, z, r), length 4n
    bool converged = false;
    /// Exact step-level running peak of total infections sum(e + z).
    double peak_infections = 0.0;
    double peak_time = 0.0;
    Eigen::VectorXd final_state;
    double total_population = 0.0;  ///< at the initial state
    double s0_total = 0.0;          ///< model equilibrium susceptibles
    double max_conservation_error = 0.0;
};

/// Fixed-step classical 4th-order integration until t_max, or earlier once
/// total infections fall below the floor while decreasing.
Trajectory simulate(const SeirModel& m, const SeirState& init, const SimulateOptions& opts = {});

struct TrajectoryMetrics {
    double peak_infections = 0.0;
    /// Total ever infected: sum(s0) minus final sum(s).
    double cumulative_infections = 0.0;
    /// Set when the trajectory did not converge before t_max.
    bool provisional = false;
};

TrajectoryMetrics trajectory_metrics(const Trajectory& t);

/// CSV columns: t, s[i]..., e[i]..., z[i]..., r[i]... (one header line).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t);

/// General compartmental vector fields xdot = f + v (infected), ydot = g.
struct CompartmentalFields {
    Eigen::Index n_infected = 0;
    Eigen::Index n_noninfected = 0;
    using Field = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, const Eigen::VectorXd& y)>;
    Field new_infections;  ///< f
    Field transitions;     ///< v
    Field noninfected;     ///< g
};

/// The SEIR dynamics split as x = (e, z), y = (s, r).
CompartmentalFields seir_fields(const SeirModel& m);

struct ConditionReport {
    bool pass = true;
    std::string detail;  ///< counterexample description when failed
};

struct AssumptionReport {
    ConditionReport new_infections_nonneg;   ///< f >= 0 everywhere sampled
    ConditionReport zero_when_disease_free;  ///< f(0,y) = 0 and v(0,y) = 0
    ConditionReport no_outflow_from_empty_infected;     ///< x_i = 0 => v_i >= 0
    ConditionReport no_outflow_from_empty_noninfected;  ///< y_j = 0 => g_j >= 0

    bool regularity_pass() const;

    /// Stability of the no-new-infection equilibrium, when a candidate y*
    /// was supplied: spectral abscissa of the finite-difference Jacobian of
    /// (v, g) at (0, y*).
    bool has_equilibrium_check = false;
    double equilibrium_abscissa = 0.0;
    bool equilibrium_hurwitz = false;
};

/// Sample-based checks of the compartmental-model regularity conditions, and
/// (optionally) the stability of the disease-free equilibrium at y_star.
AssumptionReport validate_assumptions(
    const CompartmentalFields& fields,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& samples,
    const std::optional<Eigen::VectorXd>& y_star = std::nullopt,
    double tol = 1e-9);

}  // namespace r0gp
