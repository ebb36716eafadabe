#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "r0gp/gp.hpp"
#include "r0gp/r0.hpp"
#include "r0gp/seir.hpp"

namespace r0gp {

/// Diagonal decay written as a positive constant minus a posynomial:
/// V_d,i(theta) = base - decrement(theta), with base > decrement on the
/// feasible set. Lets interventions that subtract from a rate stay within
/// posynomial rules (the decrement moves to the constraint numerator).
struct DecrementEntry {
    double base = 0.0;
    Posynomial decrement;
};

/// V_d,i(theta): either a monomial or a decremented constant.
using DiagonalEntry = std::variant<Monomial, DecrementEntry>;

/// Resource-dependent linearized epidemic: F(theta), V_od(theta) elementwise
/// posynomial (absent = structural zero), V_d(theta) per-entry monomial or
/// decrement, a cost c(theta) = cost_posy(theta) - cost_offset, constraints
/// h(theta) <= 1, and mandatory positive box bounds on every resource.
struct ResourceModel {
    Eigen::Index n = 0;
    std::vector<std::string> theta_names;
    std::vector<std::vector<std::optional<Posynomial>>> F_expr;    // n x n
    std::vector<std::vector<std::optional<Posynomial>>> Vod_expr;  // n x n, empty diagonal
    std::vector<DiagonalEntry> Vd_expr;                            // n
    Posynomial cost_posy = Posynomial::constant(1.0);
    double cost_offset = 1.0;  ///< true cost = cost_posy(theta) - cost_offset
    std::vector<Posynomial> constraints;  ///< h(theta) <= 1
    std::map<std::string, std::pair<double, double>> theta_bounds;

    static ResourceModel constant(const LinearizedEpidemic& lin);

    double true_cost(const Assignment& theta) const {
        return cost_posy.eval(theta) - cost_offset;
    }

    /// Structural validation plus decrement positivity (exact at
    /// sign-consistent corners, sampled otherwise) and a sampled Hurwitz
    /// spot-check of V(theta).
    void validate() const;

    /// Numeric (F, V) at a feasible theta.
    LinearizedEpidemic instantiate(const Assignment& theta) const;

    /// Bounds satisfied (within tol) and h(theta) <= 1 + tol.
    bool is_feasible(const Assignment& theta, double tol = 1e-6) const;
};

/// R0 as a function of the resource vector: rho(F(theta) V(theta)^{-1}).
/// Throws ContractError for infeasible theta or non-Hurwitz V(theta).
double r0_of_theta(const ResourceModel& model, const Assignment& theta);

/// Rows of the map p(r, w, theta) <= 1 in variables r, w[i], and theta.
/// Monomial diagonal: [(F + r V_od) w]_i / (r V_d,i(theta) w_i).
/// Decrement diagonal: ([(F + r V_od) w]_i + r Delta_i(theta) w_i) / (r base_i w_i).
/// Vacuous rows (empty numerator) are omitted.
std::vector<Posynomial> build_p_constraint(const ResourceModel& model);

/// The budget constraint c(theta) <= c_max in posynomial form:
/// cost_posy(theta) / (c_max + cost_offset) <= 1.
Posynomial build_budget_row(const ResourceModel& model, double c_max);

struct AllocationResult {
    SolveStatus status = SolveStatus::infeasible;
    Assignment theta_star;
    double r_star = std::numeric_limits<double>::quiet_NaN();
    double cost_star = std::numeric_limits<double>::quiet_NaN();
    Eigen::VectorXd w_star;
    double tau_used = 0.0;
    /// Set by the abscissa baseline: minimized spectral abscissa.
    std::optional<double> abscissa_star;
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

std::string to_json(const AllocationResult& result);

/// Cheapest allocation with R0 <= r_max (+ tau). Retries on infeasibility
/// with the tau ladder {tau, 1e-6, 1e-4} and records tau_used.
AllocationResult solve_r0_constrained(const ResourceModel& model, double r_max, double tau = 0.0,
                                      const SolverOptions& options = {});

/// R0-minimizing allocation with cost c(theta) <= c_max.
AllocationResult solve_budget_constrained(const ResourceModel& model, double c_max,
                                          const SolverOptions& options = {});

/// Baseline: minimizes the spectral abscissa of J(theta) = F + V under the
/// budget, via the non-negative shift J + shift*I and its Perron radius.
/// The shift must dominate every achievable diagonal decay (validated);
/// abscissa_star = lambda* - shift.
AllocationResult solve_abscissa_budget(const ResourceModel& model, double c_max, double shift,
                                       const SolverOptions& options = {});

/// Vaccine cost f(beta) = (beta^{-1} - beta_hi^{-1}) / (beta_lo^{-1} - beta_hi^{-1});
/// 0 at no investment (beta = beta_hi), 1 at maximum (beta = beta_lo).
double vaccine_cost(double beta, double beta_lo, double beta_hi);

/// Antidote cost g(delta) with curvature parameter delta_tilde > delta_hi:
/// ((dt-delta)^{-1} - (dt-delta_lo)^{-1}) / ((dt-delta_hi)^{-1} - (dt-delta_lo)^{-1}).
double antidote_cost(double delta, double delta_lo, double delta_hi, double delta_tilde);

struct GroupIntervention {
    double beta_lo = 0.0, beta_hi = 0.0;    ///< achievable transmission range
    double delta_lo = 0.0, delta_hi = 0.0;  ///< achievable recovery range
    double delta_tilde = 0.0;               ///< cost curvature, > delta_hi
};

/// Conventional experiment bounds: vaccines reach a (1 - max_reduction)
/// cut of beta, antidotes scale delta by up to max_speedup, fixed delta_tilde.
std::vector<GroupIntervention> default_interventions(const SeirModel& m,
                                                     double beta_max_reduction = 0.9,
                                                     double delta_max_speedup = 2.0,
                                                     double delta_tilde = 2.0);

/// Vaccine/antidote allocation model over theta = (beta, eta) with
/// eta_i = delta_tilde_i - delta_i. Groups with degenerate ranges have that
/// resource frozen at its single value and excluded from theta.
class PharmaModel {
public:
    PharmaModel(SeirModel base, std::vector<GroupIntervention> groups, double default_budget);

    const ResourceModel& model() const { return model_; }
    const SeirModel& base() const { return base_; }
    const std::vector<GroupIntervention>& groups() const { return groups_; }
    double default_budget() const { return default_budget_; }

    bool vaccine_active(Eigen::Index i) const { return beta_active_[static_cast<size_t>(i)]; }
    bool antidote_active(Eigen::Index i) const { return eta_active_[static_cast<size_t>(i)]; }

    Assignment no_intervention() const;
    Assignment full_intervention() const;

    /// Post-intervention rates: beta from theta, delta = delta_tilde - eta.
    SeirModel apply(const Assignment& theta) const;

    double vaccine_cost_total(const Assignment& theta) const;
    double antidote_cost_total(const Assignment& theta) const;

    /// Shift for the abscissa baseline; max delta_tilde dominates every
    /// group's recovery decay and (validated downstream) incubation decay.
    double abscissa_shift() const;

private:
    SeirModel base_;
    std::vector<GroupIntervention> groups_;
    double default_budget_;
    std::vector<bool> beta_active_, eta_active_;
    ResourceModel model_;
};

PharmaModel build_pharma_model(const SeirModel& base, const std::vector<GroupIntervention>& groups,
                               double c_max);

}  // namespace r0gp
