#include "r0gp/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

namespace r0gp {

namespace {

std::string w_name(Eigen::Index i) {
    return "w[" + std::to_string(i) + "]";
}

Posynomial times_monomial(const Posynomial& p, const Monomial& m) {
    return p * Posynomial(m);
}

/// Upper bound of p over the bound box: per-term corner maximum. Exact when
/// each variable's exponents are sign-consistent across terms.
double box_upper_bound(const Posynomial& p,
                       const std::map<std::string, std::pair<double, double>>& bounds) {
    double total = 0.0;
    for (const auto& term : p.terms()) {
        double v = term.coefficient();
        for (const auto& [name, exponent] : term.exponents()) {
            const auto& [lo, hi] = bounds.at(name);
            v *= std::pow(exponent > 0.0 ? hi : lo, exponent);
        }
        total += v;
    }
    return total;
}

Assignment extract_theta(const ResourceModel& model, const Assignment& x) {
    Assignment theta;
    for (const auto& name : model.theta_names) theta[name] = x.at(name);
    return theta;
}

AllocationResult from_solution(const ResourceModel& model, const GpSolution& sol) {
    AllocationResult result;
    result.status = sol.status;
    result.kkt_residual = sol.kkt_residual;
    result.iterations = sol.iterations;
    if (sol.x.empty()) return result;
    result.theta_star = extract_theta(model, sol.x);
    result.cost_star = model.true_cost(result.theta_star);
    result.w_star.resize(model.n);
    for (Eigen::Index i = 0; i < model.n; ++i) {
        result.w_star(i) = sol.x.at(w_name(i));
    }
    if (sol.x.count("r")) result.r_star = sol.x.at("r");
    return result;
}

/// Shared allocation skeleton: variables (w, theta), w_1 = 1, resource
/// bounds, and the model's h(theta) rows. Callers add the objective and the
/// rows specific to the problem.
GeometricProgram allocation_skeleton(const ResourceModel& model) {
    GeometricProgram gp;
    for (Eigen::Index i = 0; i < model.n; ++i) gp.add_variable(w_name(i));
    for (const auto& name : model.theta_names) {
        gp.add_variable(name);
        const auto& [lo, hi] = model.theta_bounds.at(name);
        gp.set_bounds(name, lo, hi);
    }
    gp.add_equality(Monomial::variable(w_name(0)));
    for (const auto& h : model.constraints) gp.add_inequality(h);
    return gp;
}

}  // namespace

ResourceModel ResourceModel::constant(const LinearizedEpidemic& lin) {
    ResourceModel model;
    model.n = lin.n();
    model.F_expr.assign(static_cast<size_t>(model.n),
                        std::vector<std::optional<Posynomial>>(static_cast<size_t>(model.n)));
    model.Vod_expr = model.F_expr;
    for (Eigen::Index i = 0; i < model.n; ++i) {
        for (Eigen::Index j = 0; j < model.n; ++j) {
            if (lin.F()(i, j) > 0.0) {
                model.F_expr[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    Posynomial::constant(lin.F()(i, j));
            }
            if (i != j && lin.v_offdiag()(i, j) > 0.0) {
                model.Vod_expr[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    Posynomial::constant(lin.v_offdiag()(i, j));
            }
        }
        model.Vd_expr.push_back(Monomial::constant(lin.v_decay()(i)));
    }
    return model;
}

void ResourceModel::validate() const {
    if (n < 1) throw InputError("ResourceModel: n must be >= 1");
    const auto check_shape = [&](const auto& m, const char* what) {
        if (m.size() != static_cast<size_t>(n)) {
            throw InputError(std::string("ResourceModel: ") + what + " has wrong row count");
        }
        for (const auto& row : m) {
            if (row.size() != static_cast<size_t>(n)) {
                throw InputError(std::string("ResourceModel: ") + what + " has wrong column count");
            }
        }
    };
    check_shape(F_expr, "F");
    check_shape(Vod_expr, "V_od");
    if (Vd_expr.size() != static_cast<size_t>(n)) {
        throw InputError("ResourceModel: V_d has wrong length");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (Vod_expr[static_cast<size_t>(i)][static_cast<size_t>(i)].has_value()) {
            throw InputError("ResourceModel: V_od must have an empty diagonal");
        }
    }
    for (const auto& name : theta_names) {
        const auto it = theta_bounds.find(name);
        if (it == theta_bounds.end()) {
            throw InputError("ResourceModel: missing bounds for '" + name + "' (bounds are mandatory)");
        }
        const auto& [lo, hi] = it->second;
        if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi)) {
            throw InputError("ResourceModel: bounds for '" + name + "' must satisfy 0 < lo <= hi < inf");
        }
    }
    auto check_vars = [&](const Posynomial& p, const char* where) {
        for (const auto& v : p.variables()) {
            if (std::find(theta_names.begin(), theta_names.end(), v) == theta_names.end()) {
                throw InputError(std::string("ResourceModel: unknown resource '") + v + "' in " + where);
            }
        }
    };
    for (const auto& row : F_expr) {
        for (const auto& p : row) {
            if (p) check_vars(*p, "F");
        }
    }
    for (const auto& row : Vod_expr) {
        for (const auto& p : row) {
            if (p) check_vars(*p, "V_od");
        }
    }
    check_vars(cost_posy, "cost");
    for (const auto& h : constraints) check_vars(h, "h");

    // Decrement positivity: exact corner bound first, then sampling.
    std::mt19937_64 rng(0x5eed);
    auto sample_theta = [&]() {
        Assignment theta;
        for (const auto& name : theta_names) {
            const auto& [lo, hi] = theta_bounds.at(name);
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            theta[name] = lo + u * (hi - lo);
        }
        return theta;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto* dec = std::get_if<DecrementEntry>(&Vd_expr[static_cast<size_t>(i)]);
        if (!dec) continue;
        check_vars(dec->decrement, "V_d decrement");
        if (!(dec->base > 0.0)) {
            throw InputError("ResourceModel: decrement base must be positive");
        }
        if (box_upper_bound(dec->decrement, theta_bounds) < dec->base) continue;
        for (int k = 0; k < 2000; ++k) {
            const Assignment theta = sample_theta();
            if (dec->decrement.eval(theta) >= dec->base) {
                throw InputError("ResourceModel: V_d[" + std::to_string(i) +
                                 "] is non-positive at a feasible theta");
            }
        }
    }

    // Assumption-3 spot check: V(theta) Hurwitz at sampled feasible points.
    int checked = 0;
    for (int attempt = 0; attempt < 200 && checked < 20; ++attempt) {
        const Assignment theta = sample_theta();
        bool feasible = true;
        for (const auto& h : constraints) {
            if (h.eval(theta) > 1.0 + 1e-9) {
                feasible = false;
                break;
            }
        }
        if (!feasible) continue;
        ++checked;
        const LinearizedEpidemic lin = instantiate(theta);
        if (!is_hurwitz(lin.V())) {
            throw ContractError(
                "ResourceModel: V(theta) not Hurwitz at a sampled feasible theta "
                "(Assumption 3 condition 3)");
        }
    }
}

LinearizedEpidemic ResourceModel::instantiate(const Assignment& theta) const {
    Eigen::MatrixXd f = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& fe = F_expr[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (fe) f(i, j) = fe->eval(theta);
            const auto& ve = Vod_expr[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (ve) v(i, j) = ve->eval(theta);
        }
        const auto& entry = Vd_expr[static_cast<size_t>(i)];
        double decay;
        if (const auto* mono = std::get_if<Monomial>(&entry)) {
            decay = mono->eval(theta);
        } else {
            const auto& dec = std::get<DecrementEntry>(entry);
            decay = dec.base - dec.decrement.eval(theta);
            if (!(decay > 0.0)) {
                throw ContractError("V_d[" + std::to_string(i) +
                                    "](theta) <= 0: decrement exceeds its base");
            }
        }
        v(i, i) = -decay;
    }
    return LinearizedEpidemic(SquareMatrix(std::move(f)), SquareMatrix(std::move(v)));
}

bool ResourceModel::is_feasible(const Assignment& theta, double tol) const {
    if (theta.size() != theta_names.size()) return false;
    for (const auto& name : theta_names) {
        const auto it = theta.find(name);
        if (it == theta.end()) return false;
        const auto& [lo, hi] = theta_bounds.at(name);
        if (it->second < lo - tol * std::max(1.0, lo)) return false;
        if (it->second > hi + tol * std::max(1.0, hi)) return false;
    }
    for (const auto& h : constraints) {
        if (h.eval(theta) > 1.0 + tol) return false;
    }
    return true;
}

double r0_of_theta(const ResourceModel& model, const Assignment& theta) {
    if (!model.is_feasible(theta)) {
        throw ContractError("r0_of_theta: theta is infeasible");
    }
    const LinearizedEpidemic lin = model.instantiate(theta);
    if (!is_hurwitz(lin.V())) {
        throw ContractError("V(theta) is not Hurwitz (Assumption 3 condition 3)");
    }
    return r0_eigen(lin);
}

std::vector<Posynomial> build_p_constraint(const ResourceModel& model) {
    std::vector<Posynomial> rows;
    const Monomial r = Monomial::variable("r");
    for (Eigen::Index i = 0; i < model.n; ++i) {
        const Monomial wi = Monomial::variable(w_name(i));
        std::vector<Monomial> numerator;
        auto append = [&numerator](const Posynomial& p) {
            numerator.insert(numerator.end(), p.terms().begin(), p.terms().end());
        };
        for (Eigen::Index j = 0; j < model.n; ++j) {
            const Monomial wj = Monomial::variable(w_name(j));
            const auto& fe = model.F_expr[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (fe) append(times_monomial(*fe, wj));
            const auto& ve = model.Vod_expr[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (ve) append(times_monomial(*ve, r * wj));
        }
        const auto& entry = model.Vd_expr[static_cast<size_t>(i)];
        Monomial denom = Monomial::variable("r") * wi;
        if (const auto* mono = std::get_if<Monomial>(&entry)) {
            denom *= *mono;
        } else {
            const auto& dec = std::get<DecrementEntry>(entry);
            append(times_monomial(dec.decrement, r * wi));
            denom *= Monomial::constant(dec.base);
        }
        if (numerator.empty()) continue;
        rows.push_back(Posynomial(std::move(numerator)) / denom);
    }
    return rows;
}

Posynomial build_budget_row(const ResourceModel& model, double c_max) {
    if (!(c_max > 0.0)) {
        throw InputError("budget c_max must be positive");
    }
    return model.cost_posy / Monomial::constant(c_max + model.cost_offset);
}

std::string to_json(const AllocationResult& result) {
    nlohmann::json j;
    j["status"] = to_string(result.status);
    j["theta_star"] = result.theta_star;
    j["r_star"] = result.r_star;
    j["cost_star"] = result.cost_star;
    std::vector<double> w(result.w_star.data(), result.w_star.data() + result.w_star.size());
    j["w_star"] = w;
    j["tau_used"] = result.tau_used;
    if (result.abscissa_star) j["abscissa_star"] = *result.abscissa_star;
    j["solver_stats"] = {{"kkt_residual", result.kkt_residual},
                         {"iterations", result.iterations}};
    return j.dump(2);
}

AllocationResult solve_r0_constrained(const ResourceModel& model, double r_max, double tau,
                                      const SolverOptions& options) {
    if (!(r_max > 0.0)) throw InputError("r_max must be positive");
    if (tau < 0.0) throw InputError("tau must be non-negative");

    std::vector<double> ladder{tau};
    for (const double fallback : {1e-6, 1e-4}) {
        if (fallback > tau) ladder.push_back(fallback);
    }

    const std::vector<Posynomial> p_rows = build_p_constraint(model);
    AllocationResult last;
    for (const double t : ladder) {
        GeometricProgram gp = allocation_skeleton(model);
        gp.add_variable("r");
        gp.set_objective(model.cost_posy);
        for (const auto& row : p_rows) gp.add_inequality(row);
        gp.add_inequality(Posynomial(Monomial(1.0 / (r_max + t), {{"r", 1.0}})));
        const GpSolution sol = solve(gp, options);
        last = from_solution(model, sol);
        last.tau_used = t;
        if (sol.status != SolveStatus::infeasible) {
            return last;
        }
    }
    return last;
}

AllocationResult solve_budget_constrained(const ResourceModel& model, double c_max,
                                          const SolverOptions& options) {
    GeometricProgram gp = allocation_skeleton(model);
    gp.add_variable("r");
    gp.set_objective(Posynomial::variable("r"));
    for (const auto& row : build_p_constraint(model)) gp.add_inequality(row);
    gp.add_inequality(build_budget_row(model, c_max));
    return from_solution(model, solve(gp, options));
}

AllocationResult solve_abscissa_budget(const ResourceModel& model, double c_max, double shift,
                                       const SolverOptions& options) {
    // Shifted diagonal entries must be posynomial: requires every monomial
    // diagonal to be constant and the shift to dominate it.
    for (Eigen::Index i = 0; i < model.n; ++i) {
        const auto& entry = model.Vd_expr[static_cast<size_t>(i)];
        if (const auto* mono = std::get_if<Monomial>(&entry)) {
            if (!mono->is_constant()) {
                throw InputError(
                    "abscissa baseline requires constant or decrement diagonal decay; "
                    "V_d[" + std::to_string(i) + "] depends on theta");
            }
            if (shift < mono->coefficient() - 1e-12) {
                throw InputError("shift too small: diagonal " + std::to_string(i) +
                                 " decays faster than the shift");
            }
        } else if (shift < std::get<DecrementEntry>(entry).base - 1e-12) {
            throw InputError("shift too small: diagonal " + std::to_string(i) +
                             " decays faster than the shift");
        }
    }

    GeometricProgram gp = allocation_skeleton(model);
    gp.add_variable("lam");
    gp.set_objective(Posynomial::variable("lam"));
    gp.add_inequality(build_budget_row(model, c_max));

    for (Eigen::Index i = 0; i < model.n; ++i) {
        const Monomial wi = Monomial::variable(w_name(i));
        std::vector<Monomial> numerator;
        auto append = [&numerator](const Posynomial& p) {
            numerator.insert(numerator.end(), p.terms().begin(), p.terms().end());
        };
        for (Eigen::Index j = 0; j < model.n; ++j) {
            const Monomial wj = Monomial::variable(w_name(j));
            const auto& fe = model.F_expr[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (fe) append(times_monomial(*fe, wj));
            const auto& ve = model.Vod_expr[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (ve) append(times_monomial(*ve, wj));
        }
        const auto& entry = model.Vd_expr[static_cast<size_t>(i)];
        double shifted;
        if (const auto* mono = std::get_if<Monomial>(&entry)) {
            shifted = shift - mono->coefficient();
        } else {
            const auto& dec = std::get<DecrementEntry>(entry);
            shifted = shift - dec.base;
            append(times_monomial(dec.decrement, wi));
        }
        if (shifted > 0.0) numerator.push_back(Monomial(shifted, {{w_name(i), 1.0}}));
        if (numerator.empty()) continue;
        gp.add_inequality(Posynomial(std::move(numerator)) /
                          (Monomial::variable("lam") * wi));
    }

    const GpSolution sol = solve(gp, options);
    AllocationResult result = from_solution(model, sol);
    if (sol.status == SolveStatus::optimal) {
        // abscissa(J) = rho(J + shift I) - shift since the shifted matrix is non-negative
        result.abscissa_star = sol.x.at("lam") - shift;
        result.r_star = r0_of_theta(model, result.theta_star);
    }
    return result;
}

double vaccine_cost(double beta, double beta_lo, double beta_hi) {
    if (!(beta_lo > 0.0) || !(beta_hi >= beta_lo)) {
        throw InputError("vaccine_cost: need 0 < beta_lo <= beta_hi");
    }
    if (beta < beta_lo - 1e-12 || beta > beta_hi + 1e-12) {
        throw InputError("vaccine_cost: beta outside [beta_lo, beta_hi]");
    }
    if (beta_lo == beta_hi) return 0.0;
    return (1.0 / beta - 1.0 / beta_hi) / (1.0 / beta_lo - 1.0 / beta_hi);
}

double antidote_cost(double delta, double delta_lo, double delta_hi, double delta_tilde) {
    if (!(delta_lo > 0.0) || !(delta_hi >= delta_lo) || !(delta_tilde > delta_hi)) {
        throw InputError("antidote_cost: need 0 < delta_lo <= delta_hi < delta_tilde");
    }
    if (delta < delta_lo - 1e-12 || delta > delta_hi + 1e-12) {
        throw InputError("antidote_cost: delta outside [delta_lo, delta_hi]");
    }
    if (delta_lo == delta_hi) return 0.0;
    const double lo_inv = 1.0 / (delta_tilde - delta_lo);
    const double hi_inv = 1.0 / (delta_tilde - delta_hi);
    return (1.0 / (delta_tilde - delta) - lo_inv) / (hi_inv - lo_inv);
}

std::vector<GroupIntervention> default_interventions(const SeirModel& m,
                                                     double beta_max_reduction,
                                                     double delta_max_speedup,
                                                     double delta_tilde) {
    if (!(beta_max_reduction > 0.0) || beta_max_reduction >= 1.0) {
        throw InputError("beta_max_reduction must lie in (0, 1)");
    }
    if (!(delta_max_speedup >= 1.0)) {
        throw InputError("delta_max_speedup must be >= 1");
    }
    std::vector<GroupIntervention> groups;
    for (Eigen::Index i = 0; i < m.groups(); ++i) {
        GroupIntervention g;
        g.beta_hi = m.beta(i);
        g.beta_lo = (1.0 - beta_max_reduction) * m.beta(i);
        g.delta_lo = m.delta(i);
        g.delta_hi = delta_max_speedup * m.delta(i);
        g.delta_tilde = delta_tilde;
        if (!(g.delta_tilde > g.delta_hi)) {
            throw InputError("delta_tilde must exceed the maximal recovery rate in every group");
        }
        groups.push_back(g);
    }
    return groups;
}

PharmaModel::PharmaModel(SeirModel base, std::vector<GroupIntervention> groups,
                         double default_budget)
    : base_(std::move(base)), groups_(std::move(groups)), default_budget_(default_budget) {
    base_.validate();
    const Eigen::Index n = base_.groups();
    if (groups_.size() != static_cast<size_t>(n)) {
        throw InputError("one GroupIntervention per group required");
    }
    if (!(default_budget_ > 0.0)) {
        throw InputError("default budget must be positive");
    }
    beta_active_.resize(static_cast<size_t>(n));
    eta_active_.resize(static_cast<size_t>(n));

    model_.n = 2 * n;
    model_.F_expr.assign(static_cast<size_t>(2 * n),
                         std::vector<std::optional<Posynomial>>(static_cast<size_t>(2 * n)));
    model_.Vod_expr = model_.F_expr;
    model_.Vd_expr.clear();

    std::vector<Monomial> cost_terms;
    double offset = 0.0;

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& g = groups_[static_cast<size_t>(i)];
        if (!(g.beta_lo > 0.0) || !(g.beta_hi >= g.beta_lo)) {
            throw InputError("group " + std::to_string(i) + ": need 0 < beta_lo <= beta_hi");
        }
        if (!(g.delta_lo > 0.0) || !(g.delta_hi >= g.delta_lo) || !(g.delta_tilde > g.delta_hi)) {
            throw InputError("group " + std::to_string(i) +
                             ": need 0 < delta_lo <= delta_hi < delta_tilde");
        }
        beta_active_[static_cast<size_t>(i)] = g.beta_lo < g.beta_hi;
        eta_active_[static_cast<size_t>(i)] = g.delta_lo < g.delta_hi;

        const std::string beta_name = "beta[" + std::to_string(i) + "]";
        const std::string eta_name = "eta[" + std::to_string(i) + "]";

        if (beta_active_[static_cast<size_t>(i)]) {
            model_.theta_names.push_back(beta_name);
            model_.theta_bounds[beta_name] = {g.beta_lo, g.beta_hi};
            const double scale = 1.0 / (1.0 / g.beta_lo - 1.0 / g.beta_hi);
            cost_terms.push_back(Monomial(scale, {{beta_name, -1.0}}));
            offset += scale / g.beta_hi;
        }
        if (eta_active_[static_cast<size_t>(i)]) {
            model_.theta_names.push_back(eta_name);
            model_.theta_bounds[eta_name] = {g.delta_tilde - g.delta_hi,
                                             g.delta_tilde - g.delta_lo};
            const double scale =
                1.0 / (1.0 / (g.delta_tilde - g.delta_hi) - 1.0 / (g.delta_tilde - g.delta_lo));
            cost_terms.push_back(Monomial(scale, {{eta_name, -1.0}}));
            offset += scale / (g.delta_tilde - g.delta_lo);
        }

        // F block (e-rows, z-columns): beta_i s0_i a_ij
        for (Eigen::Index j = 0; j < n; ++j) {
            const double a = base_.contacts(i, j);
            if (a <= 0.0) continue;
            const double c = base_.s0(i) * a;
            Monomial term = beta_active_[static_cast<size_t>(i)]
                                ? Monomial(c, {{beta_name, 1.0}})
                                : Monomial::constant(c * g.beta_hi);
            model_.F_expr[static_cast<size_t>(i)][static_cast<size_t>(n + j)] =
                Posynomial(std::move(term));
        }
        // V_od: incubation flow from e_i to z_i
        model_.Vod_expr[static_cast<size_t>(n + i)][static_cast<size_t>(i)] =
            Posynomial::constant(base_.gamma(i));
    }
    // Diagonal decay: gamma on the e-block, recovery on the z-block.
    for (Eigen::Index i = 0; i < n; ++i) {
        model_.Vd_expr.emplace_back(Monomial::constant(base_.gamma(i)));
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& g = groups_[static_cast<size_t>(i)];
        if (eta_active_[static_cast<size_t>(i)]) {
            model_.Vd_expr.emplace_back(DecrementEntry{
                g.delta_tilde,
                Posynomial::variable("eta[" + std::to_string(i) + "]")});
        } else {
            model_.Vd_expr.emplace_back(Monomial::constant(g.delta_lo));
        }
    }

    if (cost_terms.empty()) {
        model_.cost_posy = Posynomial::constant(1.0);
        model_.cost_offset = 1.0;
    } else {
        model_.cost_posy = Posynomial(std::move(cost_terms));
        model_.cost_offset = offset;
    }
    model_.validate();
}

Assignment PharmaModel::no_intervention() const {
    Assignment theta;
    for (Eigen::Index i = 0; i < base_.groups(); ++i) {
        const auto& g = groups_[static_cast<size_t>(i)];
        if (beta_active_[static_cast<size_t>(i)]) {
            theta["beta[" + std::to_string(i) + "]"] = g.beta_hi;
        }
        if (eta_active_[static_cast<size_t>(i)]) {
            theta["eta[" + std::to_string(i) + "]"] = g.delta_tilde - g.delta_lo;
        }
    }
    return theta;
}

Assignment PharmaModel::full_intervention() const {
    Assignment theta;
    for (Eigen::Index i = 0; i < base_.groups(); ++i) {
        const auto& g = groups_[static_cast<size_t>(i)];
        if (beta_active_[static_cast<size_t>(i)]) {
            theta["beta[" + std::to_string(i) + "]"] = g.beta_lo;
        }
        if (eta_active_[static_cast<size_t>(i)]) {
            theta["eta[" + std::to_string(i) + "]"] = g.delta_tilde - g.delta_hi;
        }
    }
    return theta;
}

SeirModel PharmaModel::apply(const Assignment& theta) const {
    SeirModel post = base_;
    for (Eigen::Index i = 0; i < base_.groups(); ++i) {
        const auto& g = groups_[static_cast<size_t>(i)];
        if (beta_active_[static_cast<size_t>(i)]) {
            post.beta(i) = theta.at("beta[" + std::to_string(i) + "]");
        }
        if (eta_active_[static_cast<size_t>(i)]) {
            post.delta(i) = g.delta_tilde - theta.at("eta[" + std::to_string(i) + "]");
        }
    }
    post.validate();
    return post;
}

double PharmaModel::vaccine_cost_total(const Assignment& theta) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < base_.groups(); ++i) {
        if (!beta_active_[static_cast<size_t>(i)]) continue;
        const auto& g = groups_[static_cast<size_t>(i)];
        total += vaccine_cost(theta.at("beta[" + std::to_string(i) + "]"), g.beta_lo, g.beta_hi);
    }
    return total;
}

double PharmaModel::antidote_cost_total(const Assignment& theta) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < base_.groups(); ++i) {
        if (!eta_active_[static_cast<size_t>(i)]) continue;
        const auto& g = groups_[static_cast<size_t>(i)];
        const double delta = g.delta_tilde - theta.at("eta[" + std::to_string(i) + "]");
        total += antidote_cost(delta, g.delta_lo, g.delta_hi, g.delta_tilde);
    }
    return total;
}

double PharmaModel::abscissa_shift() const {
    double shift = 0.0;
    for (const auto& g : groups_) shift = std::max(shift, g.delta_tilde);
    return shift;
}

PharmaModel build_pharma_model(const SeirModel& base, const std::vector<GroupIntervention>& groups,
                               double c_max) {
    return PharmaModel(base, groups, c_max);
}

}  // namespace r0gp
