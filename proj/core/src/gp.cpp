#include "r0gp/gp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace r0gp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Monomial lower_bound_row(const std::string& name, double lower) {
    return Monomial(lower, {{name, -1.0}});  // lower / x <= 1
}

Monomial upper_bound_row(const std::string& name, double upper) {
    return Monomial(1.0 / upper, {{name, 1.0}});  // x / upper <= 1
}

/// Smooth inequality-constrained problem in a reduced variable v:
/// minimize objective(v) subject to row_i(v) < 0.
class BarrierModel {
public:
    virtual ~BarrierModel() = default;
    virtual Eigen::Index dim() const = 0;
    virtual Eigen::Index rows() const = 0;
    virtual double objective(const Eigen::VectorXd& v, Eigen::VectorXd* g,
                             Eigen::MatrixXd* h) const = 0;
    virtual double row(Eigen::Index i, const Eigen::VectorXd& v, Eigen::VectorXd* g,
                       Eigen::MatrixXd* h) const = 0;
};

double barrier_value(const BarrierModel& model, double mu, const Eigen::VectorXd& v) {
    double phi = model.objective(v, nullptr, nullptr);
    for (Eigen::Index i = 0; i < model.rows(); ++i) {
        const double val = model.row(i, v, nullptr, nullptr);
        if (!(val < 0.0) || !std::isfinite(val)) return kInf;
        phi -= mu * std::log(-val);
    }
    return std::isfinite(phi) ? phi : kInf;
}

struct CenterOutcome {
    bool converged = false;
    bool budget_exhausted = false;
};

/// Damped Newton on objective + mu * log barrier (objective units, so the
/// Newton decrement is comparable to the duality gap). Consumes from *budget.
CenterOutcome center(const BarrierModel& model, double mu, Eigen::VectorXd& v, int* budget,
                     double newton_tol) {
    const Eigen::Index d = model.dim();
    Eigen::VectorXd grad(d), row_grad(d);
    Eigen::MatrixXd hess(d, d), row_hess(d, d);
    CenterOutcome outcome;
    int stalls = 0;
    while (true) {
        if (*budget <= 0) {
            outcome.budget_exhausted = true;
            return outcome;
        }
        double phi0 = model.objective(v, &grad, &hess);
        bool interior = true;
        for (Eigen::Index i = 0; i < model.rows(); ++i) {
            const double val = model.row(i, v, &row_grad, &row_hess);
            if (!(val < 0.0)) {
                interior = false;
                break;
            }
            const double inv = 1.0 / (-val);
            phi0 -= mu * std::log(-val);
            grad += (mu * inv) * row_grad;
            hess += (mu * inv) * row_hess + (mu * inv * inv) * row_grad * row_grad.transpose();
        }
        if (!interior) return outcome;  // caller guarantees interior starts; bail out

        Eigen::VectorXd step;
        double reg = 0.0;
        bool have_step = false;
        const double trace_scale = 1.0 + std::abs(hess.trace()) / static_cast<double>(d);
        for (int attempt = 0; attempt < 12; ++attempt) {
            Eigen::MatrixXd h_reg = hess;
            if (reg > 0.0) h_reg += reg * Eigen::MatrixXd::Identity(d, d);
            Eigen::LDLT<Eigen::MatrixXd> ldlt(h_reg);
            if (ldlt.info() == Eigen::Success) {
                step = ldlt.solve(-grad);
                step += ldlt.solve(-grad - hess * step);  // one refinement pass
                if (step.allFinite() && grad.dot(step) < 0.0) {
                    have_step = true;
                    break;
                }
            }
            reg = (reg == 0.0) ? 1e-10 * trace_scale : reg * 100.0;
        }
        if (!have_step) {
            step = -grad;  // fall back to steepest descent
            if (!(grad.dot(step) < 0.0)) {
                outcome.converged = true;  // numerically stationary
                return outcome;
            }
        }

        const double decrement = -grad.dot(step);
        if (0.5 * decrement < newton_tol) {
            outcome.converged = true;
            return outcome;
        }

        double alpha = 1.0;
        bool moved = false;
        double achieved = 0.0;
        while (alpha > 1e-13) {
            const Eigen::VectorXd trial = v + alpha * step;
            const double phi_trial = barrier_value(model, mu, trial);
            if (phi_trial <= phi0 - 1e-2 * alpha * decrement) {
                achieved = phi0 - phi_trial;
                v = trial;
                moved = true;
                break;
            }
            alpha *= 0.5;
        }
        --*budget;
        // At extreme barrier conditioning the line search bottoms out on
        // floating-point noise; treat repeated no-progress as centered.
        if (!moved || achieved <= 1e-15 * (1.0 + std::abs(phi0))) {
            if (++stalls >= 2 || !moved) {
                outcome.converged = true;
                return outcome;
            }
        } else {
            stalls = 0;
        }
    }
}

/// The convexified program reduced onto the affine set of monomial equalities:
/// y = y_p + N z with N an orthonormal null-space basis.
struct Reduction {
    Eigen::VectorXd y_particular;
    Eigen::MatrixXd null_basis;  // n x d
    Eigen::MatrixXd a_eq;        // p x n
    Eigen::VectorXd b_eq;
    bool consistent = true;
};

Reduction reduce_equalities(const std::vector<std::string>& vars,
                            const std::vector<Monomial>& equalities) {
    const Eigen::Index n = static_cast<Eigen::Index>(vars.size());
    Reduction red;
    const Eigen::Index p = static_cast<Eigen::Index>(equalities.size());
    red.a_eq = Eigen::MatrixXd::Zero(p, n);
    red.b_eq = Eigen::VectorXd::Zero(p);
    std::map<std::string, Eigen::Index> index;
    for (Eigen::Index i = 0; i < n; ++i) index.emplace(vars[static_cast<size_t>(i)], i);
    for (Eigen::Index r = 0; r < p; ++r) {
        const Monomial& mono = equalities[static_cast<size_t>(r)];
        for (const auto& [name, exponent] : mono.exponents()) {
            red.a_eq(r, index.at(name)) = exponent;
        }
        red.b_eq(r) = -std::log(mono.coefficient());
    }
    if (p == 0) {
        red.y_particular = Eigen::VectorXd::Zero(n);
        red.null_basis = Eigen::MatrixXd::Identity(n, n);
        return red;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(red.a_eq,
                                          Eigen::ComputeThinU | Eigen::ComputeFullV);
    red.y_particular = svd.solve(red.b_eq);
    if ((red.a_eq * red.y_particular - red.b_eq).cwiseAbs().maxCoeff() > 1e-9) {
        red.consistent = false;
        return red;
    }
    const double threshold = 1e-12 * svd.singularValues().maxCoeff();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > threshold) ++rank;
    }
    red.null_basis = svd.matrixV().rightCols(n - rank);
    return red;
}

/// Phase-II model: reduced objective and rows.
class ReducedGp : public BarrierModel {
public:
    ReducedGp(const Reduction* red, const LogSumExpFunction* objective,
              const std::vector<LogSumExpFunction>* rows)
        : red_(red), objective_(objective), rows_(rows) {}

    Eigen::Index dim() const override { return red_->null_basis.cols(); }
    Eigen::Index rows() const override { return static_cast<Eigen::Index>(rows_->size()); }

    double objective(const Eigen::VectorXd& v, Eigen::VectorXd* g,
                     Eigen::MatrixXd* h) const override {
        return reduced(*objective_, v, g, h);
    }
    double row(Eigen::Index i, const Eigen::VectorXd& v, Eigen::VectorXd* g,
               Eigen::MatrixXd* h) const override {
        return reduced((*rows_)[static_cast<size_t>(i)], v, g, h);
    }

    double reduced(const LogSumExpFunction& fn, const Eigen::VectorXd& z, Eigen::VectorXd* g,
                   Eigen::MatrixXd* h) const {
        const Eigen::VectorXd y = red_->y_particular + red_->null_basis * z;
        if (!g && !h) return fn.value(y);
        Eigen::VectorXd gy;
        Eigen::MatrixXd hy;
        const double val = fn.value(y, g ? &gy : nullptr, h ? &hy : nullptr);
        if (g) *g = red_->null_basis.transpose() * gy;
        if (h) *h = red_->null_basis.transpose() * hy * red_->null_basis;
        return val;
    }

private:
    const Reduction* red_;
    const LogSumExpFunction* objective_;
    const std::vector<LogSumExpFunction>* rows_;
};

/// Phase-I model over (z, sigma): minimize sigma with relaxed rows
/// G_i(z) - sigma <= 0, hard safety rows, and sigma >= -1.
class PhaseOne : public BarrierModel {
public:
    PhaseOne(const ReducedGp* gp, Eigen::Index relaxed_count)
        : gp_(gp), relaxed_(relaxed_count) {}

    Eigen::Index dim() const override { return gp_->dim() + 1; }
    Eigen::Index rows() const override { return gp_->rows() + 1; }

    double objective(const Eigen::VectorXd& v, Eigen::VectorXd* g,
                     Eigen::MatrixXd* h) const override {
        if (g) {
            g->setZero(dim());
            (*g)(dim() - 1) = 1.0;
        }
        if (h) h->setZero(dim(), dim());
        return v(dim() - 1);
    }

    double row(Eigen::Index i, const Eigen::VectorXd& v, Eigen::VectorXd* g,
               Eigen::MatrixXd* h) const override {
        const Eigen::Index d = gp_->dim();
        if (i == gp_->rows()) {  // -1 - sigma <= 0
            if (g) {
                g->setZero(dim());
                (*g)(d) = -1.0;
            }
            if (h) h->setZero(dim(), dim());
            return -1.0 - v(d);
        }
        Eigen::VectorXd gz;
        Eigen::MatrixXd hz;
        const double val =
            gp_->row(i, v.head(d), g ? &gz : nullptr, h ? &hz : nullptr);
        const bool relax = i < relaxed_;
        if (g) {
            g->setZero(dim());
            g->head(d) = gz;
            if (relax) (*g)(d) = -1.0;
        }
        if (h) {
            h->setZero(dim(), dim());
            h->topLeftCorner(d, d) = hz;
        }
        return relax ? val - v(d) : val;
    }

private:
    const ReducedGp* gp_;
    Eigen::Index relaxed_;
};

struct StageLog {
    double mu;
    int steps;
    double objective;
};

}  // namespace

void GeometricProgram::add_variable(const std::string& name) {
    if (name.empty()) throw InputError("variable name must be non-empty");
    if (has_variable(name)) throw InputError("duplicate variable '" + name + "'");
    variables_.push_back(name);
}

bool GeometricProgram::has_variable(const std::string& name) const {
    return std::find(variables_.begin(), variables_.end(), name) != variables_.end();
}

void GeometricProgram::set_objective(Posynomial objective) {
    objective_ = std::move(objective);
}

void GeometricProgram::add_inequality(Posynomial constraint) {
    inequalities_.push_back(std::move(constraint));
}

void GeometricProgram::add_equality(Monomial constraint) {
    equalities_.push_back(std::move(constraint));
}

void GeometricProgram::set_bounds(const std::string& name, double lower, double upper) {
    if (!has_variable(name)) throw InputError("bounds on undeclared variable '" + name + "'");
    if (lower < 0.0 || !std::isfinite(lower)) {
        throw InputError("lower bound must be >= 0 (0 means absent)");
    }
    if (!(upper > lower)) {
        throw InputError("upper bound must exceed lower bound; pin variables with an equality");
    }
    Bounds b;
    if (lower > 0.0) b.lower = lower;
    if (std::isfinite(upper)) b.upper = upper;
    bounds_[name] = b;
}

std::vector<Posynomial> GeometricProgram::canonical_inequalities() const {
    std::vector<Posynomial> rows = inequalities_;
    for (const auto& name : variables_) {
        const auto it = bounds_.find(name);
        if (it == bounds_.end()) continue;
        if (it->second.lower) rows.emplace_back(lower_bound_row(name, *it->second.lower));
        if (it->second.upper) rows.emplace_back(upper_bound_row(name, *it->second.upper));
    }
    return rows;
}

void GeometricProgram::validate() const {
    auto check = [&](const Posynomial& p, const char* where) {
        for (const auto& name : p.variables()) {
            if (!has_variable(name)) {
                throw InputError(std::string("undeclared variable '") + name + "' in " + where);
            }
        }
    };
    check(objective_, "objective");
    for (const auto& c : inequalities_) check(c, "inequality constraint");
    for (const auto& m : equalities_) check(Posynomial(m), "equality constraint");
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::max_iterations: return "max_iterations";
    }
    return "unknown";
}

GpSolution solve(const GeometricProgram& gp, const SolverOptions& options) {
    gp.validate();
    const std::vector<std::string>& vars = gp.variables();
    const Eigen::Index n = static_cast<Eigen::Index>(vars.size());

    GpSolution solution;
    Reduction red = reduce_equalities(vars, gp.equalities());
    if (!red.consistent) {
        solution.status = SolveStatus::infeasible;
        solution.phase1_excess = kInf;
        return solution;
    }

    auto assignment_at = [&](const Eigen::VectorXd& y) {
        Assignment x;
        for (Eigen::Index i = 0; i < n; ++i) {
            x[vars[static_cast<size_t>(i)]] = std::exp(y(i));
        }
        return x;
    };

    const std::vector<Posynomial> user_rows = gp.canonical_inequalities();
    const Eigen::Index m_user = static_cast<Eigen::Index>(user_rows.size());

    std::vector<LogSumExpFunction> rows;
    rows.reserve(user_rows.size() + 2 * static_cast<size_t>(n));
    for (const auto& p : user_rows) rows.emplace_back(p, vars);

    // Internal safety box: closes directions the program leaves open so that
    // every barrier subproblem has a minimizer; open infima surface as
    // box-limited optimal points.
    const double box = std::max(options.log_box, red.y_particular.norm() + 2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& name = vars[static_cast<size_t>(i)];
        const auto it = gp.bounds().find(name);
        const bool has_lower = it != gp.bounds().end() && it->second.lower.has_value();
        const bool has_upper = it != gp.bounds().end() && it->second.upper.has_value();
        if (!has_lower) rows.emplace_back(Posynomial(lower_bound_row(name, std::exp(-box))), vars);
        if (!has_upper) rows.emplace_back(Posynomial(upper_bound_row(name, std::exp(box))), vars);
    }
    const Eigen::Index m_total = static_cast<Eigen::Index>(rows.size());

    const LogSumExpFunction objective(gp.objective(), vars);
    const ReducedGp reduced(&red, &objective, &rows);
    const Eigen::Index d = reduced.dim();

    std::vector<StageLog> stage_log;
    int budget = options.max_newton_steps;

    // Fully pinned program: feasibility check only.
    if (d == 0) {
        const Eigen::VectorXd y = red.y_particular;
        solution.x = assignment_at(y);
        solution.objective_value = gp.objective().eval(solution.x);
        double worst = -kInf;
        for (Eigen::Index i = 0; i < m_user; ++i) {
            worst = std::max(worst, rows[static_cast<size_t>(i)].value(y));
        }
        solution.max_constraint_violation = (m_user == 0) ? 0.0 : std::expm1(std::max(worst, 0.0));
        solution.status =
            (worst <= 1e-9) ? SolveStatus::optimal : SolveStatus::infeasible;
        solution.kkt_residual = 0.0;
        return solution;
    }

    Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
    auto max_user_excess = [&](const Eigen::VectorXd& zz) {
        double worst = -kInf;
        for (Eigen::Index i = 0; i < m_user; ++i) {
            worst = std::max(worst, reduced.row(i, zz, nullptr, nullptr));
        }
        return worst;
    };

    // Phase I: drive the max constraint excess negative, or certify that it
    // cannot be.
    const double initial_excess = (m_user == 0) ? -1.0 : max_user_excess(z);
    if (initial_excess >= -1e-3) {
        const PhaseOne phase1(&reduced, m_user);
        Eigen::VectorXd v(d + 1);
        v.head(d) = z;
        v(d) = std::max(initial_excess, -0.9) + 1.0;
        const double phase1_gap = std::min(options.duality_gap, 1e-9);
        double mu = options.mu0;
        bool exhausted = false;
        while (true) {
            const CenterOutcome out = center(phase1, mu, v, &budget, options.newton_tol);
            stage_log.push_back({mu, options.max_newton_steps - budget, v(d)});
            if (out.budget_exhausted) {
                exhausted = true;
                break;
            }
            if (max_user_excess(v.head(d)) < -1e-3) break;  // comfortably feasible
            if (static_cast<double>(phase1.rows()) * mu < phase1_gap) break;
            mu *= options.barrier_shrink;
        }
        z = v.head(d);
        const double excess_now = max_user_excess(z);
        const double certified_lower =
            v(d) - static_cast<double>(phase1.rows()) * mu;
        solution.phase1_excess = std::max(certified_lower, std::min(excess_now, v(d)));
        if (excess_now >= -1e-12) {
            if (exhausted) {
                solution.status = SolveStatus::max_iterations;
            } else {
                solution.status = SolveStatus::infeasible;
            }
            solution.x = assignment_at(red.y_particular + red.null_basis * z);
            solution.objective_value = gp.objective().eval(solution.x);
            solution.iterations = options.max_newton_steps - budget;
            return solution;
        }
    }

    // Phase II: barrier on the objective from the strictly feasible start.
    double mu = options.mu0;
    bool exhausted = false;
    while (true) {
        const CenterOutcome out = center(reduced, mu, z, &budget, options.newton_tol);
        stage_log.push_back({mu, options.max_newton_steps - budget,
                             reduced.objective(z, nullptr, nullptr)});
        if (out.budget_exhausted) {
            exhausted = true;
            break;
        }
        if (static_cast<double>(m_total) * mu < options.duality_gap) break;
        mu *= options.barrier_shrink;
    }

    const Eigen::VectorXd y = red.y_particular + red.null_basis * z;
    solution.x = assignment_at(y);
    solution.objective_value = gp.objective().eval(solution.x);
    solution.iterations = options.max_newton_steps - budget;
    solution.status = exhausted ? SolveStatus::max_iterations : SolveStatus::optimal;

    // Duals for the user-visible rows. Inactive rows keep the exact barrier
    // duals mu / slack; active-row duals are refit by least squares, which
    // absorbs the stiff-direction Newton error the decrement test tolerates.
    {
        Eigen::VectorXd grad;
        objective.value(y, &grad, nullptr);
        Eigen::VectorXd residual = grad;
        solution.inequality_duals.assign(static_cast<size_t>(m_user), 0.0);
        std::vector<double> row_values(static_cast<size_t>(m_user));
        std::vector<Eigen::Index> active;
        std::vector<Eigen::VectorXd> active_grads;
        double worst = -kInf;
        for (Eigen::Index i = 0; i < m_user; ++i) {
            Eigen::VectorXd gi;
            const double val = rows[static_cast<size_t>(i)].value(y, &gi, nullptr);
            row_values[static_cast<size_t>(i)] = val;
            worst = std::max(worst, val);
            if (-val <= 1e-6) {
                active.push_back(i);
                active_grads.push_back(std::move(gi));
            } else {
                const double dual = mu / (-val);
                solution.inequality_duals[static_cast<size_t>(i)] = dual;
                residual += dual * gi;
            }
        }
        const Eigen::Index p = red.a_eq.rows();
        const Eigen::Index na = static_cast<Eigen::Index>(active.size());
        if (na + p > 0) {
            Eigen::MatrixXd basis(n, na + p);
            for (Eigen::Index k = 0; k < na; ++k) {
                basis.col(k) = active_grads[static_cast<size_t>(k)];
            }
            if (p > 0) basis.rightCols(p) = red.a_eq.transpose();
            Eigen::VectorXd coeffs =
                basis.completeOrthogonalDecomposition().solve(-residual);
            for (Eigen::Index k = 0; k < na; ++k) {
                coeffs(k) = std::max(coeffs(k), 0.0);  // dual feasibility
                solution.inequality_duals[static_cast<size_t>(active[static_cast<size_t>(k)])] =
                    coeffs(k);
            }
            residual += basis * coeffs;
            if (p > 0) {
                solution.equality_duals.assign(coeffs.data() + na, coeffs.data() + na + p);
            }
        }
        double comp = 0.0;
        for (Eigen::Index i = 0; i < m_user; ++i) {
            comp = std::max(comp, std::abs(solution.inequality_duals[static_cast<size_t>(i)] *
                                           row_values[static_cast<size_t>(i)]));
        }
        const double stat_norm = (residual.size() > 0) ? residual.cwiseAbs().maxCoeff() : 0.0;
        const double primal = (m_user > 0) ? std::max(worst, 0.0) : 0.0;
        solution.kkt_residual = std::max({stat_norm, comp, primal});
        solution.max_constraint_violation = (m_user > 0) ? std::expm1(std::max(worst, 0.0)) : 0.0;
    }

    if (!options.debug_dump_path.empty()) {
        nlohmann::json dump;
        dump["variables"] = vars;
        dump["reduced_dimension"] = d;
        dump["rows"] = {{"user", m_user}, {"total", m_total}};
        nlohmann::json stages = nlohmann::json::array();
        for (const auto& s : stage_log) {
            stages.push_back({{"mu", s.mu}, {"steps", s.steps}, {"objective", s.objective}});
        }
        dump["stages"] = std::move(stages);
        dump["status"] = to_string(solution.status);
        dump["objective_value"] = solution.objective_value;
        dump["kkt_residual"] = solution.kkt_residual;
        dump["x"] = solution.x;
        std::ofstream out(options.debug_dump_path);
        out << dump.dump(2) << '\n';
    }
    return solution;
}

double check_kkt(const GeometricProgram& gp, const Assignment& x, const GpDuals& duals) {
    gp.validate();
    const std::vector<std::string>& vars = gp.variables();
    const Eigen::Index n = static_cast<Eigen::Index>(vars.size());
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto it = x.find(vars[static_cast<size_t>(i)]);
        if (it == x.end() || !(it->second > 0.0)) {
            throw InputError("check_kkt: x must bind every variable to a positive value");
        }
        y(i) = std::log(it->second);
    }

    const std::vector<Posynomial> rows = gp.canonical_inequalities();
    if (duals.inequality.size() != rows.size()) {
        throw InputError("check_kkt: expected " + std::to_string(rows.size()) +
                         " inequality duals, got " + std::to_string(duals.inequality.size()));
    }

    Eigen::VectorXd stationarity;
    LogSumExpFunction(gp.objective(), vars).value(y, &stationarity, nullptr);
    double primal = 0.0, comp = 0.0, dual_neg = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        Eigen::VectorXd gi;
        const double val = LogSumExpFunction(rows[i], vars).value(y, &gi, nullptr);
        const double lambda = duals.inequality[i];
        stationarity += lambda * gi;
        primal = std::max(primal, val);
        comp = std::max(comp, std::abs(lambda * val));
        dual_neg = std::max(dual_neg, -lambda);
    }
    primal = std::max(primal, 0.0);
    dual_neg = std::max(dual_neg, 0.0);

    const Reduction red = reduce_equalities(vars, gp.equalities());
    double eq_resid = 0.0;
    if (red.a_eq.rows() > 0) {
        eq_resid = (red.a_eq * y - red.b_eq).cwiseAbs().maxCoeff();
        Eigen::VectorXd nu;
        if (!duals.equality.empty()) {
            if (static_cast<Eigen::Index>(duals.equality.size()) != red.a_eq.rows()) {
                throw InputError("check_kkt: wrong number of equality duals");
            }
            nu = Eigen::Map<const Eigen::VectorXd>(duals.equality.data(),
                                                   static_cast<Eigen::Index>(duals.equality.size()));
        } else {
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(red.a_eq.transpose(),
                                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
            nu = svd.solve(-stationarity);
        }
        stationarity += red.a_eq.transpose() * nu;
    }
    const double stat_norm =
        (stationarity.size() > 0) ? stationarity.cwiseAbs().maxCoeff() : 0.0;
    return std::max({stat_norm, primal, comp, dual_neg, eq_resid});
}

}  // namespace r0gp
