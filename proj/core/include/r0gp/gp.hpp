#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "r0gp/posynomial.hpp"

namespace r0gp {

/// Standard-form geometric program: minimize a posynomial subject to
/// posynomial constraints <= 1 and monomial constraints = 1, over strictly
/// positive named variables with optional box bounds.
class GeometricProgram {
public:
    void add_variable(const std::string& name);
    bool has_variable(const std::string& name) const;
    const std::vector<std::string>& variables() const { return variables_; }

    void set_objective(Posynomial objective);
    const Posynomial& objective() const { return objective_; }

    void add_inequality(Posynomial constraint);  // meaning <= 1
    const std::vector<Posynomial>& inequalities() const { return inequalities_; }

    void add_equality(Monomial constraint);  // meaning = 1
    const std::vector<Monomial>& equalities() const { return equalities_; }

    /// Positive box bounds; pass +inf as upper for a one-sided bound.
    void set_bounds(const std::string& name, double lower, double upper);
    struct Bounds {
        std::optional<double> lower, upper;
    };
    const std::map<std::string, Bounds>& bounds() const { return bounds_; }

    /// User inequalities followed by bound rows (lower then upper, in
    /// variable order): the constraint list the solver and check_kkt share.
    std::vector<Posynomial> canonical_inequalities() const;

    /// Throws InputError if any expression references an undeclared variable.
    void validate() const;

private:
    std::vector<std::string> variables_;
    Posynomial objective_ = Posynomial::constant(1.0);
    std::vector<Posynomial> inequalities_;
    std::vector<Monomial> equalities_;
    std::map<std::string, Bounds> bounds_;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations };

const char* to_string(SolveStatus status);

struct SolverOptions {
    /// Target gap m*mu in log-objective units before the barrier stops.
    double duality_gap = 1e-8;
    /// Total Newton-step budget across both solver phases.
    int max_newton_steps = 200;
    /// Newton decrement threshold (lambda^2 / 2) ending a centering stage.
    double newton_tol = 1e-11;
    /// Phase-I max constraint excess (log units) above which the program
    /// is declared infeasible. Sized against the safety box: an open
    /// infimum pressed onto the box shows an excess near exp(-log_box),
    /// which must register as infeasible when the cap is exact.
    double phase1_feastol = 5e-8;
    /// Half-width of the internal log-space safety box. Open infima are
    /// reported as optimal at this box, so looser boxes track open infima
    /// more closely but weaken infeasibility detection.
    double log_box = 15.0;
    double barrier_shrink = 0.1;
    double mu0 = 1.0;
    /// When non-empty, writes a JSON record of the convexified problem and
    /// the iterate history to this path.
    std::string debug_dump_path;
};

struct GpSolution {
    SolveStatus status = SolveStatus::infeasible;
    Assignment x;
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    double kkt_residual = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    /// max over user rows of f_i(x) - 1 and equality log-residuals at x.
    double max_constraint_violation = std::numeric_limits<double>::quiet_NaN();
    /// Phase-I optimal max excess (log units); > phase1_feastol means infeasible.
    double phase1_excess = std::numeric_limits<double>::quiet_NaN();
    /// Barrier duals for canonical_inequalities() at the final iterate.
    std::vector<double> inequality_duals;
    std::vector<double> equality_duals;
};

/// Solves the program by log-space convexification and a primal log-barrier
/// Newton method with phase-I infeasibility detection. Deterministic.
GpSolution solve(const GeometricProgram& gp, const SolverOptions& options = {});

struct GpDuals {
    std::vector<double> inequality;  ///< one per canonical_inequalities() row
    std::vector<double> equality;    ///< one per equality; empty = fit by least squares
};

/// Max-norm KKT residual of the convexified problem at (x, duals):
/// stationarity, complementary slackness, primal and dual feasibility.
double check_kkt(const GeometricProgram& gp, const Assignment& x, const GpDuals& duals);

}  // namespace r0gp
