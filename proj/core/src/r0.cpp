#include "r0gp/r0.hpp"

#include <cmath>
#include <string>

namespace r0gp {

namespace {

std::string w_name(Eigen::Index i) {
    return "w[" + std::to_string(i) + "]";
}

}  // namespace

LinearizedEpidemic::LinearizedEpidemic(SquareMatrix new_infections, SquareMatrix transitions)
    : new_infections_(std::move(new_infections)), transitions_(std::move(transitions)) {
    if (new_infections_.n() != transitions_.n()) {
        throw ContractError("F and V must have the same dimension");
    }
    if (!is_nonnegative(new_infections_, 1e-12)) {
        throw ContractError("F must be non-negative");
    }
    if (!is_metzler(transitions_, 1e-12)) {
        throw ContractError("V must be Metzler");
    }
    const Eigen::Index n = transitions_.n();
    v_offdiag_ = transitions_.m();
    v_decay_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v_decay_(i) = -transitions_(i, i);
        v_offdiag_(i, i) = 0.0;
    }
    v_offdiag_ = v_offdiag_.cwiseMax(0.0);  // clip the tolerated tiny negatives
    if ((v_decay_.array() <= 0.0).any()) {
        throw ContractError("V must have a strictly negative diagonal (Hurwitz Metzler)");
    }
}

void LinearizedEpidemic::require_hurwitz(double tol) const {
    if (!is_hurwitz(transitions_, tol)) {
        throw ContractError("V must be Hurwitz");
    }
}

double r0_eigen(const LinearizedEpidemic& lin) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lin.V().m());
    if (lu.rcond() < 1e-15) {
        throw ContractError("V is numerically singular; Hurwitz precondition violated");
    }
    const Eigen::MatrixXd ngm = -lin.F().m() * lu.inverse();
    return spectral_radius(SquareMatrix(ngm));
}

double r0_bisection(const LinearizedEpidemic& lin, double tol) {
    if (!(tol > 0.0)) {
        throw InputError("bisection tolerance must be > 0");
    }
    const Eigen::MatrixXd& f = lin.F().m();
    const Eigen::MatrixXd& v = lin.V().m();
    const auto stable = [&](double r) { return is_hurwitz(SquareMatrix(f + r * v)); };

    double hi = 1.0;
    int doublings = 0;
    while (!stable(hi)) {
        hi *= 2.0;
        if (++doublings > 60) {
            throw SolverError("no stable bracket within 60 doublings; check preconditions");
        }
    }
    double lo = tol;
    if (stable(lo)) {
        return lo;  // infimum at the zero floor (e.g. F = 0)
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (stable(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double r0_gp(const LinearizedEpidemic& lin, const SolverOptions& options) {
    return r0_gp_solution(lin, options).x.at("r");
}

GpSolution r0_gp_solution(const LinearizedEpidemic& lin, const SolverOptions& options) {
    const Eigen::Index n = lin.n();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(lin.v_decay()(i) > 0.0)) {
            throw ContractError("diagonal decay required: V_d[" + std::to_string(i) +
                                "] must be positive");
        }
    }

    GeometricProgram gp;
    gp.add_variable("r");
    for (Eigen::Index i = 0; i < n; ++i) gp.add_variable(w_name(i));
    gp.set_objective(Posynomial::variable("r"));
    gp.add_equality(Monomial::variable(w_name(0)));  // w_1 = 1

    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<Monomial> numerator;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (lin.F()(i, j) > 0.0) {
                numerator.push_back(Monomial(lin.F()(i, j), {{w_name(j), 1.0}}));
            }
            if (i != j && lin.v_offdiag()(i, j) > 0.0) {
                numerator.push_back(
                    Monomial(lin.v_offdiag()(i, j), {{"r", 1.0}, {w_name(j), 1.0}}));
            }
        }
        if (numerator.empty()) continue;  // vacuous row
        const Monomial denom(lin.v_decay()(i), {{"r", 1.0}, {w_name(i), 1.0}});
        gp.add_inequality(Posynomial(std::move(numerator)) / denom);
    }

    GpSolution sol = solve(gp, options);
    if (sol.status != SolveStatus::optimal) {
        throw SolverError(std::string("r0_gp: solver reported ") + to_string(sol.status));
    }
    return sol;
}

}  // namespace r0gp
