#pragma once

#include "r0gp/gp.hpp"
#include "r0gp/matrix.hpp"
#include "r0gp/spectral.hpp"

namespace r0gp {

/// Linearized infected-subsystem dynamics xdot = (F + V) x, where F >= 0
/// holds the new-infection rates and V (Metzler, Hurwitz) the remaining
/// transitions. Construction validates structure: F >= 0, V Metzler with a
/// strictly negative diagonal. Hurwitzness of V is checked by the
/// operations that rely on it (see require_hurwitz).
class LinearizedEpidemic {
public:
    LinearizedEpidemic(SquareMatrix new_infections, SquareMatrix transitions);

    Eigen::Index n() const { return new_infections_.n(); }
    const SquareMatrix& F() const { return new_infections_; }
    const SquareMatrix& V() const { return transitions_; }
    /// Off-diagonal part of V (non-negative, zero diagonal).
    const Eigen::MatrixXd& v_offdiag() const { return v_offdiag_; }
    /// Diagonal decay rates: -diag(V) > 0.
    const Eigen::VectorXd& v_decay() const { return v_decay_; }

    /// Throws ContractError when V is not Hurwitz at the given margin.
    void require_hurwitz(double tol = kHurwitzTol) const;

private:
    SquareMatrix new_infections_;
    SquareMatrix transitions_;
    Eigen::MatrixXd v_offdiag_;
    Eigen::VectorXd v_decay_;
};

/// R0 as the spectral radius of the next-generation matrix -F V^{-1}
/// (equal to rho(F V^{-1}); the sign puts the radius on a non-negative
/// matrix for conditioning).
double r0_eigen(const LinearizedEpidemic& lin);

/// R0 as inf{r > 0 : F + rV Hurwitz}, located by doubling to bracket and
/// bisecting on the Hurwitz predicate to the given absolute tolerance.
double r0_bisection(const LinearizedEpidemic& lin, double tol = 1e-9);

/// R0 via the geometric program: minimize r over (r, w > 0) subject to
/// diag(r V_d w)^{-1} (F + r V_od) w <= 1, with w_1 = 1 fixed to remove the
/// scale invariance. Throws ContractError when some diagonal decay is zero.
double r0_gp(const LinearizedEpidemic& lin, const SolverOptions& options = {});

/// Same program, returning the full solver report (iterates, KKT residual).
GpSolution r0_gp_solution(const LinearizedEpidemic& lin, const SolverOptions& options = {});

}  // namespace r0gp
