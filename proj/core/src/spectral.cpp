#include "r0gp/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace r0gp {

namespace {

Eigen::VectorXcd eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw SolverError("dense eigensolver failed to converge (n = " +
                          std::to_string(m.rows()) + ")");
    }
    return es.eigenvalues();
}

}  // namespace

bool is_metzler(const SquareMatrix& m, double tol) {
    for (Eigen::Index i = 0; i < m.n(); ++i) {
        for (Eigen::Index j = 0; j < m.n(); ++j) {
            if (i != j && m(i, j) < -tol) return false;
        }
    }
    return true;
}

bool is_nonnegative(const SquareMatrix& a, double tol) {
    return (a.m().array() >= -tol).all();
}

bool is_hurwitz(const SquareMatrix& m, double tol) {
    return eigenvalues(m.m()).real().maxCoeff() < -tol;
}

double spectral_radius(const SquareMatrix& a) {
    return eigenvalues(a.m()).cwiseAbs().maxCoeff();
}

double spectral_abscissa(const SquareMatrix& m) {
    return eigenvalues(m.m()).real().maxCoeff();
}

double spectral_radius_power(const SquareMatrix& a, double rel_tol, int max_iterations) {
    if (!is_nonnegative(a, 0.0)) {
        throw ContractError("spectral_radius_power requires a non-negative matrix");
    }
    const Eigen::Index n = a.n();
    // The +I shift makes periodic non-negative matrices primitive; rho(A+I) = rho(A)+1.
    const Eigen::MatrixXd shifted = a.m() + Eigen::MatrixXd::Identity(n, n);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    double lo = 0.0, hi = 0.0;
    for (int it = 0; it < max_iterations; ++it) {
        Eigen::VectorXd y = shifted * x;
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double ratio = y(i) / x(i);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
        if (hi - lo <= rel_tol * hi) {
            return 0.5 * (lo + hi) - 1.0;
        }
        const double norm = y.sum();
        if (norm <= 0.0 || !std::isfinite(norm)) {
            throw SolverError("power iteration degenerated (zero or non-finite iterate)");
        }
        x = y / norm;
    }
    throw SolverError("power iteration did not converge; matrix may be reducible");
}

WitnessResult metzler_hurwitz_witness(const SquareMatrix& m) {
    if (!is_metzler(m, 1e-12)) {
        throw ContractError("metzler_hurwitz_witness requires a Metzler matrix");
    }
    if (!is_hurwitz(m)) {
        return {};
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.m());
    if (lu.rcond() < 1e-12) {
        return {.w = std::nullopt, .degenerate = true};
    }
    // w = -M^{-1} 1 > 0 and M w = -1 < 0 whenever M is Metzler-Hurwitz.
    Eigen::VectorXd w = lu.solve(Eigen::VectorXd::Constant(m.n(), -1.0));
    return {.w = std::move(w), .degenerate = false};
}

PerturbedStability perturbed_stability_equivalent(const SquareMatrix& h, const SquareMatrix& e) {
    if (!is_metzler(h, 1e-12)) {
        throw ContractError("perturbed_stability_equivalent: H must be Metzler");
    }
    if (!is_hurwitz(h)) {
        throw ContractError("perturbed_stability_equivalent: H must be Hurwitz");
    }
    if (!is_nonnegative(e, 1e-12)) {
        throw ContractError("perturbed_stability_equivalent: E must be non-negative");
    }
    if (h.n() != e.n()) {
        throw ContractError("perturbed_stability_equivalent: dimension mismatch");
    }
    const bool hurwitz = is_hurwitz(SquareMatrix(h.m() + e.m()));
    // rho(-E H^{-1}) computed as the radius of the non-negative product.
    const Eigen::MatrixXd product = -e.m() * h.m().partialPivLu().inverse();
    const double rho = spectral_radius(SquareMatrix(product));
    return {.hurwitz = hurwitz, .rho = rho};
}

}  // namespace r0gp
