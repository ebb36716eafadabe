#pragma once

#include <Eigen/Dense>
#include <optional>

#include "r0gp/matrix.hpp"

namespace r0gp {

/// Default stability margin: M counts as Hurwitz when max Re(lambda) < -kHurwitzTol.
inline constexpr double kHurwitzTol = 1e-10;

/// True iff every off-diagonal entry of M is >= -tol.
bool is_metzler(const SquareMatrix& m, double tol = 0.0);

/// True iff every entry of A is >= -tol.
bool is_nonnegative(const SquareMatrix& a, double tol = 0.0);

/// True iff max Re(lambda_i) < -tol, via a dense nonsymmetric eigensolver.
bool is_hurwitz(const SquareMatrix& m, double tol = kHurwitzTol);

/// max |lambda_i|.
double spectral_radius(const SquareMatrix& a);

/// max Re(lambda_i).
double spectral_abscissa(const SquareMatrix& m);

/// Spectral radius of a non-negative matrix by shifted power iteration,
/// with Collatz-Wielandt bounds as the stopping criterion. Intended as an
/// independent cross-check of the eigensolver on irreducible instances.
double spectral_radius_power(const SquareMatrix& a, double rel_tol = 1e-12,
                             int max_iterations = 500000);

struct WitnessResult {
    /// w > 0 with M w < 0, present iff M is Hurwitz and well-conditioned.
    std::optional<Eigen::VectorXd> w;
    /// True when M passed the Hurwitz test but was too ill-conditioned
    /// (condition estimate > 1e12) to return a reliable witness.
    bool degenerate = false;
};

/// For Metzler M: returns w = -M^{-1} 1 when M is Hurwitz, otherwise no witness.
/// Throws ContractError when M is not Metzler.
WitnessResult metzler_hurwitz_witness(const SquareMatrix& m);

struct PerturbedStability {
    bool hurwitz;  ///< whether H + E is Hurwitz
    double rho;    ///< spectral radius of -E H^{-1}
};

/// Both sides of the perturbed-stability equivalence for Metzler-Hurwitz H
/// and non-negative E; callers assert hurwitz <=> rho < 1.
PerturbedStability perturbed_stability_equivalent(const SquareMatrix& h, const SquareMatrix& e);

}  // namespace r0gp
