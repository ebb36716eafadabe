#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "r0gp/error.hpp"

namespace r0gp {

/// Binding of variable names to strictly positive values.
using Assignment = std::map<std::string, double>;

/// c * x1^b1 * ... * xn^bn with c > 0. Variables with exponent 0 are dropped.
class Monomial {
public:
    /// The constant monomial 1.
    Monomial() = default;
    Monomial(double coefficient, std::map<std::string, double> exponents);

    static Monomial constant(double c) { return Monomial(c, {}); }
    static Monomial variable(std::string name, double exponent = 1.0);

    double coefficient() const { return coefficient_; }
    const std::map<std::string, double>& exponents() const { return exponents_; }
    bool is_constant() const { return exponents_.empty(); }

    double eval(const Assignment& x) const;

    Monomial& operator*=(const Monomial& rhs);
    Monomial& operator/=(const Monomial& rhs);
    friend Monomial operator*(Monomial lhs, const Monomial& rhs) { return lhs *= rhs; }
    friend Monomial operator/(Monomial lhs, const Monomial& rhs) { return lhs /= rhs; }
    Monomial pow(double a) const;

    /// Total order on exponent maps, used for canonical term ordering.
    friend bool operator<(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b);

private:
    double coefficient_ = 1.0;
    std::map<std::string, double> exponents_;
};

/// Non-empty sum of monomials. Construction canonicalizes: terms with
/// identical exponent vectors are merged (coefficients summed) and the term
/// list is sorted, so structurally equal posynomials compare equal.
class Posynomial {
public:
    Posynomial(Monomial m);  // NOLINT(google-explicit-constructor): monomials are posynomials
    explicit Posynomial(std::vector<Monomial> terms);

    static Posynomial constant(double c) { return Posynomial(Monomial::constant(c)); }
    static Posynomial variable(std::string name, double exponent = 1.0) {
        return Posynomial(Monomial::variable(std::move(name), exponent));
    }

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_monomial() const { return terms_.size() == 1; }
    const Monomial& as_monomial() const;

    double eval(const Assignment& x) const;

    /// Sorted list of distinct variable names appearing in any term.
    std::vector<std::string> variables() const;

    Posynomial& operator+=(const Posynomial& rhs);
    Posynomial& operator*=(const Posynomial& rhs);
    Posynomial& operator/=(const Monomial& rhs);
    friend Posynomial operator+(Posynomial lhs, const Posynomial& rhs) { return lhs += rhs; }
    friend Posynomial operator*(Posynomial lhs, const Posynomial& rhs) { return lhs *= rhs; }
    friend Posynomial operator/(Posynomial lhs, const Monomial& rhs) { return lhs /= rhs; }

private:
    void canonicalize();
    std::vector<Monomial> terms_;
};

/// Dividing a posynomial by a general posynomial is only defined when the
/// divisor is a single monomial; throws ContractError otherwise.
Posynomial divide_by_monomial(const Posynomial& numerator, const Posynomial& divisor);

/// Evaluator of y -> log p(e^y) for a fixed variable ordering: the convex
/// log-sum-exp image of a posynomial, with exact gradient and Hessian.
/// Single-term posynomials are recognized as affine (zero Hessian).
class LogSumExpFunction {
public:
    LogSumExpFunction(const Posynomial& p, const std::vector<std::string>& variable_order);

    Eigen::Index dimension() const { return exponents_.cols(); }
    Eigen::Index term_count() const { return exponents_.rows(); }
    bool is_affine() const { return exponents_.rows() == 1; }

    double value(const Eigen::VectorXd& y) const;
    /// Value with optional gradient/Hessian outputs (pass nullptr to skip).
    double value(const Eigen::VectorXd& y, Eigen::VectorXd* gradient,
                 Eigen::MatrixXd* hessian) const;

    const Eigen::MatrixXd& exponent_matrix() const { return exponents_; }
    const Eigen::VectorXd& log_coefficients() const { return log_coefficients_; }

private:
    Eigen::MatrixXd exponents_;  // one row per term
    Eigen::VectorXd log_coefficients_;
};

/// Builds the log-space evaluator of p over the given variable ordering.
/// Every variable used by p must appear in variable_order.
LogSumExpFunction log_transform(const Posynomial& p, const std::vector<std::string>& variable_order);

}  // namespace r0gp
