#include "r0gp/posynomial.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace r0gp {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw InputError(std::string(what) + " must be finite");
    }
}

}  // namespace

Monomial::Monomial(double coefficient, std::map<std::string, double> exponents)
    : coefficient_(coefficient), exponents_(std::move(exponents)) {
    require_finite(coefficient_, "monomial coefficient");
    if (coefficient_ <= 0.0) {
        throw InputError("monomial coefficient must be > 0");
    }
    for (auto it = exponents_.begin(); it != exponents_.end();) {
        require_finite(it->second, "monomial exponent");
        if (it->second == 0.0) {
            it = exponents_.erase(it);
        } else {
            ++it;
        }
    }
}

Monomial Monomial::variable(std::string name, double exponent) {
    if (name.empty()) {
        throw InputError("variable name must be non-empty");
    }
    return Monomial(1.0, {{std::move(name), exponent}});
}

double Monomial::eval(const Assignment& x) const {
    double value = coefficient_;
    for (const auto& [name, exponent] : exponents_) {
        const auto it = x.find(name);
        if (it == x.end()) {
            throw InputError("unbound variable '" + name + "' in evaluation");
        }
        if (!(it->second > 0.0)) {
            throw InputError("variable '" + name + "' must be bound to a positive value");
        }
        value *= std::pow(it->second, exponent);
    }
    return value;
}

Monomial& Monomial::operator*=(const Monomial& rhs) {
    coefficient_ *= rhs.coefficient_;
    for (const auto& [name, exponent] : rhs.exponents_) {
        const double merged = (exponents_[name] += exponent);
        if (merged == 0.0) exponents_.erase(name);
    }
    return *this;
}

Monomial& Monomial::operator/=(const Monomial& rhs) {
    coefficient_ /= rhs.coefficient_;
    for (const auto& [name, exponent] : rhs.exponents_) {
        const double merged = (exponents_[name] -= exponent);
        if (merged == 0.0) exponents_.erase(name);
    }
    return *this;
}

Monomial Monomial::pow(double a) const {
    require_finite(a, "monomial power");
    std::map<std::string, double> exps;
    if (a != 0.0) {
        for (const auto& [name, exponent] : exponents_) {
            exps.emplace(name, exponent * a);
        }
    }
    return Monomial(std::pow(coefficient_, a), std::move(exps));
}

bool operator<(const Monomial& a, const Monomial& b) {
    if (a.exponents_ != b.exponents_) return a.exponents_ < b.exponents_;
    return a.coefficient_ < b.coefficient_;
}

bool operator==(const Monomial& a, const Monomial& b) {
    return a.coefficient_ == b.coefficient_ && a.exponents_ == b.exponents_;
}

Posynomial::Posynomial(Monomial m) : terms_{std::move(m)} {}

Posynomial::Posynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) {
        throw InputError("posynomial must have at least one term");
    }
    canonicalize();
}

void Posynomial::canonicalize() {
    std::sort(terms_.begin(), terms_.end());
    std::vector<Monomial> merged;
    merged.reserve(terms_.size());
    for (const auto& term : terms_) {
        if (!merged.empty() && merged.back().exponents() == term.exponents()) {
            merged.back() = Monomial(merged.back().coefficient() + term.coefficient(),
                                     term.exponents());
        } else {
            merged.push_back(term);
        }
    }
    terms_ = std::move(merged);
}

const Monomial& Posynomial::as_monomial() const {
    if (!is_monomial()) {
        throw ContractError("posynomial with " + std::to_string(terms_.size()) +
                            " terms is not a monomial");
    }
    return terms_.front();
}

double Posynomial::eval(const Assignment& x) const {
    double sum = 0.0;
    for (const auto& term : terms_) {
        sum += term.eval(x);
    }
    return sum;
}

std::vector<std::string> Posynomial::variables() const {
    std::set<std::string> names;
    for (const auto& term : terms_) {
        for (const auto& [name, exponent] : term.exponents()) {
            names.insert(name);
        }
    }
    return {names.begin(), names.end()};
}

Posynomial& Posynomial::operator+=(const Posynomial& rhs) {
    terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
    canonicalize();
    return *this;
}

Posynomial& Posynomial::operator*=(const Posynomial& rhs) {
    std::vector<Monomial> product;
    product.reserve(terms_.size() * rhs.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : rhs.terms_) {
            product.push_back(a * b);
        }
    }
    terms_ = std::move(product);
    canonicalize();
    return *this;
}

Posynomial& Posynomial::operator/=(const Monomial& rhs) {
    for (auto& term : terms_) {
        term /= rhs;
    }
    canonicalize();
    return *this;
}

Posynomial divide_by_monomial(const Posynomial& numerator, const Posynomial& divisor) {
    if (!divisor.is_monomial()) {
        throw ContractError("division is only defined by a monomial divisor");
    }
    return numerator / divisor.as_monomial();
}

LogSumExpFunction::LogSumExpFunction(const Posynomial& p,
                                     const std::vector<std::string>& variable_order) {
    std::map<std::string, Eigen::Index> index;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(variable_order.size()); ++i) {
        if (!index.emplace(variable_order[static_cast<size_t>(i)], i).second) {
            throw InputError("duplicate variable '" + variable_order[static_cast<size_t>(i)] +
                             "' in ordering");
        }
    }
    const Eigen::Index k = static_cast<Eigen::Index>(p.terms().size());
    exponents_ = Eigen::MatrixXd::Zero(k, static_cast<Eigen::Index>(variable_order.size()));
    log_coefficients_.resize(k);
    for (Eigen::Index t = 0; t < k; ++t) {
        const Monomial& term = p.terms()[static_cast<size_t>(t)];
        log_coefficients_(t) = std::log(term.coefficient());
        for (const auto& [name, exponent] : term.exponents()) {
            const auto it = index.find(name);
            if (it == index.end()) {
                throw InputError("variable '" + name + "' missing from ordering");
            }
            exponents_(t, it->second) = exponent;
        }
    }
}

double LogSumExpFunction::value(const Eigen::VectorXd& y) const {
    return value(y, nullptr, nullptr);
}

double LogSumExpFunction::value(const Eigen::VectorXd& y, Eigen::VectorXd* gradient,
                                Eigen::MatrixXd* hessian) const {
    if (y.size() != dimension()) {
        throw ContractError("log-space point has wrong dimension");
    }
    if (is_affine()) {
        if (gradient) *gradient = exponents_.row(0).transpose();
        if (hessian) hessian->setZero(dimension(), dimension());
        return log_coefficients_(0) + exponents_.row(0).dot(y);
    }
    const Eigen::VectorXd scores = log_coefficients_ + exponents_ * y;
    const double shift = scores.maxCoeff();
    const Eigen::VectorXd weights = (scores.array() - shift).exp();
    const double total = weights.sum();
    const double val = shift + std::log(total);
    if (gradient || hessian) {
        const Eigen::VectorXd softmax = weights / total;
        const Eigen::VectorXd g = exponents_.transpose() * softmax;
        if (gradient) *gradient = g;
        if (hessian) {
            *hessian = exponents_.transpose() * softmax.asDiagonal() * exponents_ -
                       g * g.transpose();
        }
    }
    return val;
}

LogSumExpFunction log_transform(const Posynomial& p,
                                const std::vector<std::string>& variable_order) {
    return LogSumExpFunction(p, variable_order);
}

}  // namespace r0gp
