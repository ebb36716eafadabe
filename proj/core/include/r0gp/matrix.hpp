#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "r0gp/error.hpp"

namespace r0gp {

/// Dense real square matrix, validated on construction: square, n >= 1,
/// all entries finite. Dense routines are capped at kMaxDim.
class SquareMatrix {
public:
    static constexpr Eigen::Index kMaxDim = 512;

    explicit SquareMatrix(Eigen::MatrixXd m);

    static SquareMatrix zero(Eigen::Index n);
    static SquareMatrix identity(Eigen::Index n);

    Eigen::Index n() const { return mat_.rows(); }
    double operator()(Eigen::Index i, Eigen::Index j) const { return mat_(i, j); }
    const Eigen::MatrixXd& m() const { return mat_; }

private:
    Eigen::MatrixXd mat_;
};

/// Reads a headerless CSV of decimal floats, one matrix row per line.
/// The dimension is inferred; the file must be square.
SquareMatrix read_matrix_csv(const std::filesystem::path& path);

void write_matrix_csv(const std::filesystem::path& path, const SquareMatrix& m);

}  // namespace r0gp
