#include "r0gp/matrix.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace r0gp {

SquareMatrix::SquareMatrix(Eigen::MatrixXd m) : mat_(std::move(m)) {
    if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
        throw InputError("SquareMatrix: expected a non-empty square matrix, got " +
                         std::to_string(mat_.rows()) + "x" + std::to_string(mat_.cols()));
    }
    if (mat_.rows() > kMaxDim) {
        throw InputError("SquareMatrix: dimension " + std::to_string(mat_.rows()) +
                         " exceeds the dense-routine cap of " + std::to_string(kMaxDim));
    }
    if (!mat_.allFinite()) {
        throw InputError("SquareMatrix: entries must be finite (no NaN/Inf)");
    }
}

SquareMatrix SquareMatrix::zero(Eigen::Index n) {
    return SquareMatrix(Eigen::MatrixXd::Zero(n, n));
}

SquareMatrix SquareMatrix::identity(Eigen::Index n) {
    return SquareMatrix(Eigen::MatrixXd::Identity(n, n));
}

SquareMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open matrix CSV: " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InputError("bad numeric cell '" + cell + "' in " + path.string());
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw InputError("ragged rows in matrix CSV: " + path.string());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw InputError("empty matrix CSV: " + path.string());
    }
    if (rows.size() != rows.front().size()) {
        throw InputError("matrix CSV is not square: " + path.string());
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    return SquareMatrix(std::move(m));
}

void write_matrix_csv(const std::filesystem::path& path, const SquareMatrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write matrix CSV: " + path.string());
    }
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < m.n(); ++i) {
        for (Eigen::Index j = 0; j < m.n(); ++j) {
            if (j > 0) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

}  // namespace r0gp
