#pragma once

#include <stdexcept>

#include <Eigen/Dense>

namespace bosonwalk {

struct EigResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns match values
};

/// Dense symmetric eigensolver. Rejects input that is not symmetric within
/// 1e-10 (relative to the largest entry).
inline EigResult symmetric_eig(const Eigen::MatrixXd& matrix) {
    if (matrix.rows() != matrix.cols()) throw std::invalid_argument("symmetric_eig: matrix not square");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * scale) throw std::invalid_argument("symmetric_eig: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (matrix + matrix.transpose()));
    if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric_eig: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace bosonwalk
