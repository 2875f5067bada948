#pragma once

#include <Eigen/Dense>

#include <span>

namespace pendular {

/// Eigenpairs of a real symmetric tridiagonal matrix, eigenvalues ascending.
/// Column k of `vectors` belongs to `values[k]`; empty when not requested.
struct TridiagonalEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// Implicit QL with Wilkinson shifts (tql2 lineage).
///
/// `diagonal` has n entries, `off_diagonal` has n-1 entries where
/// off_diagonal[i] couples rows i and i+1. Throws ConvergenceError when an
/// eigenvalue needs more than `max_iterations` QL sweeps.
TridiagonalEigen solve_tridiagonal(std::span<const double> diagonal,
                                   std::span<const double> off_diagonal,
                                   bool want_vectors = true,
                                   int max_iterations = 60);

}  // namespace pendular
