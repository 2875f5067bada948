#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

namespace pendular {

/// Default truncation of the spherical-harmonic basis.
inline constexpr int kDefaultJMax = 30;

/// Truncated basis {|J,m> : J = |m| .. j_max} at fixed azimuthal number m.
struct BasisSpec {
    int m = 0;
    int j_max = kDefaultJMax;

    [[nodiscard]] int j_min() const noexcept { return m < 0 ? -m : m; }
    [[nodiscard]] int dimension() const noexcept { return j_max - j_min() + 1; }
    /// Rotational quantum number J of basis row `index`.
    [[nodiscard]] int j_at(int index) const noexcept { return j_min() + index; }

    /// Throws InvalidArgument when j_max < |m|.
    void validate() const;
};

/// Symmetric tridiagonal Stark Hamiltonian B J^2 - mu eps cos(theta) in units of B.
struct StarkMatrix {
    std::vector<double> diagonal;
    std::vector<double> off_diagonal;

    [[nodiscard]] Eigen::MatrixXd dense() const;
};

/// Pendular eigenstates at reduced field x = mu eps / B for one m block.
///
/// `energies` ascend (units of B). Column k of `coefficients` expands the
/// k-th state over |J,m>, J = |m| .. j_max; it carries the adiabatic label
/// J~ = |m| + k. Sign convention: the coefficient on the field-free parent
/// |J = |m|+k, m> is positive, which keeps every column continuous in x
/// through the region where another component becomes dominant. If the
/// parent coefficient is negligible the largest-magnitude entry is made
/// positive instead.
struct PendularSolution {
    double x = 0.0;
    BasisSpec spec;
    Eigen::VectorXd energies;
    Eigen::MatrixXd coefficients;

    [[nodiscard]] int adiabatic_j(int k) const noexcept { return spec.j_min() + k; }
    [[nodiscard]] Eigen::VectorXd state(int k) const { return coefficients.col(k); }
};

enum class AngularOperator {
    cos_theta,
    sin_theta_cos_phi,
    /// Stored divided by i: the operator's matrix elements are purely imaginary.
    sin_theta_sin_phi,
};

[[nodiscard]] std::string_view to_string(AngularOperator op) noexcept;

/// <J+1,m|cos(theta)|J,m> (Condon-Shortley phases).
[[nodiscard]] double cos_theta_step(int j, int m) noexcept;

/// <j_bra, m+1| sin(theta) e^{i phi} |j_ket, m>; nonzero only for j_bra = j_ket +- 1.
[[nodiscard]] double sin_theta_raise(int j_bra, int j_ket, int m) noexcept;

/// Throws InvalidArgument for x < 0 or an invalid basis.
[[nodiscard]] StarkMatrix build_stark_hamiltonian(double x, const BasisSpec& spec);

/// Full eigendecomposition of the Stark matrix via the tridiagonal QL solver.
/// Solver failure is rethrown as ConvergenceError naming (x, m, j_max).
[[nodiscard]] PendularSolution solve_pendular(double x, const BasisSpec& spec);

/// Matrix <J',m_bra| op |J,m_ket> over the two truncated bases (rows: bra).
/// cos_theta needs m_bra == m_ket; the sin(theta) operators need |m_bra - m_ket| == 1.
[[nodiscard]] Eigen::MatrixXd operator_matrix(AngularOperator op, const BasisSpec& bra,
                                              const BasisSpec& ket);

/// <bra_state| op |ket_state> for pendular states expanded in the given bases.
[[nodiscard]] double matrix_element(AngularOperator op, const BasisSpec& bra,
                                    const Eigen::VectorXd& bra_state, const BasisSpec& ket,
                                    const Eigen::VectorXd& ket_state);

}  // namespace pendular
