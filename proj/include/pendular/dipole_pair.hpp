#pragma once

#include "pendular/pendular_moments.hpp"

#include <Eigen/Dense>

#include <cmath>

#include <span>
#include <vector>

namespace pendular {

/// Angle where 3 cos^2(alpha) = 1 and the zz coupling vanishes.
inline const double kMagicAngle = std::acos(1.0 / std::sqrt(3.0));

/// Dipole-dipole scale omega = mu^2 / r^3 (units of B) and the angle alpha
/// between the array axis and the field (radians, [0, pi/2]).
struct CouplingGeometry {
    double omega = 0.0;
    double alpha = 0.0;

    [[nodiscard]] double p_alpha() const noexcept;  ///< 1 - 3 cos^2(alpha)
    [[nodiscard]] double q_alpha() const noexcept;  ///< -3 sin^2(alpha)
    void validate() const;
};

/// Couplings of  jx XX + jy YY + jz ZZ - gamma (Z1 + Z2) + shift * I  (units of B).
///
/// Pauli convention: sigma_z |down> = +|down>, sigma_z |up> = -|up>, so the
/// lower pseudo-spin level is the +1 eigenstate and gamma > 0 favours it.
struct HeisenbergConstants {
    double jx = 0.0;
    double jy = 0.0;
    double jz = 0.0;
    double gamma = 0.0;
    double shift = 0.0;
};

// Two-molecule matrices use the basis order {dd, du, ud, uu} (molecule 1 first).

/// Dipole-dipole block in the pseudo-spin product basis, built from the moments.
[[nodiscard]] Eigen::Matrix4d pair_vdd(const MomentSet& m, const CouplingGeometry& g);

/// H_s1 + H_s2 + V_dd.
[[nodiscard]] Eigen::Matrix4d pair_hamiltonian(const MomentSet& m, const CouplingGeometry& g);

/// Full angular dipole-dipole operator projected onto the pseudo-spin product
/// states, term by term from single-molecule matrix elements. No structure of
/// the pair block is assumed.
[[nodiscard]] Eigen::Matrix4cd vdd_first_principles_complex(const PseudoSpinStates& s,
                                                            const CouplingGeometry& g);

/// Real part of vdd_first_principles_complex at reduced field x.
[[nodiscard]] Eigen::Matrix4d vdd_from_first_principles(double x, const CouplingGeometry& g,
                                                        int j_max = kDefaultJMax);

[[nodiscard]] HeisenbergConstants heisenberg_constants(const MomentSet& m,
                                                       const CouplingGeometry& g);

/// The spin Hamiltonian of `c` as a real 4x4 matrix (the sigma_y products are real).
[[nodiscard]] Eigen::Matrix4d xyz_hamiltonian(const HeisenbergConstants& c);

/// Contour data: couplings divided by omega, gamma2 being the omega-proportional part of gamma.
struct CouplingMapRow {
    double x;
    double alpha;
    double jx_over_omega;
    double jy_over_omega;
    double jz_over_omega;
    double gamma2_over_omega;
};

/// Rows ordered by (x, alpha).
[[nodiscard]] std::vector<CouplingMapRow> coupling_map(std::span<const double> x_grid,
                                                       std::span<const double> alpha_grid,
                                                       int j_max = kDefaultJMax,
                                                       unsigned workers = 0);

}  // namespace pendular
