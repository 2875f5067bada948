#pragma once

#include "pendular/rotor_basis.hpp"

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

namespace pendular {

/// Pseudo-spin ingredients at one reduced field value.
///
/// |down> = lowest m=1 pendular state (field-free parent |1,1>),
/// |up>   = second m=0 pendular state (field-free parent |1,0>).
/// Energies in units of B; the moments are dimensionless.
struct MomentSet {
    double x = 0.0;
    double e0 = 0.0;  ///< energy of |down>
    double e1 = 0.0;  ///< energy of |up>
    double c0 = 0.0;  ///< <down|cos(theta)|down>
    double c1 = 0.0;  ///< <up|cos(theta)|up>
    double cx = 0.0;  ///< <down|sin(theta)cos(phi)|up>

    [[nodiscard]] double delta_e() const noexcept { return e1 - e0; }
};

enum class PseudoSpin { down, up };

[[nodiscard]] std::string_view to_string(PseudoSpin s) noexcept;

/// The two pseudo-spin pendular states with their bases.
struct PseudoSpinStates {
    double x = 0.0;
    BasisSpec down_basis;
    BasisSpec up_basis;
    Eigen::VectorXd down;
    Eigen::VectorXd up;
    double e_down = 0.0;
    double e_up = 0.0;
};

/// `down_m` selects the M = +1 state or its degenerate M = -1 partner.
[[nodiscard]] PseudoSpinStates pseudo_spin_states(double x, int j_max = kDefaultJMax,
                                                  int down_m = 1);

[[nodiscard]] MomentSet moments(double x, int j_max = kDefaultJMax);
[[nodiscard]] MomentSet moments(const PseudoSpinStates& states);

/// Moments over a grid, evaluated concurrently; output follows grid order.
[[nodiscard]] std::vector<MomentSet> moment_scan(std::span<const double> x_grid,
                                                 int j_max = kDefaultJMax, unsigned workers = 0);

struct StarkMapRow {
    double x;
    int m;
    int j_tilde;
    double energy;  ///< units of B
};

/// Lowest `n_states` energies for each m, rows ordered by (x, m as given, J~).
[[nodiscard]] std::vector<StarkMapRow> stark_map(std::span<const double> x_grid,
                                                 std::span<const int> m_values, int n_states,
                                                 int j_max = kDefaultJMax, unsigned workers = 0);

struct CoefficientRow {
    double x;
    int j;
    double coefficient;
};

/// Expansion coefficients of a pseudo-spin state over |J,m>, rows ordered by (x, J).
[[nodiscard]] std::vector<CoefficientRow> coefficient_map(std::span<const double> x_grid,
                                                          PseudoSpin state,
                                                          int j_max = kDefaultJMax,
                                                          unsigned workers = 0);

/// Grid lo, lo+step, ..., hi (hi included when it lands on the grid to within 1e-9 step).
[[nodiscard]] std::vector<double> uniform_grid(double lo, double hi, double step);

/// Throws InvalidArgument unless the grid is non-empty, strictly ascending and >= 0.
void validate_grid(std::span<const double> grid, std::string_view what);

/// Sign changes of sampled y(x), located by bisection on the cubic through
/// the four samples surrounding each bracketing interval.
[[nodiscard]] std::vector<double> locate_zero_crossings(std::span<const double> xs,
                                                        std::span<const double> ys);

/// Interior zeros of C1(x) on [0, x_max] sampled with step `step`.
[[nodiscard]] std::vector<double> c1_zero_crossings(double x_max = 12.0, double step = 0.01,
                                                    int j_max = kDefaultJMax);

}  // namespace pendular
