#include "pendular/pendular_moments.hpp"

#include "pendular/error.hpp"
#include "pendular/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pendular {

std::string_view to_string(PseudoSpin s) noexcept {
    return s == PseudoSpin::down ? "down" : "up";
}

PseudoSpinStates pseudo_spin_states(double x, int j_max, int down_m) {
    if (down_m != 1 && down_m != -1) {
        throw InvalidArgument("pseudo_spin_states: down_m must be +1 or -1");
    }
    if (j_max < 1) {
        throw InvalidArgument("pseudo_spin_states: j_max must be >= 1");
    }
    const BasisSpec down_basis{down_m, j_max};
    const BasisSpec up_basis{0, j_max};
    const PendularSolution down = solve_pendular(x, down_basis);
    const PendularSolution up = solve_pendular(x, up_basis);

    PseudoSpinStates out;
    out.x = x;
    out.down_basis = down_basis;
    out.up_basis = up_basis;
    out.down = down.state(0);
    out.up = up.state(1);
    out.e_down = down.energies[0];
    out.e_up = up.energies[1];
    return out;
}

MomentSet moments(const PseudoSpinStates& s) {
    MomentSet out;
    out.x = s.x;
    out.e0 = s.e_down;
    out.e1 = s.e_up;
    out.c0 = matrix_element(AngularOperator::cos_theta, s.down_basis, s.down, s.down_basis, s.down);
    out.c1 = matrix_element(AngularOperator::cos_theta, s.up_basis, s.up, s.up_basis, s.up);
    out.cx = matrix_element(AngularOperator::sin_theta_cos_phi, s.down_basis, s.down, s.up_basis,
                            s.up);
    return out;
}

MomentSet moments(double x, int j_max) { return moments(pseudo_spin_states(x, j_max)); }

std::vector<MomentSet> moment_scan(std::span<const double> x_grid, int j_max, unsigned workers) {
    validate_grid(x_grid, "moment_scan");
    return parallel_map(x_grid.size(), workers,
                        [&](std::size_t i) { return moments(x_grid[i], j_max); });
}

std::vector<StarkMapRow> stark_map(std::span<const double> x_grid, std::span<const int> m_values,
                                   int n_states, int j_max, unsigned workers) {
    validate_grid(x_grid, "stark_map");
    if (m_values.empty()) {
        throw InvalidArgument("stark_map: no m values given");
    }
    if (n_states < 1) {
        throw InvalidArgument("stark_map: n_states must be >= 1");
    }
    for (int m : m_values) {
        const BasisSpec spec{m, j_max};
        spec.validate();
        if (n_states > spec.dimension()) {
            std::ostringstream msg;
            msg << "stark_map: n_states = " << n_states << " exceeds basis dimension "
                << spec.dimension() << " for m = " << m;
            throw InvalidArgument(msg.str());
        }
    }

    auto blocks = parallel_map(x_grid.size(), workers, [&](std::size_t i) {
        std::vector<StarkMapRow> rows;
        rows.reserve(m_values.size() * static_cast<std::size_t>(n_states));
        for (int m : m_values) {
            const PendularSolution sol = solve_pendular(x_grid[i], BasisSpec{m, j_max});
            for (int k = 0; k < n_states; ++k) {
                rows.push_back({x_grid[i], m, sol.adiabatic_j(k), sol.energies[k]});
            }
        }
        return rows;
    });

    std::vector<StarkMapRow> out;
    for (auto& b : blocks) {
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::vector<CoefficientRow> coefficient_map(std::span<const double> x_grid, PseudoSpin state,
                                            int j_max, unsigned workers) {
    validate_grid(x_grid, "coefficient_map");
    auto blocks = parallel_map(x_grid.size(), workers, [&](std::size_t i) {
        const PseudoSpinStates s = pseudo_spin_states(x_grid[i], j_max);
        const BasisSpec& basis = state == PseudoSpin::down ? s.down_basis : s.up_basis;
        const Eigen::VectorXd& v = state == PseudoSpin::down ? s.down : s.up;
        std::vector<CoefficientRow> rows;
        rows.reserve(static_cast<std::size_t>(v.size()));
        for (Eigen::Index k = 0; k < v.size(); ++k) {
            rows.push_back({x_grid[i], basis.j_at(static_cast<int>(k)), v[k]});
        }
        return rows;
    });

    std::vector<CoefficientRow> out;
    for (auto& b : blocks) {
        out.insert(out.end(), b.begin(), b.end());
    }
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) {
        throw InvalidArgument("uniform_grid: step must be positive");
    }
    if (!(hi >= lo)) {
        throw InvalidArgument("uniform_grid: upper bound below lower bound");
    }
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lo + static_cast<double>(i) * step;
    }
    return grid;
}

void validate_grid(std::span<const double> grid, std::string_view what) {
    if (grid.empty()) {
        throw InvalidArgument(std::string(what) + ": empty grid");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
            throw InvalidArgument(std::string(what) + ": grid values must be finite and >= 0");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw InvalidArgument(std::string(what) + ": grid must be strictly ascending");
        }
    }
}

namespace {

double lagrange(std::span<const double> xs, std::span<const double> ys, double x) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double w = ys[i];
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j != i) {
                w *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        sum += w;
    }
    return sum;
}

}  // namespace

std::vector<double> locate_zero_crossings(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) {
        throw InvalidArgument("locate_zero_crossings: size mismatch");
    }
    std::vector<double> roots;
    const std::size_t n = xs.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (ys[i] == 0.0) {
            if (i > 0 && ys[i - 1] * ys[i + 1] < 0.0) {
                roots.push_back(xs[i]);
            }
            continue;
        }
        if (ys[i] * ys[i + 1] >= 0.0) {
            continue;
        }
        const std::size_t first = std::min(i > 0 ? i - 1 : 0, n >= 4 ? n - 4 : 0);
        const std::size_t len = std::min<std::size_t>(4, n);
        const auto sx = xs.subspan(first, len);
        const auto sy = ys.subspan(first, len);

        double lo = xs[i];
        double hi = xs[i + 1];
        const double f_lo = ys[i];
        for (int it = 0; it < 100 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = lagrange(sx, sy, mid);
            if ((f_mid < 0.0) == (f_lo < 0.0)) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    return roots;
}

std::vector<double> c1_zero_crossings(double x_max, double step, int j_max) {
    // x = 0 is excluded: C1 vanishes there identically.
    const std::vector<double> grid = uniform_grid(step, x_max, step);
    const std::vector<MomentSet> ms = moment_scan(grid, j_max);
    std::vector<double> c1(ms.size());
    std::transform(ms.begin(), ms.end(), c1.begin(), [](const MomentSet& m) { return m.c1; });
    return locate_zero_crossings(grid, c1);
}

}  // namespace pendular
