#include "pendular/dipole_pair.hpp"

#include "pendular/error.hpp"
#include "pendular/parallel.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

namespace pendular {

double CouplingGeometry::p_alpha() const noexcept {
    const double c = std::cos(alpha);
    return 1.0 - 3.0 * c * c;
}

double CouplingGeometry::q_alpha() const noexcept {
    const double s = std::sin(alpha);
    return -3.0 * s * s;
}

void CouplingGeometry::validate() const {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        std::ostringstream msg;
        msg << "coupling geometry: omega must be finite and >= 0, got " << omega;
        throw InvalidArgument(msg.str());
    }
    if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 2 + 1e-12)) {
        std::ostringstream msg;
        msg << "coupling geometry: alpha must lie in [0, pi/2], got " << alpha;
        throw InvalidArgument(msg.str());
    }
}

Eigen::Matrix4d pair_vdd(const MomentSet& m, const CouplingGeometry& g) {
    g.validate();
    const double p = g.p_alpha();
    const double q = g.q_alpha();
    const double cx2 = m.cx * m.cx;

    Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
    v(0, 0) = p * m.c0 * m.c0;
    v(1, 1) = p * m.c0 * m.c1;
    v(2, 2) = p * m.c1 * m.c0;
    v(3, 3) = p * m.c1 * m.c1;
    v(0, 3) = v(3, 0) = q * cx2;
    v(1, 2) = v(2, 1) = -p * cx2;
    return g.omega * v;
}

Eigen::Matrix4d pair_hamiltonian(const MomentSet& m, const CouplingGeometry& g) {
    Eigen::Matrix4d h = pair_vdd(m, g);
    h(0, 0) += 2.0 * m.e0;
    h(1, 1) += m.e0 + m.e1;
    h(2, 2) += m.e1 + m.e0;
    h(3, 3) += 2.0 * m.e1;
    return h;
}

namespace {

using Matrix2cd = Eigen::Matrix2cd;

// Single-molecule operator in the (down, up) pseudo-spin basis.
Matrix2cd pseudo_spin_operator(AngularOperator op, const PseudoSpinStates& s) {
    const BasisSpec* bases[2] = {&s.down_basis, &s.up_basis};
    const Eigen::VectorXd* states[2] = {&s.down, &s.up};
    const int needed_dm = op == AngularOperator::cos_theta ? 0 : 1;
    const std::complex<double> scale =
        op == AngularOperator::sin_theta_sin_phi ? std::complex<double>(0.0, 1.0) : 1.0;

    Matrix2cd out = Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            if (std::abs(bases[a]->m - bases[b]->m) != needed_dm) {
                continue;  // selection rule in m
            }
            out(a, b) = scale * matrix_element(op, *bases[a], *states[a], *bases[b], *states[b]);
        }
    }
    return out;
}

}  // namespace

Eigen::Matrix4cd vdd_first_principles_complex(const PseudoSpinStates& s,
                                              const CouplingGeometry& g) {
    g.validate();
    const Matrix2cd cz = pseudo_spin_operator(AngularOperator::cos_theta, s);
    const Matrix2cd sx = pseudo_spin_operator(AngularOperator::sin_theta_cos_phi, s);
    const Matrix2cd sy = pseudo_spin_operator(AngularOperator::sin_theta_sin_phi, s);

    const double ca = std::cos(g.alpha);
    const double sa = std::sin(g.alpha);
    // Projections of each unit dipole on the intermolecular axis n = (sin a, 0, cos a).
    const Matrix2cd n1 = sa * sx + ca * cz;
    const Matrix2cd n2 = ca * cz + sa * sx;

    using Eigen::kroneckerProduct;
    Eigen::Matrix4cd v = kroneckerProduct(cz, cz).eval();
    v += kroneckerProduct(sx, sx).eval();
    v += kroneckerProduct(sy, sy).eval();
    v -= 3.0 * kroneckerProduct(n1, n2).eval();
    return g.omega * v;
}

Eigen::Matrix4d vdd_from_first_principles(double x, const CouplingGeometry& g, int j_max) {
    return vdd_first_principles_complex(pseudo_spin_states(x, j_max), g).real();
}

HeisenbergConstants heisenberg_constants(const MomentSet& m, const CouplingGeometry& g) {
    g.validate();
    const double cos2 = std::cos(g.alpha) * std::cos(g.alpha);
    const double cx2 = m.cx * m.cx;
    const double dc = m.c0 - m.c1;
    const double sc = m.c0 + m.c1;

    HeisenbergConstants k;
    k.jx = g.omega * (3.0 * cos2 - 2.0) * cx2;
    k.jy = g.omega * cx2;
    k.jz = g.omega * (1.0 - 3.0 * cos2) * dc * dc / 4.0;
    k.gamma = (2.0 * m.delta_e() + g.omega * (3.0 * cos2 - 1.0) * (m.c0 * m.c0 - m.c1 * m.c1)) / 4.0;
    k.shift = m.e0 + m.e1 + g.omega * g.p_alpha() * sc * sc / 4.0;
    return k;
}

Eigen::Matrix4d xyz_hamiltonian(const HeisenbergConstants& c) {
    using std::complex;
    const complex<double> i(0.0, 1.0);
    // (down, up) ordering, sigma_z |down> = +|down>.
    Matrix2cd sx;
    sx << 0.0, 1.0, 1.0, 0.0;
    Matrix2cd sy;
    sy << 0.0, -i, i, 0.0;
    Matrix2cd sz;
    sz << 1.0, 0.0, 0.0, -1.0;
    const Matrix2cd id = Matrix2cd::Identity();

    using Eigen::kroneckerProduct;
    Eigen::Matrix4cd h = c.jx * kroneckerProduct(sx, sx).eval();
    h += c.jy * kroneckerProduct(sy, sy).eval();
    h += c.jz * kroneckerProduct(sz, sz).eval();
    h -= c.gamma * (kroneckerProduct(sz, id).eval() + kroneckerProduct(id, sz).eval());
    h += c.shift * Eigen::Matrix4cd::Identity();
    return h.real();
}

std::vector<CouplingMapRow> coupling_map(std::span<const double> x_grid,
                                         std::span<const double> alpha_grid, int j_max,
                                         unsigned workers) {
    validate_grid(x_grid, "coupling_map x");
    validate_grid(alpha_grid, "coupling_map alpha");
    const std::vector<MomentSet> ms = moment_scan(x_grid, j_max, workers);

    std::vector<CouplingMapRow> rows;
    rows.reserve(x_grid.size() * alpha_grid.size());
    for (const MomentSet& m : ms) {
        for (double alpha : alpha_grid) {
            const CouplingGeometry g{1.0, alpha};
            const HeisenbergConstants k = heisenberg_constants(m, g);
            const double gamma2 = -g.p_alpha() * (m.c0 * m.c0 - m.c1 * m.c1) / 4.0;
            rows.push_back({m.x, alpha, k.jx, k.jy, k.jz, gamma2});
        }
    }
    return rows;
}

}  // namespace pendular
