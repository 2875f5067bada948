#include "pendular/rotor_basis.hpp"

#include "pendular/error.hpp"
#include "pendular/tridiagonal.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace pendular {

void BasisSpec::validate() const {
    if (j_max < j_min()) {
        std::ostringstream msg;
        msg << "basis: j_max = " << j_max << " is below |m| = " << j_min();
        throw InvalidArgument(msg.str());
    }
}

Eigen::MatrixXd StarkMatrix::dense() const {
    const auto n = static_cast<Eigen::Index>(diagonal.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        h(i, i) = diagonal[i];
    }
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        h(i, i + 1) = off_diagonal[i];
        h(i + 1, i) = off_diagonal[i];
    }
    return h;
}

std::string_view to_string(AngularOperator op) noexcept {
    switch (op) {
        case AngularOperator::cos_theta: return "cos_theta";
        case AngularOperator::sin_theta_cos_phi: return "sin_theta_cos_phi";
        case AngularOperator::sin_theta_sin_phi: return "sin_theta_sin_phi";
    }
    return "unknown";
}

double cos_theta_step(int j, int m) noexcept {
    const double jj = j;
    const double num = (jj + 1.0) * (jj + 1.0) - static_cast<double>(m) * m;
    if (num <= 0.0) {
        return 0.0;
    }
    return std::sqrt(num / ((2.0 * jj + 1.0) * (2.0 * jj + 3.0)));
}

double sin_theta_raise(int j_bra, int j_ket, int m) noexcept {
    const double j = j_ket;
    const double mm = m;
    if (j_bra == j_ket + 1) {
        const double num = (j + mm + 1.0) * (j + mm + 2.0);
        return num <= 0.0 ? 0.0 : -std::sqrt(num / ((2.0 * j + 1.0) * (2.0 * j + 3.0)));
    }
    if (j_bra == j_ket - 1 && j_ket >= 1) {
        const double num = (j - mm) * (j - mm - 1.0);
        return num <= 0.0 ? 0.0 : std::sqrt(num / ((2.0 * j - 1.0) * (2.0 * j + 1.0)));
    }
    return 0.0;
}

StarkMatrix build_stark_hamiltonian(double x, const BasisSpec& spec) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        std::ostringstream msg;
        msg << "stark hamiltonian: reduced field must be finite and >= 0, got " << x;
        throw InvalidArgument(msg.str());
    }
    spec.validate();

    const int n = spec.dimension();
    StarkMatrix h;
    h.diagonal.resize(static_cast<std::size_t>(n));
    h.off_diagonal.resize(static_cast<std::size_t>(n - 1));
    for (int i = 0; i < n; ++i) {
        const double j = spec.j_at(i);
        h.diagonal[i] = j * (j + 1.0);
    }
    for (int i = 0; i + 1 < n; ++i) {
        h.off_diagonal[i] = -x * cos_theta_step(spec.j_at(i), spec.m);
    }
    return h;
}

PendularSolution solve_pendular(double x, const BasisSpec& spec) {
    const StarkMatrix h = build_stark_hamiltonian(x, spec);

    TridiagonalEigen eig;
    try {
        eig = solve_tridiagonal(h.diagonal, h.off_diagonal, true);
    } catch (const ConvergenceError& err) {
        std::ostringstream msg;
        msg << "solve_pendular(x=" << x << ", m=" << spec.m << ", j_max=" << spec.j_max
            << "): " << err.what();
        throw ConvergenceError(msg.str());
    }

    PendularSolution sol{x, spec, std::move(eig.values), std::move(eig.vectors)};
    for (Eigen::Index k = 0; k < sol.coefficients.cols(); ++k) {
        auto col = sol.coefficients.col(k);
        double pivot = col[k];
        if (std::abs(pivot) < 1e-8) {
            Eigen::Index at = 0;
            col.cwiseAbs().maxCoeff(&at);
            pivot = col[at];
        }
        if (pivot < 0.0) {
            col = -col;
        }
    }
    return sol;
}

namespace {

void require_m_difference(AngularOperator op, const BasisSpec& bra, const BasisSpec& ket,
                          int allowed) {
    if (std::abs(bra.m - ket.m) != allowed) {
        std::ostringstream msg;
        msg << "operator_matrix(" << to_string(op) << "): incompatible m pair (bra m=" << bra.m
            << ", ket m=" << ket.m << ")";
        throw InvalidArgument(msg.str());
    }
}

// <J',m'| sin(theta) e^{-i phi} |J,m> with m' = m - 1, as the adjoint of the raising element.
double sin_theta_lower(int j_bra, int j_ket, int m) noexcept {
    return sin_theta_raise(j_ket, j_bra, m - 1);
}

}  // namespace

Eigen::MatrixXd operator_matrix(AngularOperator op, const BasisSpec& bra, const BasisSpec& ket) {
    bra.validate();
    ket.validate();

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(bra.dimension(), ket.dimension());
    if (op == AngularOperator::cos_theta) {
        require_m_difference(op, bra, ket, 0);
        for (int r = 0; r < bra.dimension(); ++r) {
            const int jb = bra.j_at(r);
            for (int c = 0; c < ket.dimension(); ++c) {
                const int jk = ket.j_at(c);
                if (jb == jk + 1) {
                    out(r, c) = cos_theta_step(jk, ket.m);
                } else if (jb + 1 == jk) {
                    out(r, c) = cos_theta_step(jb, ket.m);
                }
            }
        }
        return out;
    }

    require_m_difference(op, bra, ket, 1);
    const bool raising = bra.m == ket.m + 1;
    for (int r = 0; r < bra.dimension(); ++r) {
        const int jb = bra.j_at(r);
        for (int c = 0; c < ket.dimension(); ++c) {
            const int jk = ket.j_at(c);
            if (std::abs(jb - jk) != 1) {
                continue;
            }
            const double ladder =
                raising ? sin_theta_raise(jb, jk, ket.m) : sin_theta_lower(jb, jk, ket.m);
            if (op == AngularOperator::sin_theta_cos_phi) {
                out(r, c) = 0.5 * ladder;
            } else {
                // sin(theta) sin(phi) = (S+ - S-) / 2i; divided by i this is -(S+ - S-)/2.
                out(r, c) = raising ? -0.5 * ladder : 0.5 * ladder;
            }
        }
    }
    return out;
}

double matrix_element(AngularOperator op, const BasisSpec& bra, const Eigen::VectorXd& bra_state,
                      const BasisSpec& ket, const Eigen::VectorXd& ket_state) {
    return bra_state.dot(operator_matrix(op, bra, ket) * ket_state);
}

}  // namespace pendular
