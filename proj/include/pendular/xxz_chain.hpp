#pragma once

#include "pendular/pendular_moments.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pendular {

enum class Boundary { open, periodic };

[[nodiscard]] std::string_view to_string(Boundary b) noexcept;
[[nodiscard]] std::optional<Boundary> parse_boundary(std::string_view name) noexcept;

/// H = sum_<a,b> w_ab [ j (X_a X_b + Y_a Y_b) + jz Z_a Z_b ] - gamma sum_a Z_a  (units of B).
///
/// Nearest-neighbour bonds have w = 1. With `long_range` every pair is
/// coupled with w = 1/d^3 (d the chain distance, minimum image when periodic).
/// Bit a of a basis state set means Z_a = +1.
struct ChainSpec {
    int n = 10;
    Boundary boundary = Boundary::open;
    double j = 0.0;
    double jz = 0.0;
    double gamma = 0.0;
    bool long_range = false;

    static constexpr int kMinSites = 2;
    static constexpr int kMaxSites = 16;

    void validate() const;
};

struct ChainConstants {
    double j = 0.0;
    double jz = 0.0;
    double gamma = 0.0;
};

/// Nearest-neighbour couplings of a chain along the field (alpha = 0).
[[nodiscard]] ChainConstants chain_constants(const MomentSet& m, double omega);

[[nodiscard]] ChainSpec make_chain(const ChainConstants& c, int n,
                                   Boundary boundary = Boundary::open);

using BasisState = std::uint32_t;

struct Bond {
    int a;
    int b;
    double weight;
};

/// States with a fixed number of set bits (fixed total Z), ascending.
class SectorBasis {
public:
    SectorBasis(int n, int up_count);

    [[nodiscard]] int sites() const noexcept { return n_; }
    [[nodiscard]] int up_count() const noexcept { return up_; }
    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] BasisState state(std::size_t i) const noexcept { return states_[i]; }
    [[nodiscard]] std::size_t index_of(BasisState s) const;
    [[nodiscard]] std::span<const BasisState> states() const noexcept { return states_; }

private:
    int n_;
    int up_;
    std::vector<BasisState> states_;
};

/// Matrix-free XXZ operator on the 2^n bitstring basis.
class XxzHamiltonian {
public:
    explicit XxzHamiltonian(const ChainSpec& spec);

    [[nodiscard]] const ChainSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::span<const Bond> bonds() const noexcept { return bonds_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return std::size_t{1} << spec_.n; }

    [[nodiscard]] double diagonal(BasisState s) const noexcept;

    /// Calls visit(target, amplitude) for every off-diagonal element <target|H|s>.
    template <typename Visitor>
    void for_each_flip(BasisState s, Visitor&& visit) const {
        for (const Bond& bond : bonds_) {
            const BasisState mask = (BasisState{1} << bond.a) | (BasisState{1} << bond.b);
            const BasisState pair = s & mask;
            if (pair != 0 && pair != mask) {
                visit(s ^ mask, 2.0 * spec_.j * bond.weight);
            }
        }
    }

    /// y = H x over the full 2^n space.
    [[nodiscard]] Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    /// y = H x restricted to one magnetization sector.
    [[nodiscard]] Eigen::VectorXd apply(const SectorBasis& basis, const Eigen::VectorXd& x) const;

    [[nodiscard]] Eigen::SparseMatrix<double> sparse() const;
    /// Dense 2^n matrix; n <= 12.
    [[nodiscard]] Eigen::MatrixXd dense() const;
    [[nodiscard]] Eigen::MatrixXd dense(const SectorBasis& basis) const;

private:
    ChainSpec spec_;
    std::vector<Bond> bonds_;
};

/// Result of the symmetric Lanczos iteration for the lowest eigenpair.
struct LanczosResult {
    double value = 0.0;
    Eigen::VectorXd vector;
    int iterations = 0;
};

struct LanczosOptions {
    double tolerance = 1e-11;  ///< residual norm relative to max(1, |value|)
    int max_krylov = 200;
    int max_restarts = 30;
    std::uint32_t seed = 12345;
};

/// Lowest eigenpair of a symmetric operator, restricted to the orthogonal
/// complement of `deflate` (orthonormal vectors). Full reorthogonalization.
[[nodiscard]] LanczosResult lanczos_lowest(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply, Eigen::Index dimension,
    std::span<const Eigen::VectorXd> deflate = {}, const LanczosOptions& options = {});

enum class EigenMethod { automatic, dense, lanczos };

struct GroundStateOptions {
    EigenMethod method = EigenMethod::automatic;
    std::size_t dense_limit = 256;  ///< automatic: dense when a sector is at most this large
    bool compute_gap = true;        ///< second level per sector (full-spectrum gap)
    LanczosOptions lanczos;
};

struct ChainResult {
    double ground_energy = 0.0;
    double magnetization_per_site = 0.0;    ///< <Z> per site, [-1, 1]
    double nn_zz_correlation = 0.0;         ///< mean <Z_a Z_a+1> over nearest-neighbour bonds
    double staggered_zz_correlation = 0.0;  ///< (1/n^2) sum_ab (-1)^(a+b) <Z_a Z_b>
    double gap = 0.0;                       ///< E1 - E0 of the full spectrum (NaN if not computed)
    double spin_gap = 0.0;                  ///< lowest level of any other sector minus E0
    double ground_overlap_polarized = 0.0;  ///< |<all Z=+1|psi0>|^2
    int ground_up_count = 0;
    std::vector<double> sector_ground_energies;  ///< indexed by number of Z=+1 sites
};

/// Ground state over all magnetization sectors. Equal sector energies (to
/// 1e-12 of the energy scale) resolve toward the larger magnetization.
/// Throws ConvergenceError naming the sector if Lanczos does not converge.
[[nodiscard]] ChainResult ground_state(const ChainSpec& spec, const GroundStateOptions& options = {});

enum class Phase { ferromagnetic, luttinger_liquid, antiferromagnetic };

[[nodiscard]] std::string_view to_string(Phase p) noexcept;

struct PhaseThresholds {
    double ferro_magnetization = 0.99;  ///< |magnetization per site| at or above this
    double staggered_min = 0.4;         ///< staggered correlation for the Neel candidate
    double gap_min_over_j = 0.05;       ///< extrapolated spin gap / |j| for a gapped Neel phase
};

/// Spin gap at sizes n, n-2, n-4 (>= 4) fitted linearly in 1/n, evaluated at 1/n = 0.
[[nodiscard]] double extrapolated_spin_gap(const ChainSpec& spec,
                                           const GroundStateOptions& options = {});

[[nodiscard]] Phase classify_phase(const ChainResult& result, const ChainSpec& spec,
                                   const PhaseThresholds& thresholds = {},
                                   const GroundStateOptions& options = {});

/// Smallest gamma >= 0 whose ground state lies in the fully polarized sector,
/// located by bisection to `rel_tol`. j, jz, n and boundary come from `spec`.
[[nodiscard]] double polarization_onset(const ChainSpec& spec, double rel_tol = 1e-6,
                                        const GroundStateOptions& options = {});

struct PhaseDiagramRow {
    double x;
    double omega;
    double jz_over_j;
    double gamma_over_j;
    Phase phase;
    double magnetization_per_site;
    double ground_overlap_polarized;
};

struct PhaseDiagramOptions {
    int n = 10;
    Boundary boundary = Boundary::open;
    PhaseThresholds thresholds;
    int j_max = kDefaultJMax;
    unsigned workers = 0;
};

/// Rows ordered by (x, omega). Grid values must be > 0.
[[nodiscard]] std::vector<PhaseDiagramRow> phase_diagram(std::span<const double> x_grid,
                                                         std::span<const double> omega_grid,
                                                         const PhaseDiagramOptions& options = {});

}  // namespace pendular
