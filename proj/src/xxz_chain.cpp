#include "pendular/xxz_chain.hpp"

#include "pendular/error.hpp"
#include "pendular/parallel.hpp"
#include "pendular/tridiagonal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace pendular {

std::string_view to_string(Boundary b) noexcept {
    return b == Boundary::open ? "open" : "periodic";
}

std::optional<Boundary> parse_boundary(std::string_view name) noexcept {
    if (name == "open") {
        return Boundary::open;
    }
    if (name == "periodic") {
        return Boundary::periodic;
    }
    return std::nullopt;
}

void ChainSpec::validate() const {
    if (n < kMinSites || n > kMaxSites) {
        std::ostringstream msg;
        msg << "chain: site count " << n << " outside [" << kMinSites << ", " << kMaxSites << "]";
        throw InvalidArgument(msg.str());
    }
    if (!std::isfinite(j) || !std::isfinite(jz) || !std::isfinite(gamma)) {
        throw InvalidArgument("chain: couplings must be finite");
    }
}

ChainConstants chain_constants(const MomentSet& m, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) {
        throw InvalidArgument("chain_constants: omega must be finite and >= 0");
    }
    const double dc = m.c0 - m.c1;
    return {omega * m.cx * m.cx, -omega * dc * dc / 2.0,
            (m.delta_e() + omega * (m.c0 * m.c0 - m.c1 * m.c1)) / 2.0};
}

ChainSpec make_chain(const ChainConstants& c, int n, Boundary boundary) {
    ChainSpec spec;
    spec.n = n;
    spec.boundary = boundary;
    spec.j = c.j;
    spec.jz = c.jz;
    spec.gamma = c.gamma;
    spec.validate();
    return spec;
}

// --- sector basis -----------------------------------------------------------

SectorBasis::SectorBasis(int n, int up_count) : n_(n), up_(up_count) {
    if (n < 1 || n > ChainSpec::kMaxSites || up_count < 0 || up_count > n) {
        throw InvalidArgument("sector basis: invalid (n, up_count)");
    }
    if (up_count == 0) {
        states_.push_back(0);
        return;
    }
    // Gosper's hack enumerates fixed-popcount words in ascending order.
    const BasisState limit = BasisState{1} << n;
    BasisState s = (BasisState{1} << up_count) - 1;
    while (s < limit) {
        states_.push_back(s);
        const BasisState c = s & (~s + 1);
        const BasisState r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
}

std::size_t SectorBasis::index_of(BasisState s) const {
    const auto it = std::lower_bound(states_.begin(), states_.end(), s);
    if (it == states_.end() || *it != s) {
        throw InvalidArgument("sector basis: state not in sector");
    }
    return static_cast<std::size_t>(it - states_.begin());
}

// --- Hamiltonian ------------------------------------------------------------

XxzHamiltonian::XxzHamiltonian(const ChainSpec& spec) : spec_(spec) {
    spec_.validate();
    const int n = spec_.n;
    const bool periodic = spec_.boundary == Boundary::periodic;
    if (!spec_.long_range) {
        for (int a = 0; a + 1 < n; ++a) {
            bonds_.push_back({a, a + 1, 1.0});
        }
        if (periodic) {
            bonds_.push_back({n - 1, 0, 1.0});
        }
        return;
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            int d = b - a;
            if (periodic) {
                d = std::min(d, n - d);
            }
            bonds_.push_back({a, b, 1.0 / (static_cast<double>(d) * d * d)});
        }
    }
}

double XxzHamiltonian::diagonal(BasisState s) const noexcept {
    double e = 0.0;
    for (const Bond& bond : bonds_) {
        const bool same = ((s >> bond.a) & 1U) == ((s >> bond.b) & 1U);
        e += (same ? spec_.jz : -spec_.jz) * bond.weight;
    }
    const int up = std::popcount(s);
    e -= spec_.gamma * static_cast<double>(2 * up - spec_.n);
    return e;
}

Eigen::VectorXd XxzHamiltonian::apply(const Eigen::VectorXd& x) const {
    const auto dim = static_cast<Eigen::Index>(dimension());
    if (x.size() != dim) {
        throw InvalidArgument("xxz apply: vector size mismatch");
    }
    Eigen::VectorXd y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto s = static_cast<BasisState>(i);
        double acc = diagonal(s) * x[i];
        for_each_flip(s, [&](BasisState t, double amp) { acc += amp * x[t]; });
        y[i] = acc;
    }
    return y;
}

Eigen::VectorXd XxzHamiltonian::apply(const SectorBasis& basis, const Eigen::VectorXd& x) const {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    if (x.size() != dim) {
        throw InvalidArgument("xxz apply: sector vector size mismatch");
    }
    Eigen::VectorXd y(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const BasisState s = basis.state(static_cast<std::size_t>(i));
        double acc = diagonal(s) * x[i];
        for_each_flip(s, [&](BasisState t, double amp) {
            acc += amp * x[static_cast<Eigen::Index>(basis.index_of(t))];
        });
        y[i] = acc;
    }
    return y;
}

Eigen::SparseMatrix<double> XxzHamiltonian::sparse() const {
    const auto dim = static_cast<Eigen::Index>(dimension());
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(static_cast<std::size_t>(dim) * (bonds_.size() + 1));
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto s = static_cast<BasisState>(i);
        entries.emplace_back(i, i, diagonal(s));
        for_each_flip(s, [&](BasisState t, double amp) {
            entries.emplace_back(static_cast<Eigen::Index>(t), i, amp);
        });
    }
    Eigen::SparseMatrix<double> h(dim, dim);
    h.setFromTriplets(entries.begin(), entries.end());
    return h;
}

Eigen::MatrixXd XxzHamiltonian::dense() const {
    if (spec_.n > 12) {
        throw InvalidArgument("xxz dense: n > 12 is too large for a dense matrix");
    }
    return Eigen::MatrixXd(sparse());
}

Eigen::MatrixXd XxzHamiltonian::dense(const SectorBasis& basis) const {
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const BasisState s = basis.state(static_cast<std::size_t>(i));
        h(i, i) = diagonal(s);
        for_each_flip(s, [&](BasisState t, double amp) {
            h(static_cast<Eigen::Index>(basis.index_of(t)), i) += amp;
        });
    }
    return h;
}

// --- Lanczos ----------------------------------------------------------------

namespace {

void orthogonalize(Eigen::VectorXd& v, std::span<const Eigen::VectorXd> against) {
    // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
        for (const Eigen::VectorXd& u : against) {
            v -= u.dot(v) * u;
        }
    }
}

}  // namespace

LanczosResult lanczos_lowest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                             Eigen::Index dimension, std::span<const Eigen::VectorXd> deflate,
                             const LanczosOptions& options) {
    if (dimension < 1) {
        throw InvalidArgument("lanczos: empty space");
    }
    const auto free_dim = dimension - static_cast<Eigen::Index>(deflate.size());
    if (free_dim < 1) {
        throw InvalidArgument("lanczos: deflation removes the whole space");
    }

    std::mt19937 rng(options.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd start(dimension);
    for (Eigen::Index i = 0; i < dimension; ++i) {
        start[i] = uniform(rng);
    }

    LanczosResult best;
    best.value = std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    const int krylov_cap = static_cast<int>(std::min<Eigen::Index>(options.max_krylov, free_dim));

    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        orthogonalize(start, deflate);
        const double norm = start.norm();
        if (norm == 0.0) {
            throw ConvergenceError("lanczos: start vector vanished after deflation");
        }

        std::vector<Eigen::VectorXd> basis;
        basis.reserve(static_cast<std::size_t>(krylov_cap));
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.push_back(start / norm);

        double value = 0.0;
        Eigen::VectorXd coeffs;
        bool converged = false;
        for (int k = 0; k < krylov_cap; ++k) {
            Eigen::VectorXd w = apply(basis.back());
            ++total_iterations;
            const double a = basis.back().dot(w);
            alpha.push_back(a);
            orthogonalize(w, deflate);
            orthogonalize(w, basis);
            const double b = w.norm();

            const bool exhausted = k + 1 == krylov_cap;
            const bool breakdown = b <= 1e-14 * std::max(1.0, std::abs(a));
            const bool check = exhausted || breakdown || (k + 1) % 5 == 0 || k < 4;
            if (check) {
                const TridiagonalEigen t = solve_tridiagonal(alpha, beta, true);
                value = t.values[0];
                coeffs = t.vectors.col(0);
                const double residual = b * std::abs(coeffs[coeffs.size() - 1]);
                if (breakdown || residual <= options.tolerance * std::max(1.0, std::abs(value))) {
                    converged = true;
                    break;
                }
            }
            if (exhausted) {
                break;
            }
            beta.push_back(b);
            basis.push_back(w / b);
        }

        Eigen::VectorXd ritz = Eigen::VectorXd::Zero(dimension);
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
            ritz += coeffs[i] * basis[static_cast<std::size_t>(i)];
        }
        ritz.normalize();
        best.value = value;
        best.vector = ritz;
        best.iterations = total_iterations;
        if (converged || free_dim <= krylov_cap) {
            return best;
        }
        start = ritz;
    }

    std::ostringstream msg;
    msg << "lanczos: no convergence after " << total_iterations << " iterations (dimension "
        << dimension << ", last estimate " << best.value << ")";
    throw ConvergenceError(msg.str());
}

// --- ground state -----------------------------------------------------------

namespace {

struct SectorSolution {
    double e0 = 0.0;
    double e1 = std::numeric_limits<double>::infinity();
    Eigen::VectorXd vector;
};

SectorSolution solve_sector(const XxzHamiltonian& h, const SectorBasis& basis,
                            const GroundStateOptions& options) {
    const std::size_t dim = basis.size();
    const bool dense = options.method == EigenMethod::dense ||
                       (options.method == EigenMethod::automatic && dim <= options.dense_limit);
    SectorSolution out;
    if (dim == 1) {
        out.e0 = h.diagonal(basis.state(0));
        out.vector = Eigen::VectorXd::Ones(1);
        return out;
    }
    if (dense) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense(basis));
        if (es.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "ground_state: dense eigensolver failed in sector with " << basis.up_count()
                << " up spins of " << basis.sites();
            throw ConvergenceError(msg.str());
        }
        out.e0 = es.eigenvalues()[0];
        out.e1 = es.eigenvalues()[1];
        out.vector = es.eigenvectors().col(0);
        return out;
    }

    const auto apply = [&](const Eigen::VectorXd& v) { return h.apply(basis, v); };
    try {
        const LanczosResult first =
            lanczos_lowest(apply, static_cast<Eigen::Index>(dim), {}, options.lanczos);
        out.e0 = first.value;
        out.vector = first.vector;
        if (options.compute_gap) {
            const Eigen::VectorXd deflate[] = {first.vector};
            out.e1 = lanczos_lowest(apply, static_cast<Eigen::Index>(dim), deflate,
                                    options.lanczos)
                         .value;
        }
    } catch (const ConvergenceError& err) {
        std::ostringstream msg;
        msg << "ground_state: sector with " << basis.up_count() << " up spins of "
            << basis.sites() << " (dimension " << dim << "): " << err.what();
        throw ConvergenceError(msg.str());
    }
    return out;
}

}  // namespace

ChainResult ground_state(const ChainSpec& spec, const GroundStateOptions& options) {
    const XxzHamiltonian h(spec);
    const int n = spec.n;

    std::vector<SectorSolution> sectors;
    std::vector<SectorBasis> bases;
    sectors.reserve(static_cast<std::size_t>(n + 1));
    bases.reserve(static_cast<std::size_t>(n + 1));
    for (int up = 0; up <= n; ++up) {
        bases.emplace_back(n, up);
        sectors.push_back(solve_sector(h, bases.back(), options));
    }

    const double scale =
        static_cast<double>(n) * (std::abs(spec.j) + std::abs(spec.jz) + std::abs(spec.gamma));
    const double tie = 1e-12 * std::max(scale, std::numeric_limits<double>::min());
    int best = 0;
    for (int up = 1; up <= n; ++up) {
        if (sectors[up].e0 <= sectors[best].e0 + tie) {
            best = up;
        }
    }

    ChainResult r;
    r.ground_up_count = best;
    r.ground_energy = sectors[best].e0;
    r.magnetization_per_site = static_cast<double>(2 * best - n) / n;
    for (const auto& s : sectors) {
        r.sector_ground_energies.push_back(s.e0);
    }

    r.spin_gap = std::numeric_limits<double>::infinity();
    for (int up = 0; up <= n; ++up) {
        if (up != best) {
            r.spin_gap = std::min(r.spin_gap, sectors[up].e0 - r.ground_energy);
        }
    }
    r.spin_gap = std::max(r.spin_gap, 0.0);

    if (options.compute_gap) {
        std::vector<double> levels;
        for (const auto& s : sectors) {
            levels.push_back(s.e0);
            if (std::isfinite(s.e1)) {
                levels.push_back(s.e1);
            }
        }
        std::partial_sort(levels.begin(), levels.begin() + 2, levels.end());
        r.gap = std::max(levels[1] - levels[0], 0.0);
    } else {
        r.gap = std::numeric_limits<double>::quiet_NaN();
    }

    const SectorBasis& basis = bases[best];
    const Eigen::VectorXd& psi = sectors[best].vector;
    int nn_bonds = 0;
    double nn = 0.0;
    double stag = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const double p = psi[static_cast<Eigen::Index>(i)] * psi[static_cast<Eigen::Index>(i)];
        const BasisState s = basis.state(i);
        auto z = [&](int site) { return ((s >> site) & 1U) ? 1.0 : -1.0; };
        double bond_sum = 0.0;
        int bonds = 0;
        for (int a = 0; a + 1 < n; ++a, ++bonds) {
            bond_sum += z(a) * z(a + 1);
        }
        if (spec.boundary == Boundary::periodic && n > 2) {
            bond_sum += z(n - 1) * z(0);
            ++bonds;
        }
        nn_bonds = bonds;
        nn += p * bond_sum;
        double staggered = 0.0;
        for (int a = 0; a < n; ++a) {
            staggered += (a % 2 == 0 ? 1.0 : -1.0) * z(a);
        }
        stag += p * staggered * staggered;
    }
    r.nn_zz_correlation = nn / nn_bonds;
    r.staggered_zz_correlation = stag / (static_cast<double>(n) * n);
    r.ground_overlap_polarized = best == n ? psi[0] * psi[0] : 0.0;
    return r;
}

// --- classification -----------------------------------------------------------

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::ferromagnetic: return "ferromagnetic";
        case Phase::luttinger_liquid: return "luttinger_liquid";
        case Phase::antiferromagnetic: return "antiferromagnetic";
    }
    return "unknown";
}

double extrapolated_spin_gap(const ChainSpec& spec, const GroundStateOptions& options) {
    GroundStateOptions opts = options;
    opts.compute_gap = false;
    std::vector<double> inv_n;
    std::vector<double> gaps;
    for (int size = spec.n; size >= std::max(4, spec.n - 4); size -= 2) {
        ChainSpec s = spec;
        s.n = size;
        inv_n.push_back(1.0 / size);
        gaps.push_back(ground_state(s, opts).spin_gap);
    }
    if (gaps.size() == 1) {
        return gaps.front();
    }
    // Least-squares line gap = c0 + c1 / n.
    const auto m = static_cast<double>(gaps.size());
    double sx = 0.0;
    double sy = 0.0;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        sx += inv_n[i];
        sy += gaps[i];
        sxx += inv_n[i] * inv_n[i];
        sxy += inv_n[i] * gaps[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return (sy - slope * sx) / m;
}

Phase classify_phase(const ChainResult& result, const ChainSpec& spec,
                     const PhaseThresholds& thresholds, const GroundStateOptions& options) {
    if (std::abs(result.magnetization_per_site) >= thresholds.ferro_magnetization) {
        return Phase::ferromagnetic;
    }
    if (result.staggered_zz_correlation >= thresholds.staggered_min &&
        result.nn_zz_correlation < 0.0) {
        const double gap = extrapolated_spin_gap(spec, options);
        if (gap > thresholds.gap_min_over_j * std::abs(spec.j)) {
            return Phase::antiferromagnetic;
        }
    }
    return Phase::luttinger_liquid;
}

double polarization_onset(const ChainSpec& spec, double rel_tol,
                          const GroundStateOptions& options) {
    GroundStateOptions opts = options;
    opts.compute_gap = false;
    auto polarized = [&](double gamma) {
        ChainSpec s = spec;
        s.gamma = gamma;
        return ground_state(s, opts).ground_up_count == s.n;
    };
    if (polarized(0.0)) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 4.0 * (std::abs(spec.j) + std::abs(spec.jz));
    if (hi == 0.0) {
        return 0.0;
    }
    for (int it = 0; !polarized(hi); ++it) {
        if (it > 60) {
            throw ConvergenceError("polarization_onset: no saturation found");
        }
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > rel_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        (polarized(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<PhaseDiagramRow> phase_diagram(std::span<const double> x_grid,
                                           std::span<const double> omega_grid,
                                           const PhaseDiagramOptions& options) {
    validate_grid(x_grid, "phase_diagram x");
    validate_grid(omega_grid, "phase_diagram omega");
    if (x_grid.front() <= 0.0 || omega_grid.front() <= 0.0) {
        throw InvalidArgument("phase_diagram: x and omega must be > 0 (j vanishes otherwise)");
    }
    if (options.n < ChainSpec::kMinSites || options.n > 12) {
        throw InvalidArgument("phase_diagram: n must lie in [2, 12] for full scans");
    }

    const std::vector<MomentSet> ms = moment_scan(x_grid, options.j_max, options.workers);
    const std::size_t n_omega = omega_grid.size();
    return parallel_map(ms.size() * n_omega, options.workers, [&](std::size_t idx) {
        const MomentSet& m = ms[idx / n_omega];
        const double omega = omega_grid[idx % n_omega];
        const ChainConstants c = chain_constants(m, omega);
        const ChainSpec spec = make_chain(c, options.n, options.boundary);
        const ChainResult r = ground_state(spec);
        return PhaseDiagramRow{m.x,
                               omega,
                               c.jz / c.j,
                               c.gamma / c.j,
                               classify_phase(r, spec, options.thresholds),
                               r.magnetization_per_site,
                               r.ground_overlap_polarized};
    });
}

}  // namespace pendular
