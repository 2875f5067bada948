#include "pendular/model_fit.hpp"

#include "pendular/error.hpp"

#include <unsupported/Eigen/LevenbergMarquardt>

#include <cmath>
#include <limits>
#include <sstream>

namespace pendular {

double PolyFit::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
        acc = (acc + *it) * x;
    }
    return acc;
}

namespace {

double falling(double x, double center, double width) noexcept {
    return 1.0 / (1.0 + std::exp((x - center) / width));
}

double rising(double x, double center, double width) noexcept {
    return 1.0 / (1.0 + std::exp(-(x - center) / width));
}

}  // namespace

double SigmoidParams::operator()(double x) const noexcept {
    return a0 + a1 * falling(x, x1, k1) + a2 * rising(x, x2, k2);
}

PolyFit fit_gap(std::span<const Sample> samples) {
    if (samples.size() < 20) {
        throw InvalidArgument("fit_gap: need at least 20 samples, got " +
                              std::to_string(samples.size()));
    }
    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd design(n, 5);
    Eigen::VectorXd rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double p = 1.0;
        for (int k = 0; k < 5; ++k) {
            p *= samples[i].x;
            design(i, k) = p;
        }
        rhs[i] = samples[i].y;
    }

    // Column scaling keeps the monomials comparable before the rank decision.
    const Eigen::VectorXd scale = design.colwise().norm().transpose();
    for (int k = 0; k < 5; ++k) {
        if (scale[k] == 0.0) {
            throw InvalidArgument("fit_gap: rank-deficient design matrix (all abscissae zero)");
        }
    }
    const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(scaled);
    qr.setThreshold(1e-12);
    if (qr.rank() < 5) {
        throw InvalidArgument("fit_gap: rank-deficient design matrix (rank " +
                              std::to_string(qr.rank()) + " < 5)");
    }
    const Eigen::VectorXd coef = qr.solve(rhs).cwiseQuotient(scale);

    PolyFit fit;
    for (int k = 0; k < 5; ++k) {
        fit.a[static_cast<std::size_t>(k)] = coef[k];
    }
    fit.r_squared = r_squared(samples, fit);
    return fit;
}

namespace {

SigmoidParams from_vector(const Eigen::VectorXd& p) {
    return {p[0], p[1], p[2], p[3], p[4], p[5], p[6]};
}

Eigen::VectorXd to_vector(const SigmoidParams& s) {
    Eigen::VectorXd p(7);
    p << s.a0, s.a1, s.a2, s.x1, s.x2, s.k1, s.k2;
    return p;
}

struct SigmoidResidual : Eigen::DenseFunctor<double> {
    std::span<const Sample> samples;

    explicit SigmoidResidual(std::span<const Sample> s)
        : Eigen::DenseFunctor<double>(7, static_cast<int>(s.size())), samples(s) {}

    int operator()(const InputType& p, ValueType& r) const {
        const SigmoidParams model = from_vector(p);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            r[static_cast<Eigen::Index>(i)] = model(samples[i].x) - samples[i].y;
        }
        return 0;
    }

    int df(const InputType& p, JacobianType& jac) const {
        const SigmoidParams m = from_vector(p);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            const double x = samples[i].x;
            const double s1 = falling(x, m.x1, m.k1);
            const double s2 = rising(x, m.x2, m.k2);
            const double d1 = s1 * (1.0 - s1);
            const double d2 = s2 * (1.0 - s2);
            jac(row, 0) = 1.0;
            jac(row, 1) = s1;
            jac(row, 2) = s2;
            jac(row, 3) = m.a1 * d1 / m.k1;
            jac(row, 4) = -m.a2 * d2 / m.k2;
            jac(row, 5) = m.a1 * d1 * (x - m.x1) / (m.k1 * m.k1);
            jac(row, 6) = -m.a2 * d2 * (x - m.x2) / (m.k2 * m.k2);
        }
        return 0;
    }
};

std::string_view status_name(Eigen::LevenbergMarquardtSpace::Status s) {
    using namespace Eigen::LevenbergMarquardtSpace;
    switch (s) {
        case NotStarted: return "not_started";
        case Running: return "running";
        case ImproperInputParameters: return "improper_input";
        case RelativeReductionTooSmall: return "relative_reduction";
        case RelativeErrorTooSmall: return "relative_error";
        case RelativeErrorAndReductionTooSmall: return "relative_error_and_reduction";
        case CosinusTooSmall: return "orthogonal_gradient";
        case TooManyFunctionEvaluation: return "max_evaluations";
        case FtolTooSmall: return "ftol_limit";
        case XtolTooSmall: return "xtol_limit";
        case GtolTooSmall: return "gtol_limit";
        case UserAsked: return "user_stop";
    }
    return "unknown";
}

// a/(1+e^{u/k}) with k < 0 equals a - a/(1+e^{u/|k|}); likewise for the rising term.
void normalize_widths(SigmoidParams& s) {
    if (s.k1 < 0.0) {
        s.a0 += s.a1;
        s.a1 = -s.a1;
        s.k1 = -s.k1;
    }
    if (s.k2 < 0.0) {
        s.a0 += s.a2;
        s.a2 = -s.a2;
        s.k2 = -s.k2;
    }
}

}  // namespace

SigmoidFit fit_moment(std::span<const Sample> samples, const SigmoidParams& initial,
                      const SigmoidFitOptions& options) {
    if (samples.size() < 50) {
        throw InvalidArgument("fit_moment: need at least 50 samples, got " +
                              std::to_string(samples.size()));
    }
    if (initial.k1 == 0.0 || initial.k2 == 0.0) {
        throw InvalidArgument("fit_moment: initial sigmoid widths must be nonzero");
    }

    SigmoidResidual functor(samples);
    Eigen::LevenbergMarquardt<SigmoidResidual> lm(functor);
    lm.setMaxfev(options.max_evaluations);
    lm.setXtol(options.tolerance);
    lm.setFtol(options.tolerance);
    lm.setGtol(0.0);

    Eigen::VectorXd p = to_vector(initial);
    const auto status = lm.minimize(p);

    using namespace Eigen::LevenbergMarquardtSpace;
    SigmoidFit fit;
    fit.params = from_vector(p);
    normalize_widths(fit.params);
    fit.converged = status != TooManyFunctionEvaluation && status != ImproperInputParameters &&
                    status != NotStarted && status != Running && p.allFinite();
    fit.evaluations = static_cast<int>(lm.nfev());
    fit.status = status_name(status);
    if (!p.allFinite()) {
        fit.params = initial;
        fit.status = "diverged";
    }
    fit.r_squared = r_squared(samples, fit.params);
    return fit;
}

std::string_view to_string(FitQuantity q) noexcept {
    switch (q) {
        case FitQuantity::gap: return "gap";
        case FitQuantity::c0: return "c0";
        case FitQuantity::c1: return "c1";
        case FitQuantity::cx: return "cx";
    }
    return "unknown";
}

std::optional<FitQuantity> parse_fit_quantity(std::string_view name) noexcept {
    for (FitQuantity q : {FitQuantity::gap, FitQuantity::c0, FitQuantity::c1, FitQuantity::cx}) {
        if (name == to_string(q)) {
            return q;
        }
    }
    return std::nullopt;
}

PolyFit published_gap_fit() {
    PolyFit fit;
    fit.a = {0.00794, 0.16531, -0.02838, 0.00206, -5.55762e-5};
    fit.r_squared = 0.9999;
    return fit;
}

SigmoidParams published_sigmoid_fit(FitQuantity q, CxX1Reading reading) {
    switch (q) {
        case FitQuantity::c0:
            return {-0.24612, -0.56893, 0.95967, -0.09066, -1.25815, 2.17868, 6.7313};
        case FitQuantity::cx: {
            const double x1 = reading == CxX1Reading::minus_0_4403 ? -0.4403 : -0.04403;
            return {0.21844, -0.53637, 0.02855, x1, 4.28747, 1.18595, 0.94214};
        }
        case FitQuantity::c1:
            return {-0.91801, 0.9, 1.36773, 0.09317, 2.52364, 0.80729, 3.38213};
        case FitQuantity::gap:
            break;
    }
    throw InvalidArgument("published_sigmoid_fit: the gap uses the polynomial form");
}

std::vector<Sample> samples_of(FitQuantity q, std::span<const MomentSet> moments) {
    std::vector<Sample> out;
    out.reserve(moments.size());
    for (const MomentSet& m : moments) {
        double y = 0.0;
        switch (q) {
            case FitQuantity::gap: y = m.delta_e(); break;
            case FitQuantity::c0: y = m.c0; break;
            case FitQuantity::c1: y = m.c1; break;
            case FitQuantity::cx: y = m.cx; break;
        }
        out.push_back({m.x, y});
    }
    return out;
}

std::vector<double> default_fit_grid() { return uniform_grid(0.0, 12.0, 0.01); }

FitReport fit_report(FitQuantity q, std::span<const MomentSet> moments) {
    const std::vector<Sample> samples = samples_of(q, moments);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();

    FitReport report;
    report.quantity = q;
    report.published_alt_max_deviation = nan;
    report.rows.reserve(samples.size());

    if (q == FitQuantity::gap) {
        const PolyFit refit = fit_gap(samples);
        const PolyFit published = published_gap_fit();
        report.poly = refit;
        report.refit_r_squared = refit.r_squared;
        report.refit_max_deviation = max_deviation(samples, refit);
        report.published_max_deviation = max_deviation(samples, published);
        for (const Sample& s : samples) {
            report.rows.push_back({s.x, s.y, published(s.x), nan, refit(s.x)});
        }
        return report;
    }

    const SigmoidParams published = published_sigmoid_fit(q);
    const SigmoidFit refit = fit_moment(samples, published);
    report.sigmoid = refit;
    report.converged = refit.converged;
    report.refit_r_squared = refit.r_squared;
    report.refit_max_deviation = max_deviation(samples, refit.params);
    report.published_max_deviation = max_deviation(samples, published);

    std::optional<SigmoidParams> alt;
    if (q == FitQuantity::cx) {
        alt = published_sigmoid_fit(q, CxX1Reading::minus_0_04403);
        report.published_alt_max_deviation = max_deviation(samples, *alt);
    }
    for (const Sample& s : samples) {
        report.rows.push_back({s.x, s.y, published(s.x), alt ? (*alt)(s.x) : nan,
                               refit.params(s.x)});
    }
    return report;
}

}  // namespace pendular
