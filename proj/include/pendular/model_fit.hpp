#pragma once

#include "pendular/pendular_moments.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pendular {

struct Sample {
    double x;
    double y;
};

/// y = a1 x + a2 x^2 + ... + a5 x^5 (no constant term).
struct PolyFit {
    std::array<double, 5> a{};
    double r_squared = 0.0;

    [[nodiscard]] double operator()(double x) const noexcept;
};

/// C(x) = a0 + a1 / (1 + exp((x - x1)/k1)) + a2 / (1 + exp(-(x - x2)/k2)).
struct SigmoidParams {
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double k1 = 1.0;
    double k2 = 1.0;

    [[nodiscard]] double operator()(double x) const noexcept;
};

struct SigmoidFit {
    SigmoidParams params;
    double r_squared = 0.0;
    bool converged = false;
    int evaluations = 0;
    std::string status;
};

struct SigmoidFitOptions {
    int max_evaluations = 20000;
    double tolerance = 1e-14;
};

/// Linear least squares on x..x^5. Needs >= 20 samples; a rank-deficient
/// design (e.g. fewer than five distinct nonzero abscissae) is rejected.
[[nodiscard]] PolyFit fit_gap(std::span<const Sample> samples);

/// Levenberg-Marquardt fit of the double sigmoid from `initial`. Needs >= 50
/// samples. On non-convergence the best parameters found are returned with
/// `converged == false`. Widths are normalized to k1, k2 > 0 (the model is
/// invariant under k -> -k with a compensating a0/a shift).
[[nodiscard]] SigmoidFit fit_moment(std::span<const Sample> samples, const SigmoidParams& initial,
                                    const SigmoidFitOptions& options = {});

/// 1 - SS_res / SS_tot of `model` on `samples`.
template <typename Model>
[[nodiscard]] double r_squared(std::span<const Sample> samples, const Model& model);

/// max |model(x) - y| over the samples.
template <typename Model>
[[nodiscard]] double max_deviation(std::span<const Sample> samples, const Model& model);

enum class FitQuantity { gap, c0, c1, cx };

[[nodiscard]] std::string_view to_string(FitQuantity q) noexcept;
[[nodiscard]] std::optional<FitQuantity> parse_fit_quantity(std::string_view name) noexcept;

/// Published quintic coefficients for (E1 - E0)/B.
[[nodiscard]] PolyFit published_gap_fit();

/// The C_X row of the published sigmoid table prints x1 as "-04403"; both
/// plausible decimal readings are kept.
enum class CxX1Reading { minus_0_4403, minus_0_04403 };

/// Published sigmoid parameters for c0, c1 or cx (throws for gap).
[[nodiscard]] SigmoidParams published_sigmoid_fit(FitQuantity q,
                                                  CxX1Reading reading = CxX1Reading::minus_0_4403);

/// Samples of one quantity taken from precomputed moments.
[[nodiscard]] std::vector<Sample> samples_of(FitQuantity q, std::span<const MomentSet> moments);

/// Fit grid used throughout: x in [0, 12], step 0.01.
[[nodiscard]] std::vector<double> default_fit_grid();

struct ComparisonRow {
    double x;
    double computed;
    double published;
    double published_alt;  ///< second C_X reading; NaN for other quantities
    double refit;
};

struct FitReport {
    FitQuantity quantity = FitQuantity::gap;
    double refit_r_squared = 0.0;
    double refit_max_deviation = 0.0;
    double published_max_deviation = 0.0;
    double published_alt_max_deviation = 0.0;  ///< NaN unless quantity == cx
    bool converged = true;
    std::optional<PolyFit> poly;
    std::optional<SigmoidFit> sigmoid;
    std::vector<ComparisonRow> rows;
};

/// Refit one quantity on `moments` (initial guesses from the published table)
/// and compare against the published formula.
[[nodiscard]] FitReport fit_report(FitQuantity q, std::span<const MomentSet> moments);

// ---------------------------------------------------------------------------

template <typename Model>
double r_squared(std::span<const Sample> samples, const Model& model) {
    double mean = 0.0;
    for (const Sample& s : samples) {
        mean += s.y;
    }
    mean /= static_cast<double>(samples.size());
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (const Sample& s : samples) {
        const double r = s.y - model(s.x);
        ss_res += r * r;
        ss_tot += (s.y - mean) * (s.y - mean);
    }
    return ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
}

template <typename Model>
double max_deviation(std::span<const Sample> samples, const Model& model) {
    double worst = 0.0;
    for (const Sample& s : samples) {
        const double d = std::abs(model(s.x) - s.y);
        worst = d > worst ? d : worst;
    }
    return worst;
}

}  // namespace pendular
