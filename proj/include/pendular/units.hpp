#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pendular {

namespace units {

// SI defining constants (exact).
inline constexpr double kPlanck = 6.62607015e-34;       // J s
inline constexpr double kSpeedOfLight = 299792458.0;    // m / s
inline constexpr double kHcJouleCm = kPlanck * kSpeedOfLight * 100.0;  // J cm

// Gaussian route. 1 D = 1e-18 statC cm and 1 statV = c[m/s] * 1e-6 V, so
// 1 D * 1 kV/cm = 1e-18 * (1e3 / 299.792458) erg = 3.33564e-25 J.
inline constexpr double kStatVolt = kSpeedOfLight * 1e-6;  // V
inline constexpr double kDebyeKvPerCmJoule = 1e-18 * (1e3 / kStatVolt) * 1e-7;

// (1 D)^2 / (1 nm)^3 = (1e-18 statC cm)^2 / (1e-7 cm)^3 = 1e-15 erg = 1e-22 J.
inline constexpr double kDebye2PerNm3Joule = 1e-22;

/// mu[D] * eps[kV/cm] expressed in cm^-1 (about 1.6792e-2).
inline constexpr double kStarkCm1 = kDebyeKvPerCmJoule / kHcJouleCm;

/// mu[D]^2 / r[nm]^3 expressed in cm^-1 (about 5.0341).
inline constexpr double kDipolarCm1 = kDebye2PerNm3Joule / kHcJouleCm;

}  // namespace units

/// Permanent dipole moment (Debye) and rotational constant (cm^-1).
struct MoleculePreset {
    std::string name;
    double mu_debye = 0.0;
    double b_cm1 = 0.0;

    void validate() const;
};

/// Field strength (kV/cm), separation (nm) and array angle (radians).
struct LabGeometry {
    double epsilon_kv_cm = 0.0;
    double r_nm = 1.0;
    double alpha = 0.0;

    void validate() const;
};

[[nodiscard]] double reduced_field(const MoleculePreset& p, double epsilon_kv_cm);
[[nodiscard]] double epsilon_for_x(const MoleculePreset& p, double x);
[[nodiscard]] double omega_over_b(const MoleculePreset& p, double r_nm);
[[nodiscard]] double distance_for_omega(const MoleculePreset& p, double omega_over_b);

/// Immutable after construction; lookups are safe from several threads.
class PresetRegistry {
public:
    /// Shipped presets: SrO and a few common 1-Sigma species.
    [[nodiscard]] static PresetRegistry builtin();
    /// Parse the record format: one molecule per line as whitespace separated
    /// key=value pairs with keys name, mu_debye and b_cm1; '#' starts a comment.
    [[nodiscard]] static PresetRegistry parse(std::string_view text,
                                              std::string_view source = "<string>");
    [[nodiscard]] static PresetRegistry load(const std::filesystem::path& path);

    /// Explicit path, else $PENDULAR_PRESETS, else the built-in set.
    [[nodiscard]] static PresetRegistry resolve(const std::optional<std::filesystem::path>& path);

    [[nodiscard]] const MoleculePreset& get(std::string_view name) const;
    [[nodiscard]] std::vector<std::string> list() const;
    [[nodiscard]] std::size_t size() const noexcept { return presets_.size(); }

private:
    void add(MoleculePreset preset);

    std::map<std::string, MoleculePreset, std::less<>> presets_;
};

}  // namespace pendular
