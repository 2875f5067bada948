#include "pendular/units.hpp"

#include "pendular/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pendular {

void MoleculePreset::validate() const {
    if (name.empty()) {
        throw InvalidArgument("preset: empty name");
    }
    if (!(mu_debye > 0.0) || !std::isfinite(mu_debye)) {
        throw InvalidArgument("preset '" + name + "': mu_debye must be > 0");
    }
    if (!(b_cm1 > 0.0) || !std::isfinite(b_cm1)) {
        throw InvalidArgument("preset '" + name + "': b_cm1 must be > 0");
    }
}

void LabGeometry::validate() const {
    if (!(epsilon_kv_cm >= 0.0) || !std::isfinite(epsilon_kv_cm)) {
        throw InvalidArgument("geometry: field strength must be >= 0");
    }
    if (!(r_nm > 0.0) || !std::isfinite(r_nm)) {
        throw InvalidArgument("geometry: distance must be > 0");
    }
}

double reduced_field(const MoleculePreset& p, double epsilon_kv_cm) {
    p.validate();
    if (!(epsilon_kv_cm >= 0.0)) {
        throw InvalidArgument("reduced_field: field strength must be >= 0");
    }
    return units::kStarkCm1 * p.mu_debye * epsilon_kv_cm / p.b_cm1;
}

double epsilon_for_x(const MoleculePreset& p, double x) {
    p.validate();
    if (!(x >= 0.0)) {
        throw InvalidArgument("epsilon_for_x: reduced field must be >= 0");
    }
    return x * p.b_cm1 / (units::kStarkCm1 * p.mu_debye);
}

double omega_over_b(const MoleculePreset& p, double r_nm) {
    p.validate();
    if (!(r_nm > 0.0)) {
        throw InvalidArgument("omega_over_b: distance must be > 0");
    }
    return units::kDipolarCm1 * p.mu_debye * p.mu_debye / (r_nm * r_nm * r_nm) / p.b_cm1;
}

double distance_for_omega(const MoleculePreset& p, double omega) {
    p.validate();
    if (!(omega > 0.0)) {
        throw InvalidArgument("distance_for_omega: omega must be > 0");
    }
    return std::cbrt(units::kDipolarCm1 * p.mu_debye * p.mu_debye / (omega * p.b_cm1));
}

void PresetRegistry::add(MoleculePreset preset) {
    preset.validate();
    const std::string key = preset.name;
    if (!presets_.emplace(key, std::move(preset)).second) {
        throw ParseError("duplicate preset name '" + key + "'");
    }
}

PresetRegistry PresetRegistry::builtin() {
    // SrO uses the rounded constants common in the pendular-qubit literature;
    // the others are convenience values.
    static constexpr std::string_view kBuiltin = R"(
name=KRb  mu_debye=0.574 b_cm1=0.03716
name=NaK  mu_debye=2.72  b_cm1=0.09412
name=OCS  mu_debye=0.715 b_cm1=0.2029
name=RbCs mu_debye=1.225 b_cm1=0.01635
name=SrO  mu_debye=8.9   b_cm1=0.33
)";
    return parse(kBuiltin, "<builtin>");
}

namespace {

double parse_number(std::string_view text, std::string_view source, int line,
                    std::string_view field) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        std::ostringstream msg;
        msg << source << ":" << line << ": field '" << field << "': not a number: '" << text
            << "'";
        throw ParseError(msg.str());
    }
    return value;
}

}  // namespace

PresetRegistry PresetRegistry::parse(std::string_view text, std::string_view source) {
    PresetRegistry reg;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) {
            raw.erase(hash);
        }
        std::istringstream tokens(raw);
        std::string token;
        std::optional<std::string> name;
        std::optional<double> mu;
        std::optional<double> b;
        bool any = false;
        while (tokens >> token) {
            any = true;
            const auto eq = token.find('=');
            auto fail = [&](const std::string& what) {
                std::ostringstream msg;
                msg << source << ":" << line_no << ": " << what;
                throw ParseError(msg.str());
            };
            if (eq == std::string::npos || eq == 0) {
                fail("expected key=value, got '" + token + "'");
            }
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (value.empty()) {
                fail("field '" + key + "': empty value");
            }
            if (key == "name") {
                name = value;
            } else if (key == "mu_debye") {
                mu = parse_number(value, source, line_no, key);
            } else if (key == "b_cm1") {
                b = parse_number(value, source, line_no, key);
            } else {
                fail("unknown field '" + key + "'");
            }
        }
        if (!any) {
            continue;
        }
        std::ostringstream msg;
        msg << source << ":" << line_no << ": ";
        if (!name) {
            throw ParseError(msg.str() + "missing field 'name'");
        }
        if (!mu) {
            throw ParseError(msg.str() + "missing field 'mu_debye'");
        }
        if (!b) {
            throw ParseError(msg.str() + "missing field 'b_cm1'");
        }
        try {
            reg.add({*name, *mu, *b});
        } catch (const std::exception& err) {
            throw ParseError(msg.str() + err.what());
        }
    }
    return reg;
}

PresetRegistry PresetRegistry::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open preset file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

PresetRegistry PresetRegistry::resolve(const std::optional<std::filesystem::path>& path) {
    if (path) {
        return load(*path);
    }
    if (const char* env = std::getenv("PENDULAR_PRESETS"); env != nullptr && *env != '\0') {
        return load(env);
    }
    return builtin();
}

const MoleculePreset& PresetRegistry::get(std::string_view name) const {
    if (const auto it = presets_.find(name); it != presets_.end()) {
        return it->second;
    }
    std::string msg = "unknown molecule '" + std::string(name) + "'; available:";
    for (const auto& [key, _] : presets_) {
        msg += " " + key;
    }
    throw InvalidArgument(msg);
}

std::vector<std::string> PresetRegistry::list() const {
    std::vector<std::string> names;
    names.reserve(presets_.size());
    for (const auto& [key, _] : presets_) {
        names.push_back(key);
    }
    return names;
}

}  // namespace pendular
