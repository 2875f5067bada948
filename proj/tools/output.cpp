#include "output.hpp"

#include "version.hpp"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace pendular::cli {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.12g}", v);
}

namespace {

std::string csv_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        return format_number(*d);
    }
    if (const auto* i = std::get_if<long long>(&c)) {
        return std::to_string(*i);
    }
    return std::get<std::string>(c);
}

Json json_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        return std::isfinite(*d) ? Json(*d) : Json(nullptr);
    }
    if (const auto* i = std::get_if<long long>(&c)) {
        return *i;
    }
    return std::get<std::string>(c);
}

template <typename Sep>
void join(std::ostream& out, const std::vector<std::string>& items, Sep sep) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out << sep;
        out << items[i];
    }
    out << '\n';
}

}  // namespace

void write_csv(const Table& t, std::ostream& out) {
    out << "# schema: pendular." << t.command << "/" << kSchemaVersion << '\n';
    for (const auto& [key, value] : t.metadata.items()) {
        out << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
            << '\n';
    }
    join(out, t.columns, ',');
    std::vector<std::string> cells;
    for (const auto& row : t.rows) {
        cells.clear();
        for (const Cell& c : row) {
            cells.push_back(csv_cell(c));
        }
        join(out, cells, ',');
    }
}

void write_json(const Table& t, std::ostream& out) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = t.command;
    doc["metadata"] = t.metadata;
    doc["columns"] = t.columns;
    Json rows = Json::array();
    for (const auto& row : t.rows) {
        Json r = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            r[t.columns[i]] = json_cell(row[i]);
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

void write_table(const Table& t, Format f, std::ostream& out) {
    if (f == Format::csv) {
        write_csv(t, out);
    } else {
        write_json(t, out);
    }
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += fmt::format("{:02x}", digest[i]);
    }
    return hex;
}

std::string utc_timestamp() {
    const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_with_manifest(const std::filesystem::path& path, const std::string& payload,
                         const std::string& command, const Json& parameters) {
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot write '" + p.string() + "'");
        }
        f << text;
        if (!f.flush()) {
            throw std::runtime_error("write failed for '" + p.string() + "'");
        }
    };
    write(path, payload);

    Json manifest;
    manifest["command"] = command;
    manifest["parameters"] = parameters;
    manifest["version"] = kVersion;
    manifest["timestamp"] = utc_timestamp();
    manifest["outputs"] = Json::array(
        {Json{{"path", path.filename().string()}, {"bytes", payload.size()}, {"sha256", sha256_hex(payload)}}});
    std::filesystem::path mpath = path;
    mpath += ".manifest.json";
    write(mpath, manifest.dump(2) + "\n");
}

}  // namespace pendular::cli
