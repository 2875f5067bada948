#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using pendular::cli::run;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct Csv {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t col(const std::string& name) const {
        const auto it = std::find(header.begin(), header.end(), name);
        REQUIRE(it != header.end());
        return static_cast<std::size_t>(it - header.begin());
    }
    [[nodiscard]] double num(std::size_t row, const std::string& name) const {
        return std::stod(rows[row][col(name)]);
    }
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            csv.comments.push_back(line);
        } else if (csv.header.empty()) {
            csv.header = split(line);
        } else {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

}  // namespace

TEST_CASE("stark-map defaults") {
    const Run r = invoke({"stark-map", "--jobs", "2"});
    REQUIRE(r.code == 0);
    const Csv csv = parse_csv(r.out);
    CHECK(csv.comments.front() == "# schema: pendular.stark-map/1");
    CHECK(csv.rows.front() == std::vector<std::string>{"0", "0", "0", "0", "0"});

    double best = 0.0;
    double at = -1.0;
    for (std::size_t i = 0; i < csv.rows.size(); ++i) {
        if (csv.num(i, "delta_e") > best) {
            best = csv.num(i, "delta_e");
            at = csv.num(i, "x");
        }
    }
    CHECK(std::abs(best - 3.7) <= 0.1);
    CHECK(at == 12.0);
    CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(invoke({"stark-map", "--x-step", "0"}).code == 2);
    CHECK(invoke({"stark-map", "--bogus"}).code == 2);
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"moments", "--x-grid", "1:0:0.1"}).code == 2);
    CHECK(invoke({"couplings", "--x", "1", "--alpha", "120"}).code == 2);
    CHECK(invoke({"couplings", "--epsilon", "10"}).code == 2);
    CHECK(invoke({"convert", "--molecule", "XeF", "--epsilon", "1"}).code == 2);
    CHECK(invoke({"chain-ed", "--x", "6", "--n", "40"}).code == 2);
    CHECK(invoke({"fit", "--quantity", "cz"}).code == 2);
    const Run help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("stark-map") != std::string::npos);
}

TEST_CASE("couplings at the critical field") {
    const Run r = invoke({"couplings", "--x", "6.1", "--alpha", "0"});
    REQUIRE(r.code == 0);
    const Csv csv = parse_csv(r.out);
    REQUIRE(csv.rows.size() == 1);
    CHECK(std::abs(csv.num(0, "jz_over_j") + 1.0) <= 0.05);

    const Csv magic = parse_csv(invoke({"couplings", "--x", "6.1", "--alpha", "magic"}).out);
    CHECK(std::abs(magic.num(0, "jz")) <= 1e-12);
}

TEST_CASE("convert SrO field") {
    const Run r = invoke({"convert", "--molecule", "SrO", "--epsilon", "13.5"});
    REQUIRE(r.code == 0);
    const Csv csv = parse_csv(r.out);
    CHECK(std::abs(csv.num(0, "x") / 6.1 - 1.0) <= 0.02);
    CHECK(csv.rows[0][csv.col("r_nm")] == "nan");
}

TEST_CASE("molecule adds a units block") {
    const Run plain = invoke({"couplings", "--x", "3", "--format", "json"});
    const auto a = nlohmann::json::parse(plain.out);
    CHECK_FALSE(a["metadata"].contains("units"));
    const Run lab = invoke({"couplings", "--molecule", "SrO", "--epsilon", "13.5", "--r", "500",
                            "--format", "json"});
    REQUIRE(lab.code == 0);
    const auto b = nlohmann::json::parse(lab.out);
    CHECK(b["schema_version"] == 1);
    CHECK(b["metadata"]["units"]["molecule"] == "SrO");
    CHECK(b["metadata"]["units"]["r_nm"].get<double>() == doctest::Approx(500.0));
    CHECK(b["rows"][0]["omega"].get<double>() < 1e-4);
}

TEST_CASE("phase-diagram over the weak-coupling window is ferromagnetic") {
    const Run r = invoke({"phase-diagram", "--x-grid", "2,6,12", "--omega-grid", "log:1e-6:1e-4:3",
                          "--n", "8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["metadata"]["n"] == 8);
    CHECK(doc["metadata"]["boundary"] == "open");
    CHECK(doc["metadata"].contains("thresholds"));
    CHECK(doc["metadata"].contains("code_version"));
    REQUIRE(doc["rows"].size() == 9);
    for (const auto& row : doc["rows"]) {
        CHECK(row["phase"] == "ferromagnetic");
        CHECK(row["gamma_over_j"].get<double>() > 1e4);
    }
}

TEST_CASE("output file, manifest and determinism") {
    const auto dir = std::filesystem::temp_directory_path() / "pendular_cli_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "moments.csv";
    const std::vector<std::string> args{"moments", "--x-grid", "0:2:0.5", "--out", path.string()};

    REQUIRE(invoke(args).code == 0);
    const std::string first = slurp(path);
    REQUIRE(invoke(args).code == 0);
    CHECK(slurp(path) == first);

    const auto manifest = nlohmann::json::parse(slurp(dir / "moments.csv.manifest.json"));
    CHECK(manifest["command"] == "moments");
    CHECK(manifest["parameters"]["x_grid"] == "0:2:0.5");
    CHECK(manifest.contains("timestamp"));
    CHECK(manifest.contains("version"));
    CHECK(manifest["outputs"][0]["bytes"] == first.size());
    CHECK(manifest["outputs"][0]["sha256"].get<std::string>().size() == 64);

    // Same payload on stdout.
    CHECK(invoke({"moments", "--x-grid", "0:2:0.5"}).out == first);
    std::filesystem::remove_all(dir);
}

TEST_CASE("parallel and serial scans produce identical bytes") {
    const auto serial = invoke({"coupling-map", "--x-grid", "0:4:0.5", "--alpha-grid", "0:90:15", "--jobs", "1"});
    const auto parallel = invoke({"coupling-map", "--x-grid", "0:4:0.5", "--alpha-grid", "0:90:15", "--jobs", "3"});
    REQUIRE(serial.code == 0);
    CHECK(serial.out == parallel.out);
    const Csv csv = parse_csv(serial.out);
    CHECK(csv.rows.size() == 9 * 7);
}

TEST_CASE("numbers carry 12 significant digits") {
    const Csv csv = parse_csv(invoke({"moments", "--x-grid", "3"}).out);
    const std::string c0 = csv.rows[0][csv.col("c0")];
    std::string digits;
    for (char ch : c0) {
        if (std::isdigit(static_cast<unsigned char>(ch))) digits += ch;
    }
    digits.erase(0, digits.find_first_not_of('0'));
    CHECK(digits.size() <= 12);
    CHECK(digits.size() >= 10);
}

TEST_CASE("remaining commands run") {
    CHECK(invoke({"coefficient-map", "--x-max", "2", "--state", "down"}).code == 0);
    CHECK(invoke({"chain-ed", "--x", "6", "--omega", "1e-4", "--n", "6", "--boundary", "periodic"}).code == 0);
    CHECK(invoke({"presets"}).out.find("SrO,8.9,0.33") != std::string::npos);

    const Run fit = invoke({"fit", "--quantity", "c1", "--format", "json"});
    REQUIRE(fit.code == 0);
    const auto doc = nlohmann::json::parse(fit.out);
    CHECK(doc["metadata"]["fits"]["c1"]["refit_r_squared"].get<double>() >= 0.9999);
    CHECK(doc["rows"].size() == 1201);
}
