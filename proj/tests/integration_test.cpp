// Runs the abtrace executable end to end.

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::path(ABTRACE_WORK_DIR) / "integration";

int run(const std::string& args, const std::string& capture = "") {
    fs::create_directories(kWork);
    const std::string log = (kWork / (capture.empty() ? "last.log" : capture)).string();
    const std::string cmd = std::string(ABTRACE_EXE) + " " + args + " > " + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh(const std::string& name) {
    const auto dir = kWork / name;
    fs::remove_all(dir);
    return dir;
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kWork);
    const auto p = kWork / name;
    std::ofstream(p) << text;
    return p;
}

/// Data rows (non-comment, after the column header) split on commas.
std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) { header = false; continue; }
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        out.push_back(cells);
    }
    return out;
}

} // namespace

TEST_CASE("spectrum output is byte-identical across thread counts") {
    const auto a = fresh("spec1"), b = fresh("spec4");
    REQUIRE(run("spectrum --cutoff 40 --alpha 0.3 --threads 1 --out " + a.string()) == 0);
    REQUIRE(run("spectrum --cutoff 40 --alpha 0.3 --threads 4 --out " + b.string()) == 0);
    const auto text = slurp(a / "spectrum.csv");
    CHECK(text == slurp(b / "spectrum.csv"));
    CHECK(text.rfind("# abtrace 0.1.0\n", 0) == 0);
    CHECK(text.find("# config_hash=") != std::string::npos);
    CHECK(text.find("# config={") != std::string::npos);
}

TEST_CASE("trace and fit outputs are byte-identical across thread counts") {
    for (const char* cmd : {"trace", "fit"}) {
        const auto a = fresh(std::string(cmd) + "1"), b = fresh(std::string(cmd) + "3");
        REQUIRE(run(std::string(cmd) + " --cutoff 50 --alpha 0,pi/3 --threads 1 --out " + a.string()) == 0);
        REQUIRE(run(std::string(cmd) + " --cutoff 50 --alpha 0,pi/3 --threads 3 --out " + b.string()) == 0);
        for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    }
}

TEST_CASE("disk spectrum starts at j_{0,1}^2") {
    const auto d = fresh("disk");
    REQUIRE(run("spectrum --cutoff 20 --out " + d.string()) == 0);
    const auto r = rows(slurp(d / "spectrum.csv"));
    REQUIRE(!r.empty());
    CHECK(std::stod(r[0][0]) == doctest::Approx(5.78319).epsilon(1e-6));
}

TEST_CASE("square torus spectrum has first nonzero eigenvalue 4 pi^2") {
    const auto cfg = write_config("square.json", R"({"problem":"torus","lattice":{"e1":[1,0],"e2":[0,1]}})");
    const auto d = fresh("torus");
    REQUIRE(run("spectrum --cutoff 20 --alpha 0 --config " + cfg.string() + " --out " + d.string()) == 0);
    const auto r = rows(slurp(d / "spectrum.csv"));
    REQUIRE(r.size() > 1);
    CHECK(std::stod(r[0][0]) == 0.0);
    CHECK(std::stod(r[1][0]) == doctest::Approx(4 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("annulus half-flux spectrum has the nu = 1/2 rows at k = 2 n pi") {
    const auto cfg = write_config("annulus.json", R"({"problem":"annulus","inner_radius":0.5,"alpha":"pi"})");
    const auto d = fresh("annulus");
    REQUIRE(run("spectrum --cutoff 30 --config " + cfg.string() + " --out " + d.string()) == 0);
    int found = 0;
    for (const auto& r : rows(slurp(d / "spectrum.csv")))
        if (std::stod(r[3]) == 0.5) {
            CHECK(std::stod(r[1]) == doctest::Approx(2 * std::stoi(r[4]) * std::numbers::pi).epsilon(1e-12));
            ++found;
        }
    CHECK(found == 8);
}

TEST_CASE("flux sweep fit: ratios follow cos alpha") {
    const auto d = fresh("sweep");
    REQUIRE(run("fit --alpha 0,pi/3,pi/2,2pi/3,pi --threads 4 --out " + d.string()) == 0);
    const auto r = rows(slurp(d / "fit.csv"));
    REQUIRE(r.size() == 5);
    for (const auto& row : r) CHECK(std::abs(std::stod(row[4]) - std::stod(row[5])) <= 0.05);
}

TEST_CASE("beamcheck reports the triangle winding and sign") {
    const auto d = fresh("beam");
    REQUIRE(run("beamcheck --out " + d.string(), "beam.log") == 0);
    const auto out = slurp(kWork / "beam.log");
    CHECK(out.find("5.5000") != std::string::npos);
    CHECK(out.find("sign -") != std::string::npos);
    const auto csv = slurp(d / "beamcheck.csv");
    CHECK(csv.find("\nsign,-1\n") != std::string::npos);
    CHECK(csv.find("\nfocal_count,3\n") != std::string::npos);
}

TEST_CASE("lengths reports a gap of at least 0.45 around the triangle") {
    const auto d = fresh("lengths");
    REQUIRE(run("lengths --out " + d.string()) == 0);
    const auto csv = slurp(d / "lengths.csv");
    const auto pos = csv.find("distance=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(csv.substr(pos + 9)) >= 0.45);
    CHECK(csv.find("isolated=true") != std::string::npos);
}

TEST_CASE("exit codes and no partial output") {
    const auto d = fresh("bad");
    CHECK(run("spectrum --cutoff -3 --out " + d.string()) == 2);
    CHECK_FALSE(fs::exists(d));
    CHECK(run("spectrum --alpha pie --out " + d.string()) == 2);
    CHECK(run("spectrum --no-such-flag") == 2);
    const auto cfg = write_config("typo.json", R"({"radiuss": 2})");
    CHECK(run("spectrum --config " + cfg.string() + " --out " + d.string()) == 2);
    const auto broken = write_config("broken.json", "{not json");
    CHECK(run("spectrum --config " + broken.string() + " --out " + d.string()) == 2);
    // A fit window reaching the neighbouring pentagon length is a numerical refusal.
    const auto wide = write_config("wide.json", R"({"ngon":4,"fit":{"half_width":0.3}})");
    CHECK(run("fit --cutoff 40 --config " + wide.string() + " --out " + d.string()) == 3);
    CHECK_FALSE(fs::exists(d));
}

TEST_CASE("flags override the config file and print-config shows the result") {
    const auto cfg = write_config("base.json", R"({"cutoff": 33, "ngon": 5})");
    REQUIRE(run("--print-config --config " + cfg.string() + " --cutoff 44", "print.log") == 0);
    const auto out = slurp(kWork / "print.log");
    CHECK(out.find("\"cutoff\": 44.0") != std::string::npos);
    CHECK(out.find("\"ngon\": 5") != std::string::npos);
}
