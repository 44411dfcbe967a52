#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "checks.hpp"
#include "cli.hpp"
#include "output.hpp"

namespace fs = std::filesystem;
using jcm::cli::run;
using Json = nlohmann::json;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> parse_rows(const std::string& csv, std::string* header = nullptr) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("jcm_test_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("csv writer") {
    std::ostringstream s;
    jcm::cli::write_csv(s, {{"n", "x"}, {{0, 1}, {0.1, 1.0 / 3.0}}});
    CHECK(s.str() == "n,x\n0,0.10000000000000001\n1,0.33333333333333331\n");
    CHECK(std::stod(jcm::cli::format_number(1.0 / 3.0)) == 1.0 / 3.0);
    std::ostringstream bad;
    CHECK_THROWS(jcm::cli::write_csv(bad, {{"a", "b"}, {{0, 1}, {0}}}));
}

TEST_CASE("svg writer") {
    std::ostringstream s;
    jcm::cli::Plot plot{"t<1>", "n", "p", {}};
    plot.series.push_back({"stems", {0, 1, 2}, {0.5, 0.0, 0.25}, jcm::cli::PlotStyle::Stem, "#000000"});
    std::vector<double> x(10000), y(10000);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.001 * k, y[k] = std::sin(0.01 * k);
    plot.series.push_back({"line", x, y, jcm::cli::PlotStyle::Line, "#ff0000"});
    jcm::cli::write_svg(s, plot);
    const std::string svg = s.str();
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.find("t&lt;1&gt;") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    CHECK(svg.size() < 200000);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
}

TEST_CASE("pmf output") {
    SUBCASE("vacuum amplitude gives one row") {
        const auto r = invoke({"pmf", "--family", "coherent", "--beta2", "0"});
        CHECK(r.code == 0);
        CHECK(r.out == "n,rho_nn,rho_nn_weighted\n0,1,1\n");
        const auto summary = Json::parse(r.err);
        CHECK(summary["mean"] == 0.0);
        CHECK(summary["n_max"] == 0);
    }
    SUBCASE("squeezed vacuum odd rows vanish") {
        const auto r = invoke({"pmf", "--family", "squeezed-vacuum", "--r", "1"});
        REQUIRE(r.code == 0);
        const auto rows = parse_rows(r.out);
        REQUIRE(rows.size() > 20);
        for (const auto& row : rows)
            if (static_cast<int>(row[0]) % 2 == 1) CHECK(row[1] == 0.0);
        const auto summary = Json::parse(r.err);
        CHECK(summary["tail_mass"].get<double>() < 1e-8);
    }
    SUBCASE("weighted column applies the detuning factor") {
        const auto r = invoke({"pmf", "--family", "thermal", "--nt", "2", "--nmax", "30", "--delta", "5"});
        REQUIRE(r.code == 0);
        std::string header;
        const auto rows = parse_rows(r.out, &header);
        CHECK(header == "n,rho_nn,rho_nn_weighted");
        REQUIRE(rows.size() == 31);
        for (const auto& row : rows)
            CHECK(row[2] == doctest::Approx(row[1] * (row[0] + 1.0) / (row[0] + 6.0)).epsilon(1e-15));
    }
    SUBCASE("squeezed thermal rows sum to the covered mass") {
        const auto r = invoke({"pmf", "--family", "squeezed-thermal", "--r", "2", "--nt", "10", "--nmax", "100"});
        REQUIRE(r.code == 0);
        const auto rows = parse_rows(r.out);
        REQUIRE(rows.size() == 101);
        double total = 0.0;
        for (const auto& row : rows) {
            CHECK(row[1] >= 0.0);
            total += row[1];
        }
        CHECK(total == doctest::Approx(1.0 - Json::parse(r.err)["tail_mass"].get<double>()).epsilon(1e-12));
    }
    SUBCASE("json format and files") {
        const fs::path dir = scratch("pmf");
        const auto r = invoke({"pmf", "--family", "fock", "--l", "2", "--nmax", "4", "--format", "json", "--out",
                               (dir / "d.json").string(), "--svg", (dir / "p.svg").string()});
        REQUIRE(r.code == 0);
        const auto doc = Json::parse(slurp(dir / "d.json"));
        CHECK(doc["data"]["rho_nn"] == Json::array({0.0, 0.0, 1.0, 0.0, 0.0}));
        CHECK(Json::parse(r.out)["family"] == "fock");
        CHECK(slurp(dir / "p.svg").find("<svg") != std::string::npos);
    }
}

TEST_CASE("dyn output") {
    SUBCASE("single level gives sin squared") {
        const auto r = invoke({"dyn", "--family", "fock", "--l", "3", "--delta", "0", "--zmax", "10", "--mode", "r"});
        REQUIRE(r.code == 0);
        std::string header;
        const auto rows = parse_rows(r.out, &header);
        CHECK(header == "z,s1");
        REQUIRE(rows.size() > 50);
        for (const auto& row : rows) CHECK(std::abs(row[1] - std::sin(row[0]) * std::sin(row[0])) < 1e-12);
        CHECK(rows.back()[0] == 10.0);
    }
    SUBCASE("detuned coherent inversion") {
        const auto r = invoke({"dyn", "--family", "coherent", "--beta2", "10", "--delta", "10", "--zmax", "500"});
        REQUIRE(r.code == 0);
        std::string header;
        parse_rows(r.out, &header);
        CHECK(header == "z,s1_r,s1_nr");
        const auto s = Json::parse(r.err);
        CHECK(std::abs(s["nonresonant"]["time_average"].get<double>() - 0.25) < 0.02);
        CHECK(std::abs(s["resonant"]["time_average"].get<double>() - 0.5) < 0.01);
        CHECK(s["reference_mean"] == 10.0);
    }
    SUBCASE("detuned thermal inversion") {
        const fs::path dir = scratch("dyn");
        const auto r = invoke({"dyn", "--family", "thermal", "--nt", "100", "--delta", "200", "--zmax", "500", "--mode",
                               "nr", "--out", (dir / "t.csv").string()});
        REQUIRE(r.code == 0);
        const auto s = Json::parse(r.out);
        CHECK(std::abs(s["nonresonant"]["time_average"].get<double>() - 0.14) < 0.02);
        CHECK_FALSE(s.contains("resonant"));
    }
    SUBCASE("invalid settings") {
        CHECK(invoke({"dyn", "--family", "coherent", "--beta2", "1", "--zmax", "0"}).code == 2);
        CHECK(invoke({"dyn", "--family", "coherent", "--beta2", "1", "--delta", "-1"}).code == 2);
        CHECK(invoke({"dyn", "--family", "coherent", "--beta2", "1", "--mode", "both-ish"}).code == 2);
    }
}

TEST_CASE("moments output") {
    auto r = invoke({"moments", "--family", "coherent", "--beta2", "7"});
    REQUIRE(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["closed_mean"] == 7.0);
    CHECK(j["closed_var"] == 7.0);
    CHECK(std::abs(j["pmf_mean"].get<double>() - 7.0) < 1e-6);
    CHECK(j["within_tolerance"] == true);

    r = invoke({"moments", "--family", "dsts", "--beta2", "0", "--nt", "2", "--r", "0", "--eps-tail", "1e-12"});
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["closed_mean"].get<double>() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(j["closed_var"].get<double>() == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(j["params"]["variant"] == "dsts");

    r = invoke({"moments", "--family", "sdns", "--beta2", "10", "--r", "1", "--psi", "1.5707963267948966", "--m", "2",
                "--eps-tail", "1e-12"});
    REQUIRE(r.code == 0);
    j = Json::parse(r.out);
    CHECK(j["abs_diffs"]["mean"].get<double>() < 1e-6);
    CHECK(j["abs_diffs"]["variance"].get<double>() < 1e-6);
    CHECK(j["params"]["m"] == 2);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"pmf"}).code == 2);
    CHECK(invoke({"pmf", "--family", "banana"}).code == 2);
    CHECK(invoke({"pmf", "--family", "coherent", "--r", "1"}).code == 2);
    CHECK(invoke({"pmf", "--family", "coherent", "--nmax", "ten"}).code == 2);
    CHECK(invoke({"pmf", "--family", "sdts", "--variant", "dsts"}).code == 2);
    CHECK(invoke({"pmf", "--family", "fock", "--l", "1", "--m", "1"}).code == 2);
    const auto capped = invoke({"pmf", "--family", "coherent", "--beta2", "1e6"});
    CHECK(capped.code == 3);
    CHECK(capped.err.find("cap") != std::string::npos);
    const auto help = invoke({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("pmf") != std::string::npos);
}

TEST_CASE("identical invocations give identical bytes") {
    const std::vector<std::string> args{"dyn", "--family", "squeezed-coherent", "--beta2", "5", "--r", "0.5", "--psi",
                                        "1", "--delta", "3", "--zmax", "60", "--format", "json"};
    const auto a = invoke(args), b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
}

TEST_CASE("xcheck") {
    auto r = invoke({"xcheck", "--list"});
    CHECK(r.code == 0);
    for (const auto& c : jcm::cli::check_catalog()) CHECK(r.out.find(c.id) != std::string::npos);
    r = invoke({"xcheck", "--only", "eq17-eq18"});
    CHECK(r.code == 0);
    CHECK(r.out.find("eq17-eq18") != std::string::npos);
    CHECK(r.out.find("PASS") != std::string::npos);
    CHECK(r.out.find("eq15-b8") == std::string::npos);
    CHECK(invoke({"xcheck", "--only", "nope"}).code == 2);
    CHECK(invoke({"xcheck", "--dim", "8"}).code == 2);
    r = invoke({"xcheck", "--only", "b1-advisory", "--only", "oracle-squeezed-coherent", "--dim", "32"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ADVISORY") != std::string::npos);
}

TEST_CASE("sweep") {
    const fs::path dir = scratch("sweep");
    SUBCASE("one trivial run") {
        std::ofstream(dir / "m.ini") << "# comment\n[vacuum]\ncommand = pmf\nnote = trivial\nfamily = coherent\nbeta2 = 0\n";
        const auto r = invoke({"sweep", (dir / "m.ini").string(), "--outdir", (dir / "out").string()});
        REQUIRE(r.code == 0);
        CHECK(slurp(dir / "out" / "vacuum" / "data.csv") == "n,rho_nn,rho_nn_weighted\n0,1,1\n");
        CHECK(Json::parse(slurp(dir / "out" / "vacuum" / "summary.json"))["mean"] == 0.0);
        CHECK(fs::exists(dir / "out" / "vacuum" / "plot.svg"));
        const auto index = Json::parse(slurp(dir / "out" / "index.json"));
        REQUIRE(index["runs"].size() == 1);
        CHECK(index["runs"][0]["name"] == "vacuum");
        CHECK(index["runs"][0]["note"] == "trivial");
        CHECK(index["runs"][0]["exit_code"] == 0);
    }
    SUBCASE("failures are recorded and runs stay isolated") {
        std::ofstream(dir / "m.ini") << "[good]\ncommand = dyn\nfamily = thermal\nnt = 1\nzmax = 20\nsvg = false\n"
                                     << "[bad]\ncommand = pmf\nfamily = coherent\nbeta2 = 1e6\n"
                                     << "[moments]\ncommand = moments\nfamily = thermal\nnt = 1\n";
        const auto r = invoke({"sweep", (dir / "m.ini").string(), "--outdir", (dir / "out").string(), "--jobs", "3"});
        CHECK(r.code == 3);
        const auto index = Json::parse(slurp(dir / "out" / "index.json"));
        REQUIRE(index["runs"].size() == 3);
        CHECK(index["runs"][0]["exit_code"] == 0);
        CHECK_FALSE(fs::exists(dir / "out" / "good" / "plot.svg"));
        CHECK(index["runs"][1]["exit_code"] == 3);
        CHECK(index["runs"][1]["error"].get<std::string>().find("cap") != std::string::npos);
        CHECK(index["runs"][2]["files"] == Json::array({"summary.json"}));
    }
    SUBCASE("empty manifest") {
        std::ofstream(dir / "empty.ini") << "; nothing\n";
        const auto r = invoke({"sweep", (dir / "empty.ini").string(), "--outdir", (dir / "out").string()});
        CHECK(r.code == 2);
        CHECK(r.err.find("no runs") != std::string::npos);
    }
    SUBCASE("malformed manifests") {
        std::ofstream(dir / "a.ini") << "[x]\nfamily = coherent\n";
        CHECK(invoke({"sweep", (dir / "a.ini").string(), "--outdir", (dir / "out").string()}).code == 2);
        std::ofstream(dir / "b.ini") << "[x]\ncommand = pmf\nfamily = coherent\nout = /etc/passwd\n";
        CHECK(invoke({"sweep", (dir / "b.ini").string(), "--outdir", (dir / "out").string()}).code == 2);
        std::ofstream(dir / "c.ini") << "[../x]\ncommand = pmf\nfamily = coherent\n";
        CHECK(invoke({"sweep", (dir / "c.ini").string(), "--outdir", (dir / "out").string()}).code == 2);
    }
    SUBCASE("shipped manifest") {
        const fs::path manifest = fs::path(JCM_SOURCE_DIR) / "data" / "paper_figures.manifest";
        REQUIRE(fs::exists(manifest));
        const auto r = invoke({"sweep", manifest.string(), "--outdir", (dir / "figs").string(), "--jobs", "2"});
        CHECK(r.code == 0);
        const auto index = Json::parse(slurp(dir / "figs" / "index.json"));
        CHECK(index["runs"].size() >= 40);
        for (const auto& run : index["runs"]) {
            CHECK(run["exit_code"] == 0);
            CHECK(fs::exists(dir / "figs" / run["directory"].get<std::string>() / "data.csv"));
        }
    }
    fs::remove_all(dir);
}
