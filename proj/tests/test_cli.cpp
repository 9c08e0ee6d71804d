#include <catch2/catch.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const std::string cli = NULLCURVE_CLI_PATH;
const std::string work = NULLCURVE_TEST_DIR;

int run(const std::string& args, const std::string& stdout_file = "") {
    std::string cmd = cli + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file + " 2>&1";
    else cmd += " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream(path) << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
    std::vector<std::vector<std::string>> rows;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST_CASE("solve: constant-curvature run keeps k constant") {
    fs::create_directories(work);
    const std::string cfg = work + "/const.json";
    const std::string out = work + "/const_out";
    write_file(cfg, R"({"m":1.0,"initial":{"k":2.0,"l4":0.0,"l5":1.0},
                      "T":3.0,"dt_max":0.01,"tol":1e-11,"method":"direct","outputs":")" +
                        out + "\"}");
    REQUIRE(run("solve --config " + cfg) == 0);
    auto rows = read_csv(out + "/trajectory.csv");
    REQUIRE(rows.size() > 100);
    CHECK(rows[0][0] == "t");
    CHECK(rows[0][1] == "k");
    CHECK(rows[0].size() == 15);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][1]) - 2.0) < 1e-9);
    CHECK(fs::exists(out + "/curve.svg"));
    CHECK(fs::exists(out + "/portrait.svg"));
    CHECK(fs::exists(out + "/invariants.json"));
}

TEST_CASE("solve: conservation report and blow-up exit code") {
    const std::string cfg = work + "/cons.json";
    const std::string out = work + "/cons_out";
    write_file(cfg, R"({"m":1.0,"initial":{"k":0.0,"l4":1.0,"l5":0.0},
                      "T":4.0,"dt_max":0.005,"tol":1e-11,"method":"direct","outputs":")" +
                        out + "\"}");
    REQUIRE(run("solve --config " + cfg) == 0);
    auto inv = nlohmann::json::parse(slurp(out + "/invariants.json"));
    CHECK(inv["C1"].get<double>() == Approx(1.0));
    CHECK(inv["C2"].get<double>() == Approx(-0.25));
    CHECK(inv["drift"]["casimir"].get<double>() < 1e-7);
    CHECK(inv["drift"]["moment"].get<double>() < 1e-7);

    // the same orbit leaves every compact set near t = 4.36; requesting
    // T = 20 is a numeric failure by contract
    const std::string cfg2 = work + "/cons20.json";
    write_file(cfg2, R"({"m":1.0,"initial":{"k":0.0,"l4":1.0,"l5":0.0},
                      "T":20.0,"dt_max":0.01,"tol":1e-10,"method":"direct","outputs":")" +
                         out + "_late\"}");
    CHECK(run("solve --config " + cfg2) == 3);
}

TEST_CASE("solve: config validation names the missing field") {
    const std::string cfg = work + "/bad.json";
    write_file(cfg, R"({"initial":{"k":0.0,"l4":1.0,"l5":0.0},"T":4.0})");
    const std::string log = work + "/bad.log";
    CHECK(run("solve --config " + cfg, log) == 2);
    CHECK(slurp(log).find("'m'") != std::string::npos);

    write_file(cfg, R"({"m":1.0,"initial":{"k":0.0,"l5":0.0},"T":4.0})");
    CHECK(run("solve --config " + cfg, log) == 2);
    CHECK(slurp(log).find("'initial.l4'") != std::string::npos);
}

TEST_CASE("solve: method=both records the deviation between the two routes") {
    const std::string cfg = work + "/both.json";
    const std::string out = work + "/both_out";
    write_file(cfg, R"({"m":1.0,"initial":{"k":-3.0,"l4":-3.0,"l5":1.5},
                      "T":3.0,"dt_max":0.01,"tol":1e-12,"method":"both","outputs":")" +
                        out + "\"}");
    REQUIRE(run("solve --config " + cfg) == 0);
    auto inv = nlohmann::json::parse(slurp(out + "/invariants.json"));
    CHECK(inv["both_sup_deviation_after_alignment"].get<double>() < 1e-5);
    CHECK(inv["quadrature"]["isotropy_residual"].get<double>() < 1e-7);
    CHECK(inv["branch"] == "case-II-compact");
}

TEST_CASE("portrait: emitted samples satisfy the level-set equation") {
    const std::string out = work + "/portrait1";
    REQUIRE(run("portrait --m 1 --c1 1 --c2 -0.25 --out " + out) == 0);
    auto rows = read_csv(out + "/portrait.csv");
    REQUIRE(rows.size() > 100);
    // D > 0: one connected branch
    std::set<std::string> tags;
    const double g2 = std::cbrt(16.0) * (1.0 / 3.0 - 0.25);
    const double g3 = -(1.0 + (2.0 / 3.0) * (-0.25) + 4.0 / 27.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double chi = std::stod(rows[i][1]);
        const double l4 = std::stod(rows[i][2]);
        tags.insert(rows[i][3]);
        CHECK(l4 * l4 == Approx(4 * chi * chi * chi - g2 * chi - g3)
                             .epsilon(1e-9)
                             .margin(1e-9));
    }
    CHECK(tags == std::set<std::string>{"case-I"});

    // D < 0: two disjoint components
    const std::string out2 = work + "/portrait2";
    REQUIRE(run("portrait --m 1 --c1 0 --c2 2 --out " + out2) == 0);
    auto rows2 = read_csv(out2 + "/portrait.csv");
    std::set<std::string> tags2;
    for (std::size_t i = 1; i < rows2.size(); ++i) tags2.insert(rows2[i][3]);
    CHECK(tags2 == std::set<std::string>{"compact", "unbounded"});

    // D = 0: rational branch annotated as degenerate
    const std::string out3 = work + "/portrait3";
    REQUIRE(run("portrait --m 1 --c1 0 --c2 0 --out " + out3) == 0);
    auto rows3 = read_csv(out3 + "/portrait.csv");
    bool saw_degenerate = false;
    for (std::size_t i = 1; i < rows3.size(); ++i)
        if (rows3[i][3].find("degenerate") != std::string::npos) saw_degenerate = true;
    CHECK(saw_degenerate);

    CHECK(run("portrait --m 0 --c1 0 --c2 0 --out " + work + "/portrait_bad") == 2);
}

TEST_CASE("classify: JSON output") {
    const std::string log = work + "/classify.json";
    REQUIRE(run("classify --p 0,1,0 --v 0,0,0", log) == 0);
    auto j = nlohmann::json::parse(slurp(log));
    CHECK(j["kind"] == "positive");
    CHECK(j["C1"].get<double>() == 1.0);
    CHECK(j["section_residual"].get<double>() < 1e-9);

    REQUIRE(run("classify --p 1,0,1 --v 0,0,0", log) == 0);
    j = nlohmann::json::parse(slurp(log));
    CHECK(j["kind"] == "negative-future");

    CHECK(run("classify --p nonsense --v 0,0,0", log) == 2);
}

TEST_CASE("verify: algebra suite passes, report round-trips") {
    const std::string rep = work + "/report.json";
    CHECK(run("verify --suite algebra --out " + rep) == 0);
    const std::string text = slurp(rep);
    auto j = nlohmann::ordered_json::parse(text);
    CHECK(j["all_pass"].get<bool>());
    // parse -> serialize is byte-identical (modulo the trailing newline we add)
    const std::string again = j.dump(2) + "\n";
    CHECK(again == text);

    CHECK(run("verify --suite nonsense") == 2);
}

TEST_CASE("outputs are deterministic across reruns") {
    const std::string cfg = work + "/det.json";
    write_file(cfg, R"({"m":1.0,"initial":{"k":-3.0,"l4":0.1,"l5":1.0},
                      "T":2.0,"dt_max":0.01,"tol":1e-11,"method":"direct","outputs":")" +
                        work + "/det_a\"}");
    REQUIRE(run("solve --config " + cfg) == 0);
    write_file(cfg, R"({"m":1.0,"initial":{"k":-3.0,"l4":0.1,"l5":1.0},
                      "T":2.0,"dt_max":0.01,"tol":1e-11,"method":"direct","outputs":")" +
                        work + "/det_b\"}");
    REQUIRE(run("solve --config " + cfg) == 0);
    CHECK(slurp(work + "/det_a/trajectory.csv") == slurp(work + "/det_b/trajectory.csv"));
    CHECK(slurp(work + "/det_a/invariants.json") == slurp(work + "/det_b/invariants.json"));
    CHECK(slurp(work + "/det_a/curve.svg") == slurp(work + "/det_b/curve.svg"));
}
