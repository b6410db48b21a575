#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "test_support.hpp"

using namespace framefx;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "framefx");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

/// Single column with a pinned base: a mechanism under lateral load.
nlohmann::json pinned_column() {
    const auto w = (testing::data_dir() / "sections" / "w_shapes.csv").string();
    return {{"name", "pinned"},
            {"material", {{"elastic_modulus", 20000.0}, {"yield_stress", 25.0}, {"density", 0.00785}}},
            {"pools", {{"W", w}}},
            {"groups", {{{"name", "C1"}, {"role", "column"}, {"pool", "W"}},
                        {{"name", "C2"}, {"role", "column"}, {"pool", "W"}}}},
            {"nodes", {{0.0, 0.0}, {0.0, 300.0}, {0.0, 600.0}}},
            {"members", {{0, 1, 0}, {1, 2, 1}}},
            {"supports", {{{"node", 0}, {"fix", {"ux", "uy"}}}}},
            {"loads", {{{"node", 2}, {"fx", 1.0}}}},
            {"story_levels", {300.0, 600.0}},
            {"constraints", {{"roof_drift_limit", 2.0}}},
            {"functioning", {{{"name", "col"}, {"group_ids", {0, 1}}, {"heights_cm", {0.0, 300.0}}}}}};
}

std::filesystem::path write_config(const std::filesystem::path& dir, const std::string& file, const nlohmann::json& j) {
    std::ofstream(dir / file) << j.dump(1);
    return dir / file;
}

}  // namespace

TEST_CASE("stepped column run and resume") {
    const auto root = testing::scratch("cli-run");
    const std::vector<std::string> args = {"run",    "--problem", "stepped-column", "--segments", "8",
                                           "--algo", "de",        "--trials",       "3",          "--seed",
                                           "7",      "--pop",     "10",             "--max-fe",   "200",
                                           "--out",  root.string(), "--jobs",       "2"};
    const Outcome first = invoke(args);
    REQUIRE(first.code == 0);
    CHECK(first.out.find("resumed: 9 new trials") != std::string::npos);
    const auto plan = root / "stepped-column-8_de";
    for (const char* cell : {"de-none", "de-ifx", "de-fx"})
        for (int seed : {7, 8, 9}) CHECK(std::filesystem::exists(plan / cell / (std::to_string(seed) + ".json")));
    const std::string rec = slurp(plan / "de-fx" / "8.json");

    const Outcome second = invoke(args);
    REQUIRE(second.code == 0);
    CHECK(second.out.find("resumed: 0 new trials") != std::string::npos);
    CHECK(slurp(plan / "de-fx" / "8.json") == rec);

    // same name, different budget
    auto changed = args;
    changed[14] = "300";
    const Outcome clash = invoke(changed);
    CHECK(clash.code == 1);
    CHECK(clash.err.find("different plan") != std::string::npos);

    const Outcome plot = invoke({"plot", plan.string()});
    REQUIRE(plot.code == 0);
    CHECK(count(slurp(plan / "infeasible.svg"), "<path") == 3);
    CHECK(std::filesystem::exists(plan / "convergence.csv"));
    CHECK(std::filesystem::exists(plan / "column_profile_column.svg"));
    std::filesystem::remove_all(root);
}

TEST_CASE("plot draws one curve per cell") {
    const auto root = testing::scratch("cli-plot");
    const Outcome r = invoke({"run", "--problem", "sphere", "--dim", "3", "--strategy", "none", "--trials", "2", "--pop",
                           "5", "--max-fe", "50", "--out", root.string()});
    REQUIRE(r.code == 0);
    const Outcome plot = invoke({"plot", root.string()});
    REQUIRE(plot.code == 0);
    const std::string svg = slurp(root / "sphere-3_none" / "convergence.svg");
    CHECK(count(svg, "<path") == 2);
    CHECK(svg.find("pso-none") != std::string::npos);
    CHECK(svg.find("de-none") != std::string::npos);
    CHECK(invoke({"plot", (root / "missing").string()}).code == 1);
    std::filesystem::remove_all(root);
}

TEST_CASE("config errors exit 1 before any output") {
    const auto root = testing::scratch("cli-bad");
    auto doc = pinned_column();
    doc["members"][1][2] = 7;
    const auto path = write_config(root, "bad.json", doc);
    const Outcome r = invoke({"run", "--config", path.string(), "--out", (root / "results").string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("config error") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(root / "results"));

    CHECK(invoke({"run", "--algo", "ga", "--out", (root / "results").string()}).code == 1);
    CHECK(invoke({"run", "--problem", "frame99", "--out", (root / "results").string()}).code == 1);
    CHECK_FALSE(std::filesystem::exists(root / "results"));
    CHECK(invoke({"validate"}).code == 1);
    CHECK(invoke({"bogus"}).code != 0);
    std::filesystem::remove_all(root);
}

TEST_CASE("validate summarizes shipped frames") {
    const Outcome r = invoke({"validate", (testing::data_dir() / "frames" / "frame15.json").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("11 variables, 5 under functioning") != std::string::npos);
    CHECK(r.out.find("LRFD") != std::string::npos);
    const Outcome r24 = invoke({"validate", "--config", (testing::data_dir() / "frames" / "frame24.json").string()});
    CHECK(r24.out.find("20 variables, 8 under functioning") != std::string::npos);
}

TEST_CASE("overlapping rules are rejected") {
    const auto root = testing::scratch("cli-overlap");
    auto doc = pinned_column();
    doc["functioning"].push_back({{"name", "again"}, {"group_ids", {1, 0}}, {"heights_cm", {0.0, 300.0}}});
    const Outcome r = invoke({"validate", write_config(root, "overlap.json", doc).string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("overlap") != std::string::npos);
    std::filesystem::remove_all(root);
}

TEST_CASE("mechanisms are diagnosed") {
    const auto root = testing::scratch("cli-singular");
    const Outcome r = invoke({"validate", write_config(root, "pinned.json", pinned_column()).string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("node") != std::string::npos);
    auto fixed = pinned_column();
    fixed["supports"][0]["fix"] = {"ux", "uy", "rot"};
    CHECK(invoke({"validate", write_config(root, "fixed.json", fixed).string()}).code == 0);
    std::filesystem::remove_all(root);
}

TEST_CASE("interactions") {
    const auto root = testing::scratch("cli-inter");
    const Outcome r = invoke({"interactions", "--problem", "stepped-column", "--segments", "10", "--out", root.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("FE cost: 56 evaluations") != std::string::npos);
    CHECK(r.out.find("variable 1 interacts with 9 of 9 others") != std::string::npos);
    CHECK(std::filesystem::exists(root / "interactions.svg"));

    const Outcome s = invoke({"interactions", "--problem", "sphere", "--dim", "4", "--out", (root / "s").string()});
    REQUIRE(s.code == 0);
    CHECK(s.out.find("adjacency: empty (separable)") != std::string::npos);
    std::filesystem::remove_all(root);
}

TEST_CASE("unwritable output is a runtime error") {
    const auto root = testing::scratch("cli-unwritable");
    std::ofstream(root / "file") << "x";
    const Outcome r = invoke({"run", "--problem", "sphere", "--dim", "2", "--trials", "1", "--pop", "4", "--max-fe",
                           "8", "--strategy", "none", "--out", (root / "file" / "sub").string()});
    CHECK(r.code == 2);
    std::filesystem::remove_all(root);
}

TEST_CASE("sections") {
    const Outcome r = invoke({"sections", "W14"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("37 shapes") != std::string::npos);
    CHECK(invoke({"sections", "/nonexistent.csv"}).code != 0);
}
