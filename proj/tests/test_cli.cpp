#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"

using namespace sawends;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SAWENDS_CLI_PATH;
const std::string kSpecs = SAWENDS_SPEC_DIR;

struct Run {
    int status;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch() {
    auto d = fs::temp_directory_path() / "sawends_cli_test";
    fs::create_directories(d);
    return d;
}

Run run(const std::string& args) {
    auto d = scratch();
    auto out = d / "stdout.txt", err = d / "stderr.txt";
    std::string cmd = kCli + " " + args + " > " + out.string() + " 2> " + err.string();
    int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string spec(const std::string& name) { return kSpecs + "/" + name; }

std::vector<std::string> data_lines(const std::string& csv) {
    std::vector<std::string> out;
    std::istringstream in(csv);
    for (std::string line; std::getline(in, line);)
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

}  // namespace

TEST(Cli, CountMatchesLibrary) {
    auto r = run("count --graph " + spec("square.json") + " --n-max 9 --workers 2");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(r.out.rfind("# schema sawends.count v1", 0), 0u);
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 11u);
    EXPECT_EQ(lines[0], "n,count");
    auto t = count_walks(build_square_lattice(), lattice_key(0, 0), 9);
    for (int n = 0; n <= 9; ++n) EXPECT_EQ(lines[n + 1], std::to_string(n) + "," + t[n].str());
}

TEST(Cli, CountSupOverRepresentativesAndJson) {
    auto out = scratch() / "count.json";
    auto r = run("count --graph " + spec("cylinder4_two_reps.json") + " --n-max 6 --format json --out " + out.string());
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = json::parse(slurp(out));
    EXPECT_EQ(j["schema_version"], kSchemaVersion);
    EXPECT_EQ(j["per_representative"].size(), 2u);
    EXPECT_EQ(j["counts"][6], count_walks(build_cylinder(4), lattice_key(0, 0), 6)[6].str());
    auto man = json::parse(slurp(out.string() + ".manifest.json"));
    EXPECT_EQ(man["version"], kArtifactVersion);
    EXPECT_EQ(man["config"]["n_max"], 6);
    EXPECT_EQ(man["graph_spec"]["width"], 4);
    EXPECT_NE(r.err.find("progress"), std::string::npos);
}

TEST(Cli, MuAndDisplacementParity) {
    auto r = run("mu --graph " + spec("hexagonal.json") + " --n-max 12 --format json");
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = json::parse(r.out);
    auto b = mu_bounds(count_walks(build_hexagonal_lattice(), lattice_key(0, 0), 12));
    EXPECT_EQ(j["upper"].get<double>(), b.upper);
    EXPECT_EQ(j["submultiplicativity_violations"], 0);

    auto d = run("displacement --graph " + spec("c3_c3.json") + " --n-max 8 --thresholds 1/8,1/2 --format json");
    ASSERT_EQ(d.status, 0) << d.err;
    auto jd = json::parse(d.out);
    auto fp = fixtures::c3_c3();
    auto st = displacement_stats(fp.oracle(), FreeProductGraph::root(), 8, {Rational(1, 8), Rational(1, 2)}, 1);
    EXPECT_EQ(jd["series"][7]["tail_counts"]["1/2"], st.tail_counts.at(Rational(1, 2)).str());
    EXPECT_EQ(jd["series"][7]["mean_square"], to_string(st.mean_square));
}

TEST(Cli, ValidateAndPatterns) {
    auto v = run("validate --graph " + spec("cylinder4.json") + " --cutset " + spec("cut_cylinder_column.json") +
                 " --radius 8");
    ASSERT_EQ(v.status, 0) << v.err;
    auto jv = json::parse(v.out);
    EXPECT_TRUE(jv["passed"].get<bool>());
    EXPECT_EQ(jv["measured_N"], 0);

    auto f = run("validate --graph " + spec("c3_c3.json") + " --cutset " + spec("cut_free_product_root.json"));
    ASSERT_EQ(f.status, 0) << f.err;
    EXPECT_TRUE(json::parse(f.out)["passed"].get<bool>());

    auto h = run("validate --graph " + spec("hnn_z4.json") + " --cutset " + spec("cut_hnn_s0.json") + " --radius 5");
    ASSERT_EQ(h.status, 0) << h.err;
    EXPECT_GE(json::parse(h.out)["boundary_components"].get<int>(), 2);

    auto p = run("patterns --graph " + spec("cylinder3.json") + " --cutset " + spec("cut_cylinder_column.json") +
                 " --n-max 8 --r 1 --m 2 --format json");
    ASSERT_EQ(p.status, 0) << p.err;
    auto jp = json::parse(p.out);
    auto g = build_cylinder(3);
    auto lib = count_restricted(g, lattice_key(0, 0), 8, cylinder_cutset(3), EventKind::e_tilde(2, 2), 1);
    EXPECT_EQ(jp["restricted"]["EkTilde_k2"]["counts"][8], lib.restricted_table[8].str());
}

TEST(Cli, SurgeryPlanParity) {
    auto r = run("surgery-demo --graph " + spec("cylinder3.json") + " --cutset " + spec("cut_cylinder_column.json") +
                 " --plan " + spec("plan_cylinder3.json"));
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = json::parse(r.out);
    auto plan = load_plan_spec(read_json_file(spec("plan_cylinder3.json")));
    auto res = iterated_surgery(build_cylinder(3), plan, cylinder_cutset(3));
    EXPECT_EQ(j["after"], walk_to_json(res.walk));
    EXPECT_EQ(j["steps"].size(), 2u);

    auto demo = run("surgery-demo --graph " + spec("c3_c3.json") + " --cutset " + spec("cut_free_product_root.json") +
                    " --n-max 10 --seed 4");
    ASSERT_EQ(demo.status, 0) << demo.err;
    EXPECT_TRUE(json::parse(demo.out).contains("connector"));
}

TEST(Cli, SampleParityAndManifestRoundTrip) {
    auto out = scratch() / "sample.csv";
    auto r = run("sample --graph " + spec("cylinder3.json") + " --n-values 6,10 --alpha 1/4 --samples 300 --seed 17 "
                 "--workers 3 --out " + out.string());
    ASSERT_EQ(r.status, 0) << r.err;
    auto first = slurp(out);
    auto lib = estimate_speed(build_cylinder(3), lattice_key(0, 0), {6, 10}, Rational(1, 4), 300, 17);
    auto lines = data_lines(first);
    ASSERT_EQ(lines.size(), 3u);
    for (int i = 0; i < 2; ++i) {
        std::string prefix = std::to_string(lib[i].n) + ",300," + std::to_string(lib[i].accepted) + "," +
                             std::to_string(lib[i].failures) + "," + std::to_string(lib[i].hits) + ",";
        EXPECT_EQ(lines[i + 1].rfind(prefix, 0), 0u) << lines[i + 1];
    }

    // rerun from the manifest alone
    auto man = json::parse(slurp(out.string() + ".manifest.json"));
    auto& c = man["config"];
    std::string nvals;
    for (auto& n : c["n_values"]) nvals += (nvals.empty() ? "" : ",") + std::to_string(n.get<int>());
    auto again = scratch() / "sample_again.csv";
    auto r2 = run(c["command"].get<std::string>() + " --graph " + c["graph"].get<std::string>() + " --n-values " + nvals +
                  " --alpha " + c["alpha"].get<std::string>() + " --samples " + std::to_string(c["samples"].get<int>()) +
                  " --seed " + std::to_string(c["seed"].get<std::uint64_t>()) + " --workers 1 --out " + again.string());
    ASSERT_EQ(r2.status, 0) << r2.err;
    EXPECT_EQ(slurp(again), first);
}

TEST(Cli, ErrorsAndExitCodes) {
    auto missing = run("count --graph /nonexistent/spec.json");
    EXPECT_EQ(missing.status, 2);
    EXPECT_NE(missing.err.find("\"SpecNotFound\""), std::string::npos);

    auto width = run("count --graph " + spec("bad_width.json"));
    EXPECT_EQ(width.status, 2);
    EXPECT_NE(width.err.find("\"SpecInvalid\""), std::string::npos);

    auto syntax = run("count --graph " + spec("bad_syntax.json"));
    EXPECT_EQ(syntax.status, 2);
    EXPECT_NE(syntax.err.find("\"SpecInvalid\""), std::string::npos);

    auto usage = run("frobnicate");
    EXPECT_EQ(usage.status, 2);
    EXPECT_NE(usage.err.find("\"UsageError\""), std::string::npos);

    auto nocut = run("patterns --graph " + spec("cylinder3.json"));
    EXPECT_EQ(nocut.status, 2);

    auto alpha = run("sample --graph " + spec("cylinder3.json") + " --alpha 2");
    EXPECT_EQ(alpha.status, 2);
    EXPECT_NE(alpha.err.find("\"InvalidParameter\""), std::string::npos);

    auto wrongcut = run("validate --graph " + spec("square.json") + " --cutset " + spec("cut_cylinder_column.json"));
    EXPECT_EQ(wrongcut.status, 2);

    auto fmt = run("count --graph " + spec("square.json") + " --format xml");
    EXPECT_EQ(fmt.status, 2);
}
