#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "qmalab/generators.hpp"
#include "qmalab/io.hpp"

using namespace qmalab;
namespace fs = std::filesystem;

namespace {

const char* cli_path() { return QMALAB_CLI_PATH; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("qmalab_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("instance and state files round-trip with validation") {
    TempDir dir;
    auto gen = generate_one_bad_edge(5, 3, 7);
    io::save_instance(dir.file("inst.json"), gen.instance);
    auto back = io::load_instance(dir.file("inst.json"));
    REQUIRE(back.n_vertices == 5);
    REQUIRE(back.edges.size() == gen.instance.edges.size());
    for (size_t i = 0; i < back.edges.size(); ++i)
        REQUIRE(back.edges[i].allowed == gen.instance.edges[i].allowed);

    auto state = random_state(5, 3, 11, HaarPerRegister{});
    io::save_state(dir.file("state.json"), state);
    auto sback = io::load_state(dir.file("state.json"));
    for (int v = 0; v < 5; ++v)
        REQUIRE(std::abs(sback.vertex_amp[v] - state.vertex_amp[v]) < 1e-15);

    io::save_coloring(dir.file("col.json"), gen.coloring);
    auto cback = io::load_coloring(dir.file("col.json"));
    REQUIRE(cback.colors == gen.coloring.colors);
}

TEST_CASE("loaders reject malformed input with positional messages") {
    TempDir dir;
    io::atomic_write(dir.file("bad.json"),
                     R"({"n_vertices": 2, "alphabet_size": 2,
                         "edges": [{"u": 0, "v": 9, "allowed": [[1,1],[1,1]]}]})");
    REQUIRE_THROWS_WITH(io::load_instance(dir.file("bad.json")),
                        Catch::Matchers::ContainsSubstring("edges[0]"));

    io::atomic_write(dir.file("badrow.json"),
                     R"({"n_vertices": 2, "alphabet_size": 2,
                         "edges": [{"u": 0, "v": 1, "allowed": [[1,1],[1]]}]})");
    REQUIRE_THROWS_WITH(io::load_instance(dir.file("badrow.json")),
                        Catch::Matchers::ContainsSubstring("allowed[1]"));

    io::atomic_write(dir.file("badstate.json"),
                     R"({"n_vertices": 1, "alphabet_size": 1,
                         "vertex_amp": [[0.5, 0]], "color_amp": [[[1, 0]]]})");
    REQUIRE_THROWS_WITH(io::load_state(dir.file("badstate.json")),
                        Catch::Matchers::ContainsSubstring("not normalized"));
}

TEST_CASE("cli end to end") {
    TempDir dir;
    auto gen = generate_regular_gap_instance(6, 3, 2, 5, GapMode::PlantedSatisfiable);
    io::save_instance(dir.file("inst.json"), gen.instance);
    io::save_coloring(dir.file("col.json"), gen.reference);

    SECTION("honest then simulate: exact acceptance 1") {
        REQUIRE(run_cli("honest " + dir.file("inst.json") + " --coloring " + dir.file("col.json") +
                        " --kappa 2 --out-prefix " + dir.file("hp")) == 0);
        REQUIRE(fs::exists(dir.file("hp_0.json")));
        REQUIRE(fs::exists(dir.file("hp_1.json")));
        REQUIRE(fs::exists(dir.file("hp_manifest.json")));

        REQUIRE(run_cli("simulate " + dir.file("inst.json") + " --proofs " + dir.file("hp_0.json") +
                        " " + dir.file("hp_1.json") + " --protocol bt09 --out " +
                        dir.file("sim")) == 0);
        auto report = io::parse_json(slurp(dir.file("sim/report.json")), "report");
        REQUIRE(report["exact_acceptance"].get<double>() ==
                Catch::Approx(1.0).margin(1e-9));
        // manifest precedes outputs and carries input hashes
        auto man = io::parse_json(slurp(dir.file("sim/manifest.json")), "manifest");
        REQUIRE(man["command"] == "simulate");
        REQUIRE(man["inputs"].size() == 3);
    }

    SECTION("honest with the oracle coloring") {
        REQUIRE(run_cli("honest " + dir.file("inst.json") + " --best-oracle --kappa 3 " +
                        " --out-prefix " + dir.file("bo")) == 0);
        auto s = io::load_state(dir.file("bo_2.json"));
        REQUIRE(s.n_vertices == 6);
    }

    SECTION("missing proof file exits 2 naming the path") {
        REQUIRE(run_cli("simulate " + dir.file("inst.json") + " --proofs " +
                        dir.file("nope.json") + " " + dir.file("nope.json")) == 2);
    }

    SECTION("deterministic sampled runs are byte-identical") {
        REQUIRE(run_cli("honest " + dir.file("inst.json") + " --coloring " + dir.file("col.json") +
                        " --kappa 2 --out-prefix " + dir.file("hp")) == 0);
        std::string base = "simulate " + dir.file("inst.json") + " --proofs " +
                           dir.file("hp_0.json") + " " + dir.file("hp_1.json") +
                           " --samples 100000 --seed 7 --out " + dir.file("rep");
        REQUIRE(run_cli(base) == 0);
        std::string first = slurp(dir.file("rep/report.json"));
        std::string first_csv = slurp(dir.file("rep/report.csv"));
        fs::remove_all(dir.file("rep"));
        REQUIRE(run_cli(base) == 0);
        REQUIRE(slurp(dir.file("rep/report.json")) == first);
        REQUIRE(slurp(dir.file("rep/report.csv")) == first_csv);
    }

    SECTION("attack command") {
        REQUIRE(run_cli("attack " + dir.file("inst.json") +
                        " --restarts 2 --max-iters 10 --grad analytic --seed 3 --out " +
                        dir.file("atk")) == 0);
        auto res = io::parse_json(slurp(dir.file("atk/attack.json")), "attack");
        REQUIRE(res["best_acceptance"].get<double>() <= 1.0 + 1e-12);
        REQUIRE(fs::exists(dir.file("atk/trace.csv")));
    }

    SECTION("oracle budget refusal exits 3") {
        CspInstance big;
        big.n_vertices = 64;
        big.alphabet_size = 4;
        big.name = "big";
        for (int i = 0; i < 64; ++i) {
            DirectedEdge e;
            e.u = i;
            e.v = (i + 1) % 64;
            e.allowed.assign(16, 1);
            big.edges.push_back(e);
        }
        io::save_instance(dir.file("big.json"), big);
        REQUIRE(run_cli("honest " + dir.file("big.json") + " --best-oracle --out-prefix " +
                        dir.file("nope")) == 3);
    }

    SECTION("bounds and the scaling commands") {
        REQUIRE(run_cli("bounds --n 8 --k 3 --out " + dir.file("bounds")) == 0);
        auto j = io::parse_json(slurp(dir.file("bounds/bounds.json")), "bounds");
        REQUIRE(j["delta"]["exact"] == "1/26542080000");

        REQUIRE(run_cli("remark-bt09 --ns 8,16 --k 3 --out " + dir.file("rb")) == 0);
        auto sum = io::parse_json(slurp(dir.file("rb/summary.json")), "summary");
        REQUIRE(sum["pass"].get<bool>());

        REQUIRE(run_cli("remark-cd10 --n 64 --k 3 --kappas 4,8,16 --samples 20000 --seed 3 "
                        "--out " + dir.file("rc")) == 0);

        // the scaled-rule completeness check fails honestly at desk scale
        REQUIRE(run_cli("completeness --n 8 --k 3 --kappas 16,32,64 --z-rule scaled --out " +
                        dir.file("cm")) == 1);
        REQUIRE(run_cli("completeness --n 8 --k 3 --kappas 16,32,64 --z-rule paper-literal "
                        "--out " + dir.file("cm2")) == 0);
    }
}
