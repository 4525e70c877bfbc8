#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "osc/io.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace osc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / "osc_cli_tests";
    fs::create_directories(d);
    return d / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config file with overrides")
{
    const auto p = scratch("run.ini");
    std::ofstream(p) << "# surrogate constants\n[constants]\nC1 = 16\nC2 = 2\nkappa = 0.1\n[grid]\nN = 128\nL = 32\n"
                        "[tolerances]\nquadrature = 1e-12\n[run]\nseed = 42\n";
    const RunConfig c = load_config(p);
    CHECK(c.C1 == 16);
    CHECK(c.C2 == 2);
    CHECK(c.N == 128);
    CHECK(c.seed == 42);
    CHECK(c.tolerance("quadrature", 0.0) == 1e-12);
    CHECK(c.tolerance("missing", 3.0) == 3.0);

    std::ofstream(p) << "[constants]\nC1 = 13\n";
    CHECK_THROWS_AS(load_config(p), ConfigError);
    std::ofstream(p) << "[grid]\nN = 100\n";
    CHECK_THROWS_AS(load_config(p), ConfigError);
    std::ofstream(p) << "[grid]\nM = 100\n";
    CHECK_THROWS_AS(load_config(p), ConfigError);
    std::ofstream(p) << "[tolerances]\nfd = -1\n";
    CHECK_THROWS_AS(load_config(p), ConfigError);
}

TEST_CASE("config hash tracks content")
{
    RunConfig a, b;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("CSV metadata and determinism")
{
    RunConfig cfg;
    const auto p = scratch("a.csv"), q = scratch("b.csv");
    for (const auto& path : {p, q}) {
        CsvWriter w(path, cfg, {"x", "y"}, {{"note", "test"}});
        w.row(std::vector<double>{0.1, 1.0 / 3.0});
        CHECK_THROWS_AS(w.row(std::vector<double>{1.0}), std::invalid_argument);
    }
    const std::string text = slurp(p);
    CHECK(text == slurp(q));
    CHECK(text.rfind("# config_hash=" + config_hash(cfg) + "\n# seed=1\n", 0) == 0);
    CHECK(text.find("x,y\n0.10000000000000001,0.33333333333333331\n") != std::string::npos);
}

TEST_CASE("plots")
{
    const auto p = scratch("plot.svg");
    CHECK_THROWS_AS(emit_plot({}, std::nullopt, {}, p), std::invalid_argument);
    Series s{{2, 1}, {4, 0.5}};
    DecayFit f;
    f.slope = -1.0;
    emit_plot(s, f, {}, p);
    CHECK(fs::file_size(p) > 0);
    CHECK(slurp(p).find(slope_annotation(f)) != std::string::npos);
    CHECK(slope_annotation(f) == "slope = -1.0000");
}

TEST_CASE("grid files round trip")
{
    GridField f(8, 4.0);
    for (Eigen::Index i = 0; i < f.data.size(); ++i) f.data(i) = {double(i), -0.5 * i};
    const auto p = scratch("f.oplb");
    write_field(f, p);
    CHECK(fs::file_size(p) == 4 + 4 + 8 + 64 * 16);
    const GridField g = read_field(p);
    CHECK(g.nx == 8);
    CHECK(g.Lx == 4.0);
    CHECK(g.data == f.data);
    const std::string raw = slurp(p);
    CHECK(raw.substr(0, 4) == "OPLB");
    double first_im = 0.0;
    // Row-major: entry (0, 1) follows (0, 0).
    std::memcpy(&first_im, raw.data() + 16 + 16, 8);
    CHECK(first_im == f.data(0, 1).real());

    std::ofstream(p) << "nope";
    CHECK_THROWS(read_field(p));
}

TEST_CASE("output directory resolution")
{
    RunConfig c;
    c.output_dir = "here";
    CHECK(c.resolved_output_dir() == fs::path("here"));
}
