#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rqsl/cli/app.hpp"
#include "rqsl/cli/output.hpp"
#include "rqsl/cli/params.hpp"
#include "rqsl/cli/selfcheck.hpp"
#include "rqsl/cli/sweep.hpp"
#include "rqsl/perturbation.hpp"
#include "rqsl/qsl_bounds.hpp"

using namespace rqsl::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rqsl_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
    std::ostringstream err;
    const int rc = run_subcommand(args, err);
    if (err_text) *err_text = err.str();
    return rc;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) out.push_back(f);
    return out;
}

std::string config_error(const std::string& text) {
    Settings s;
    try {
        apply_config_text(s, text, "test.ini");
    } catch (const ConfigError& e) {
        return std::string(e.what()) + " @" + std::to_string(e.line());
    }
    return "";
}

}  // namespace

TEST_CASE("config parsing") {
    Settings defaults;
    Settings s;
    apply_config_text(s, "", "empty.ini");
    CHECK(s.echo() == defaults.echo());

    apply_config_text(s, "# comment\n[qkd]\ntransmissivity = 0.25  # trailing\n\n[run]\nseed=7\n", "a.ini");
    CHECK(s.real("qkd.transmissivity") == 0.25);
    CHECK(s.integer("run.seed") == 7);

    const std::string unknown = config_error("[qkd]\nv_a = 3\nbogus = 1\n");
    CHECK(unknown.find("bogus") != std::string::npos);
    CHECK(unknown.find("line 3") != std::string::npos);
    CHECK(unknown.find("@3") != std::string::npos);

    const std::string range = config_error("[qkd]\ntransmissivity = 1.5\n");
    CHECK(range.find("qkd.transmissivity") != std::string::npos);
    CHECK(range.find("out of range") != std::string::npos);
    CHECK(range.find("line 2") != std::string::npos);

    CHECK(config_error("[qkd]\nv_a = four\n").find("expected a real number") != std::string::npos);
    CHECK(config_error("[nowhere]\n").find("unknown section") != std::string::npos);
    CHECK(config_error("v_a = 1\n").find("outside") != std::string::npos);
    CHECK(config_error("[qkd]\ndetection = both\n").find("homodyne|heterodyne") != std::string::npos);
    CHECK(config_error("[run]\nthreads = 2.5\n").find("integer") != std::string::npos);
    CHECK_THROWS_AS(apply_config_file(s, "/nonexistent/rqsl.ini"), ConfigError);
}

TEST_CASE("axis parsing and grids") {
    const Axis a = parse_axis("t:0.05:6.3:0.05");
    CHECK(a.count() == 126);
    CHECK(a.value(125) == doctest::Approx(6.3));
    CHECK(parse_axis("epsilon:0:0.08:0.08").count() == 2);
    CHECK_THROWS_AS(parse_axis("t:1:0:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_axis("t:0:1:0"), ConfigError);
    CHECK_THROWS_AS(parse_axis("t:0:1"), ConfigError);
    CHECK_THROWS_AS(parse_axis("t:0:x:1"), ConfigError);

    Settings s;
    s.set("sweep.model", "qsl_squeezed");
    s.set("sweep.axis1", "alpha0_sq:0:1:0.5");
    CHECK_THROWS_AS(grid_from(s), ConfigError);
    s.set("sweep.axis1", "r:0.1:0.2:0.1");
    s.set("sweep.axis2", "r:0.1:0.2:0.1");
    CHECK_THROWS_AS(grid_from(s), ConfigError);
}

TEST_CASE("qsl subcommand passes bound values through") {
    TempDir dir;
    const fs::path out = dir.path / "q.csv";
    REQUIRE(run({"qsl", "--state", "coherent", "--alpha0", "1.0", "--t", "3.14159", "--epsilon", "0", "--out",
                 out.string()}) == kExitOk);
    const auto rows = lines(slurp(out));
    REQUIRE(rows.size() == 2);
    const auto header = split(rows[0]);
    const auto values = split(rows[1]);
    const auto col = std::find(header.begin(), header.end(), "t_mt0") - header.begin();
    REQUIRE(col < static_cast<long>(header.size()));
    double v = 0;
    std::from_chars(values[col].data(), values[col].data() + values[col].size(), v);
    CHECK(v == rqsl::qsl::mt_coherent(1.0, 3.14159, 0.0).zeroth);
}

TEST_CASE("trap preset emits JSON with the derived numbers") {
    TempDir dir;
    const fs::path out = dir.path / "trap.json";
    REQUIRE(run({"trap", "--preset", "hanneke", "--out", out.string()}) == kExitOk);
    const auto j = nlohmann::json::parse(slurp(out));
    REQUIRE(j.is_array());
    CHECK(std::abs(j[0]["epsilon_from_trap"].get<double>() / 1.5e-10 - 1) < 0.01);
    CHECK(std::abs(j[0]["crossover_closed"].get<double>() / 870.0 - 1) < 0.02);
}

TEST_CASE("figure presets regenerate their grids") {
    TempDir dir;
    const fs::path f1 = dir.path / "fig1.csv";
    REQUIRE(run({"sweep", "--preset", "fig1", "--out", f1.string()}) == kExitOk);
    const auto rows = lines(slurp(f1));
    CHECK(rows[0] == "t,alpha0_sq,epsilon,t_mt,t_ml,t_qsl,near_revival");
    CHECK(rows.size() == 1 + 2 * 30 * 126);
    std::set<std::string> eps;
    for (std::size_t i = 1; i < rows.size(); ++i) eps.insert(split(rows[i])[2]);
    CHECK(eps == std::set<std::string>{"0", "0.08"});

    const fs::path f2 = dir.path / "fig2.csv";
    REQUIRE(run({"sweep", "--preset", "fig2", "--out", f2.string()}) == kExitOk);
    CHECK(lines(slurp(f2)).size() == 1 + 8 * 30);

    const fs::path f4 = dir.path / "fig4.json";
    REQUIRE(run({"sweep", "--preset", "fig4", "--format", "json", "--out", f4.string()}) == kExitOk);
    const auto j = nlohmann::json::parse(slurp(f4));
    CHECK(j.size() == 4u * 19u * 31u);
    for (const auto& row : j) CHECK(row["sf_db"].get<double>() >= row["sf_db_eps0"].get<double>());
}

TEST_CASE("output is deterministic across runs and thread counts") {
    TempDir dir;
    const fs::path a = dir.path / "a.csv", b = dir.path / "b.csv";
    REQUIRE(run({"sweep", "--preset", "fig1", "--threads", "1", "--out", a.string()}) == kExitOk);
    REQUIRE(run({"sweep", "--preset", "fig1", "--threads", "4", "--out", b.string()}) == kExitOk);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find('\r') == std::string::npos);
}

TEST_CASE("CSV numbers round-trip exactly") {
    const double x = 0.1 + 0.2;
    Table t{{"x"}, {}};
    t.add_row({x});
    const auto rows = lines(to_csv(t));
    double back = 0;
    std::from_chars(rows[1].data(), rows[1].data() + rows[1].size(), back);
    CHECK(back == x);
    Table q{{"name"}, {}};
    q.add_row({std::string("a,b")});
    CHECK(lines(to_csv(q))[1] == "\"a,b\"");
}

TEST_CASE("precedence: defaults < preset < config < flags") {
    TempDir dir;
    const fs::path cfg = dir.path / "c.ini";
    write_file(cfg, "[qsl]\nepsilon = 0.01\nt = 2\n");
    const fs::path out = dir.path / "o.csv";
    REQUIRE(run({"sweep", "--preset", "fig2", "--config", cfg.string(), "--qsl.t", "9", "--axis2", "",
                 "--out", out.string()}) == kExitOk);
    const auto rows = lines(slurp(out));
    CHECK(rows.size() == 1 + 8);
    const auto first = split(rows[1]);
    CHECK(first[0] == "9");     // the flag overrides the config file
    CHECK(first[2] == "0.01");  // config epsilon overrides the preset
}

TEST_CASE("exit codes and error reporting") {
    TempDir dir;
    std::string err;
    CHECK(run({"qsl", "--bogus", "1"}, &err) == kExitUsage);
    CHECK(run({"qsl", "--config", (dir.path / "missing.ini").string()}, &err) == kExitUsage);
    CHECK(err.find("missing.ini") != std::string::npos);
    CHECK(run({"qkd", "--transmissivity", "1.5"}, &err) == kExitUsage);
    CHECK(err.find("qkd.transmissivity") != std::string::npos);
    CHECK(run({"sweep", "--preset", "nope"}, &err) == kExitUsage);
    CHECK(run({}, &err) == kExitUsage);
    CHECK(run({"frobnicate"}, &err) == kExitUsage);

    const fs::path bad_cfg = dir.path / "bad.ini";
    write_file(bad_cfg, "[qkd]\n\nunknown_key = 3\n");
    CHECK(run({"qkd", "--config", bad_cfg.string()}, &err) == kExitUsage);
    CHECK(err.find("unknown_key") != std::string::npos);
    CHECK(err.find("line 3") != std::string::npos);

    // Validation failures leave no output file behind.
    const fs::path out = dir.path / "fail.csv";
    CHECK(run({"qsl", "--alpha0", "0", "--out", out.string()}, &err) == kExitFailure);
    CHECK_FALSE(fs::exists(out));
    CHECK(run({"qkd", "--detection", "heterodyne", "--out", out.string()}, &err) == kExitFailure);
    CHECK_FALSE(fs::exists(out));
    for (const auto& e : fs::directory_iterator(dir.path)) CHECK(e.path().filename().string().find(".tmp") == std::string::npos);

    // An unwritable destination is reported without leaving a temporary file.
    CHECK(run({"qsl", "--out", (dir.path / "no_dir" / "x.csv").string()}, &err) == kExitFailure);
    for (const auto& e : fs::directory_iterator(dir.path)) CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
}

TEST_CASE("the tool binary returns the documented exit codes") {
    const int usage = std::system(RQSL_TOOL_PATH " qsl --bogus 1 >/dev/null 2>&1");
    CHECK(WEXITSTATUS(usage) == 2);
    const int ok = std::system(RQSL_TOOL_PATH " qsl --alpha0 1 --t 1 >/dev/null 2>&1");
    CHECK(WEXITSTATUS(ok) == 0);
    const int fail = std::system(RQSL_TOOL_PATH " metrology --alpha0 0 >/dev/null 2>&1");
    CHECK(WEXITSTATUS(fail) == 1);
}

TEST_CASE("selfcheck report") {
    Settings s;
    SelfcheckOptions opt;
    opt.mc_shots = 200000;
    const RunReport base = selfcheck(s, opt);
    CHECK(base.all_passed());
    CHECK(base.version == kToolVersion);
    CHECK(base.config == s.echo());

    std::set<std::string> names;
    for (const auto& c : base.checks) CHECK(names.insert(c.name).second);

    for (const char* id : {"level_spacing", "shot_noise_at_1s", "crossover_consistency", "ml_normalization"}) {
        const Discrepancy* d = base.find_discrepancy(id);
        REQUIRE(d != nullptr);
        CHECK(d->values.size() >= 2);
    }
    const Discrepancy* sn = base.find_discrepancy("shot_noise_at_1s");
    CHECK(sn->values[0].second == doctest::Approx(1.678e-22).epsilon(1e-3));
    CHECK(sn->values[1].second == 5.3e-22);

    SUBCASE("seed change only moves Monte-Carlo checks") {
        SelfcheckOptions other = opt;
        other.seed = 99;
        const RunReport moved = selfcheck(s, other);
        REQUIRE(moved.checks.size() == base.checks.size());
        int mc = 0;
        for (std::size_t i = 0; i < base.checks.size(); ++i) {
            if (base.checks[i].monte_carlo) {
                ++mc;
                continue;
            }
            CHECK(moved.checks[i].measured == base.checks[i].measured);
        }
        CHECK(mc == 2);
        CHECK(moved.find("homodyne.monte_carlo_mean")->measured != base.find("homodyne.monte_carlo_mean")->measured);
    }

    SUBCASE("a sign flip in the first-order energy fails the order check") {
        SelfcheckOptions mutated = opt;
        mutated.energy_model = [](int n, double eps) {
            const auto l = rqsl::perturbation::level(n);
            return l.e0 + eps * l.e1;
        };
        const RunReport bad = selfcheck(s, mutated);
        CHECK_FALSE(bad.find("spectrum.energy_order")->passed);
        CHECK_FALSE(bad.all_passed());
    }

    const auto j = base.to_json();
    CHECK(j["checks"].size() == base.checks.size());
    CHECK(j["discrepancies"][0].contains("values"));
}
