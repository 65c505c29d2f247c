#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string& args)
{
    const std::string cmd = std::string(HAWKES_ASY_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (const std::size_t n = std::fread(buf.data(), 1, buf.size(), p))
        out.append(buf.data(), n);
    const int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path d = fs::temp_directory_path() / ("hawkes_asy_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    return d;
}

} // namespace

TEST_CASE("moments for the fractional kernel")
{
    const Run r = run(R"(moments --kernel '{"family":"MittagLeffler","params":{"alpha":0.5,"beta":1}}' --mu0 1 --horizon 10 --step 0.005)");
    REQUIRE(r.status == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,mean,variance,source,regime_case");
    int exact_rows = 0;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string t, mean, var, source;
        std::getline(row, t, ',');
        std::getline(row, mean, ',');
        std::getline(row, var, ',');
        std::getline(row, source, ',');
        if (source != "Exact")
            continue;
        ++exact_rows;
        const double tt = std::stod(t);
        if (tt >= 1.0)
            CHECK(std::stod(mean) == doctest::Approx(std::pow(tt, 1.5) / std::tgamma(2.5) + tt).epsilon(1e-3));
    }
    CHECK(exact_rows == 2000);
}

TEST_CASE("simulate with the zero kernel")
{
    const Run r = run(R"(simulate --kernel '{"family":"Zero"}' --mu0 1 --horizon 100 --paths 1000 --seed 42)");
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(std::fabs(j[0]["mean"].get<double>() - 100.0) < 4.0 * j[0]["mean_se"].get<double>());
    CHECK(j[0]["seed"] == 42);
    CHECK(j[0]["n_paths"] == 1000);
}

TEST_CASE("regvar-check")
{
    const Run ok = run("regvar-check --alpha 0.5 --rho -0.2 --family power-perturbed");
    REQUIRE(ok.status == 0);
    CHECK(nlohmann::json::parse(ok.out)["pass"] == true);
    // amplitude so large that the pre-limit is far from its limit
    const Run bad = run("regvar-check --alpha 0.5 --rho -0.05 --amplitude 50");
    CHECK(bad.status == 1);
    CHECK(nlohmann::json::parse(bad.out)["pass"] == false);
}

TEST_CASE("manifest replays to identical outputs")
{
    const fs::path a = scratch("a"), b = scratch("b");
    const std::string kernel = R"('{"family":"Exponential","params":{"m":0.6,"beta":2}}')";
    REQUIRE(run("simulate --kernel " + kernel + " --horizon 20 --paths 300 --seed 9 --checkpoints 5,10,20 --output " +
                a.string())
                .status == 0);
    REQUIRE(fs::exists(a / "manifest.json"));
    const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    CHECK(m["command"] == "simulate");
    CHECK(m.contains("version"));
    CHECK(m["config"]["seed"] == 9);
    REQUIRE(run("simulate --config " + (a / "manifest.json").string() + " --workers 3 --output " + b.string()).status ==
            0);
    CHECK(slurp(a / "moments.json") == slurp(b / "moments.json"));

    for (const char* cmd : {"resolvent", "moments"}) {
        const fs::path c = scratch(std::string(cmd) + "1"), d = scratch(std::string(cmd) + "2");
        REQUIRE(run(std::string(cmd) + " --kernel " + kernel + " --horizon 5 --step 0.05 --output " + c.string())
                    .status == 0);
        REQUIRE(run(std::string(cmd) + " --config " + (c / "manifest.json").string() + " --output " + d.string())
                    .status == 0);
        const std::string file = std::string(cmd) == "resolvent" ? "resolvent.csv" : "moments.csv";
        CHECK(slurp(c / file) == slurp(d / file));
        CHECK(slurp(c / "manifest.json") == slurp(d / "manifest.json"));
    }
}

TEST_CASE("flags override the config file")
{
    const fs::path d = scratch("cfg");
    fs::create_directories(d);
    std::ofstream(d / "cfg.json") << R"({"kernel":{"family":"Zero"},"horizon":50,"paths":200,"seed":1})";
    const Run r = run("simulate --config " + (d / "cfg.json").string() + " --horizon 10");
    REQUIRE(r.status == 0);
    CHECK(nlohmann::json::parse(r.out)[0]["checkpoint"] == 10.0);
    std::ofstream(d / "bad.json") << R"({"kernel":{"family":"Zero"},"colour":"red"})";
    CHECK(run("simulate --config " + (d / "bad.json").string()).status == 2);
}

TEST_CASE("exit codes")
{
    CHECK(run("").status == 2);
    CHECK(run("frobnicate").status == 2);
    CHECK(run("simulate --no-such-flag 1").status == 2);
    CHECK(run(R"(simulate --kernel '{"family":"Exponential","params":{"m":1.5}}')").status == 2);
    CHECK(run(R"(resolvent --kernel '{"family":"Exponential"}' --horizon 1 --step 0.3)").status == 2);
    CHECK(run("resolvent --kernel '{oops'").status == 2);
    CHECK(run("moments --kernel '{\"family\":\"Zero\"}' --format xml").status == 2);
    CHECK(run("validate --only 3").status == 0);
    CHECK(run("validate --only 6").status == 1);
}

TEST_CASE("resolvent CSV and JSON")
{
    const Run csv = run(R"(resolvent --kernel '{"family":"Exponential","params":{"m":0.5,"beta":1}}' --horizon 1 --step 0.25)");
    REQUIRE(csv.status == 0);
    CHECK(csv.out.rfind("t,R,IR,IR2\n", 0) == 0);
    const Run js = run(
        R"(resolvent --kernel '{"family":"Exponential","params":{"m":0.5,"beta":1}}' --horizon 1 --step 0.25 --format json)");
    REQUIRE(js.status == 0);
    CHECK(nlohmann::json::parse(js.out)["rows"].size() == 4);
}

TEST_CASE("workers from the environment")
{
    const fs::path d = scratch("env");
    const std::string cmd = R"(simulate --kernel '{"family":"Zero"}' --horizon 5 --paths 10 --output )" + d.string();
    ::setenv("HAWKES_ASY_WORKERS", "2", 1);
    REQUIRE(run(cmd).status == 0);
    CHECK(nlohmann::json::parse(slurp(d / "manifest.json"))["config"]["workers"] == 2);
    ::setenv("HAWKES_ASY_WORKERS", "many", 1);
    CHECK(run(cmd).status == 2);
    ::unsetenv("HAWKES_ASY_WORKERS");
}
