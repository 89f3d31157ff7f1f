#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mudk/cli.hpp"

namespace fs = std::filesystem;

namespace
{
char const* const uniform = R"({"family":"uniform","a":-1,"b":1})";

struct Run
{
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    std::ostringstream os;
    std::ostringstream err;
    int code = mudk::run_cli(std::move(args), os, err);
    return {code, os.str(), err.str()};
}

fs::path scratch(std::string const& name)
{
    fs::path dir = fs::path(MUDK_TEST_OUTPUT_DIR) / "cli";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(fs::path const& p)
{
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> data_lines(std::string const& text)
{
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
    {
        if (!line.empty() && line[0] != '#')
            lines.push_back(line);
    }
    return lines;
}
}  // namespace

TEST(Cli, BuildWritesCsvAndSvg)
{
    auto csv = scratch("u5.csv");
    auto svg = scratch("u5.svg");
    fs::remove(csv);
    fs::remove(svg);
    auto r = run({"build", "--dist", uniform, "--n", "5", "--points", "64", "--out",
                  csv.string(), "--svg", svg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_TRUE(fs::exists(csv));
    ASSERT_TRUE(fs::exists(svg));
    auto lines = data_lines(slurp(csv));
    ASSERT_FALSE(lines.empty());
    EXPECT_EQ(lines.front(), "t,x,y");
    EXPECT_EQ(lines.size() - 1, 2 * 64u);
    EXPECT_NE(slurp(csv).find("# mu-domain-kit v0.1.0, config hash "),
              std::string::npos);
    EXPECT_NE(slurp(svg).find("<path"), std::string::npos);
}

TEST(Cli, BuildCenteredBetaRange)
{
    auto r = run({"build", "--dist",
                  R"({"family":"beta","alpha":2,"beta":5,"center":true})", "--n",
                  "30", "--points", "256", "--out", "-"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = data_lines(r.out);
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        double x = std::stod(lines[i].substr(lines[i].find(',') + 1));
        EXPECT_GT(x, -2.0 / 7 - 1e-9);
        EXPECT_LT(x, 5.0 / 7 + 1e-9);
    }
}

TEST(Cli, RatesValues)
{
    auto r = run({"rates", "--dist", uniform, "--n-list", "5,10,15,30,200", "--out",
                  "-"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 6u);
    EXPECT_EQ(lines[0], "n,l1,bound,varpi");
    double const ns[] = {5, 10, 15, 30, 200};
    for (std::size_t i = 0; i < 5; ++i)
    {
        std::istringstream ss(lines[i + 1]);
        double n, l1, bound, varpi;
        char c;
        ss >> n >> c >> l1 >> c >> bound >> c >> varpi;
        EXPECT_EQ(n, ns[i]);
        EXPECT_NEAR(l1, 1 / n, 1e-8);
        EXPECT_NEAR(bound, 2 / n, 1e-15);
        EXPECT_EQ(varpi, 0);
    }
}

TEST(Cli, RatesAtomlessBetaHasNoCorrection)
{
    auto r = run({"rates", "--dist", R"({"family":"beta","alpha":2,"beta":5})",
                  "--out", "-"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 5u);
    for (std::size_t i = 1; i < lines.size(); ++i)
        EXPECT_EQ(lines[i].substr(lines[i].rfind(',') + 1), "0");
}

TEST(Cli, MapCoefficients)
{
    auto r = run({"map", "--dist", uniform, "--n", "200", "--coeffs", "4", "--out",
                  "-"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto lines = data_lines(r.out);
    ASSERT_EQ(lines.size(), 5u);
    double a1 = std::stod(lines[1].substr(2));
    EXPECT_NEAR(a1, -0.81057, 0.02);
}

TEST(Cli, SimulateAndCheck)
{
    auto samples = scratch("samples.csv");
    auto summary = scratch("summary.json");
    std::vector<std::string> args{"simulate", "--dist", uniform, "--n", "30",
                                  "--points", "512", "--walks", "400", "--step",
                                  "1e-3", "--seed", "9", "--out", samples.string(),
                                  "--summary", summary.string()};
    auto r = run(args);
    ASSERT_EQ(r.code, 0) << r.err;
    std::string const first = slurp(samples);
    auto j = mudk::Json::parse(slurp(summary));
    EXPECT_EQ(j.at("walks"), 400);
    EXPECT_EQ(j.at("truncated"), 0);
    EXPECT_LT(j.at("ks").get<double>(), 0.1);

    args.push_back("--threads");
    args.push_back("3");
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(samples), first);

    auto c = run({"check", "--dist", uniform, "--samples", samples.string()});
    ASSERT_EQ(c.code, 0) << c.err;
    auto k = mudk::Json::parse(c.out);
    EXPECT_EQ(k.at("samples"), 400);
    EXPECT_NEAR(k.at("ks").get<double>(), j.at("ks").get<double>(), 1e-15);
}

TEST(Cli, ConfigFileAndOverride)
{
    auto cfg = scratch("run.json");
    {
        std::ofstream os(cfg);
        os << R"({"dist": {"family":"uniform","a":-1,"b":1}, "n_list": [10],
                  "out": "-"})";
    }
    auto r = run({"rates", "--config", cfg.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream row(data_lines(r.out).at(1));
    double n, l1, bound, varpi;
    char c;
    row >> n >> c >> l1 >> c >> bound >> c >> varpi;
    EXPECT_EQ(n, 10);
    EXPECT_NEAR(l1, 0.1, 1e-12);
    EXPECT_EQ(bound, 0.2);

    auto o = run({"rates", "--config", cfg.string(), "--n-list", "20"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_EQ(data_lines(o.out).at(1).substr(0, 3), "20,");
    EXPECT_NE(r.out.substr(0, r.out.find('\n')), o.out.substr(0, o.out.find('\n')));
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"build", "--dist", R"({"family":"cauchy"})"}).code, 2);
    EXPECT_EQ(run({"build", "--dist", R"({"family":"uniform","a":1,"b":0})"}).code, 2);
    EXPECT_EQ(run({"build", "--dist", "{not json"}).code, 2);
    EXPECT_EQ(run({"build", "--dist", uniform, "--scheme", "spline"}).code, 2);
    EXPECT_EQ(run({"simulate", "--dist", uniform, "--walks", "0", "--out", "-",
                   "--summary", "-"})
                  .code,
              2);
    EXPECT_EQ(run({"build", "--dist", scratch("missing.json").string()}).code, 4);
    EXPECT_EQ(run({"build", "--dist", uniform, "--out",
                   scratch("no/such/dir/out.csv").string()})
                  .code,
              4);
    EXPECT_EQ(run({"--version"}).out, "0.1.0\n");
}

TEST(Cli, UnknownConfigKey)
{
    auto r = run({"rates", "--config", R"({"dist":{"family":"uniform","a":0,"b":1},"bogus":1})"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("bogus"), std::string::npos);
}

TEST(Config, HashIgnoresThreads)
{
    auto a = mudk::config_from_json(mudk::Json::parse(R"({"dist":{"family":"uniform","a":0,"b":1}})"));
    auto b = a;
    b.threads = 8;
    EXPECT_EQ(mudk::config_hash(a), mudk::config_hash(b));
    b.seed = 1;
    EXPECT_NE(mudk::config_hash(a), mudk::config_hash(b));
    EXPECT_EQ(mudk::config_hash(a).size(), 16u);
}

TEST(Config, DefaultTruncation)
{
    auto d = mudk::prepare_distribution(mudk::Json::parse(R"({"family":"exponential"})"));
    EXPECT_NEAR(d.support().b, 7, 1e-12);
    auto t = mudk::prepare_distribution(
        mudk::Json::parse(R"({"family":"exponential","truncate":3})"));
    EXPECT_NEAR(t.support().b, 3, 1e-12);
    auto m = mudk::prepare_distribution(mudk::Json::parse(
        R"({"family":"mixture","components":[
            {"weight":0.5,"dist":{"family":"uniform","a":-1,"b":1}},
            {"weight":0.5,"dist":{"family":"discrete","atoms":[[0,1]]}}]})"));
    EXPECT_NEAR(m.mass_at(0), 0.5, 1e-15);
}
