#include <doctest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int status;
    std::string out;
};

// runs the CLI with stderr folded into stdout unless redirected by the caller
Run run(const std::string& args)
{
    const std::string cmd = std::string("\"") + MODCUP_CLI + "\" " + args;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("modcup_cli_" + name);
}

} // namespace

TEST_CASE("table reproduces the reference and passes --check")
{
    const auto path = scratch("table.csv");
    const auto r = run("table --threads 1 --no-timing --out " + path.string() + " --check " +
                       MODCUP_TABLE_REF + " 2>&1");
    CHECK(r.status == 0);
    const std::string csv = slurp(path);
    CHECK(csv.rfind("r1,r2,value,tail_estimate,seconds\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 14);
    CHECK(csv.find("-0.3,0.2,7.91") != std::string::npos);
    CHECK(csv.find(",0.000\n") != std::string::npos);
}

TEST_CASE("empty grid writes only the header")
{
    const auto r = run("table --cells \"\" 2>&1");
    CHECK(r.status == 0);
    CHECK(r.out == "r1,r2,value,tail_estimate,seconds\n");
}

TEST_CASE("table output is deterministic across runs and thread counts")
{
    const std::string cells = "--cells \"-0.3:0.2,-0.7:0.6\" --no-timing";
    const auto a = run("table --threads 1 " + cells);
    const auto b = run("table --threads 1 " + cells);
    const auto c = run("table --threads 2 " + cells);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
}

TEST_CASE("psi writes a JSON record")
{
    const auto r = run("psi --r1 -0.7 --r2 0.6 --mu1 0.942 --mu2 1.05 --mu3 0.008 --format json");
    CHECK(r.status == 0);
    CHECK(r.out.find("\"value_re\"") != std::string::npos);
    CHECK(r.out.find("\"value_im\"") != std::string::npos);
    CHECK(r.out.find("\"command\":\"psi\"") != std::string::npos);
}

TEST_CASE("coinvariants: a single nonzero row at r = 2, p = 0")
{
    const auto r = run("coinv --rmin 2 --rmax 8");
    CHECK(r.status == 0);
    std::istringstream lines(r.out);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "r,p,dim");
    int nonzero = 0;
    while (std::getline(lines, line)) {
        if (line.substr(line.rfind(',') + 1) != "0") {
            ++nonzero;
            CHECK(line == "2,0,1");
        }
    }
    CHECK(nonzero == 1);
}

TEST_CASE("exit codes")
{
    CHECK(run("table --tol 5 2>&1").status == 2);
    CHECK(run("frobnicate 2>&1").status == 2);
    CHECK(run("tri --r1 -0.7 2>&1").status == 2);
    CHECK(run("tri --r1 -0.7 --r2 2.5 2>&1").status == 2);
    const auto trunc = run("tri --r1 -0.7 --r2 0.6 --M 5 --tol 1e-12 2>&1");
    CHECK(trunc.status == 1);
    CHECK(trunc.out.find("\"error\"") != std::string::npos);
}

TEST_CASE("selftest runs a subset of the criteria")
{
    const auto r = run("selftest --criteria 6 8 9 2>&1");
    CHECK(r.status == 0);
    CHECK(r.out.find("CRITERION 6 PASS") != std::string::npos);
    CHECK(r.out.find("CRITERION 8 PASS") != std::string::npos);
    CHECK(r.out.find("CRITERION 9 PASS") != std::string::npos);
}
