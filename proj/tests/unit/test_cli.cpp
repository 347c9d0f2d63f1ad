#include "generators.hpp"
#include "process.hpp"

#include <doctest.h>

#include <filesystem>

#include <unistd.h>

using namespace pulseir;
using pulseir::testing::RunResult;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    Scratch()
    {
        dir = fs::temp_directory_path() / ("pulseirc_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path dir;
};

Scratch &scratch()
{
    static Scratch s;
    return s;
}

std::string corpus(const std::string &name)
{
    return pulseir::testing::shell_quote((fs::path(PULSEIR_CORPUS_DIR) / name).string());
}

RunResult cli(const std::string &args) { return pulseir::testing::run_program(PULSEIRC_PATH, args, scratch().dir); }

std::size_t lines(const std::string &text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

} // namespace

TEST_CASE("render the 0.3 us sine")
{
    RunResult r = cli("render --rate 1e9 " + corpus("sine_0p3us.json"));
    REQUIRE(r.status == 0);
    CHECK(lines(r.out) == 301);
    CHECK(r.out.rfind("index,time_s,value\n", 0) == 0);
    CHECK(r.out.find("\n25,2.5e-08,1\n") != std::string::npos);
}

TEST_CASE("compile to dds")
{
    RunResult r = cli("compile --target dds " + corpus("sine_zero_sequence.json"));
    REQUIRE(r.status == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '{') == 2);
    CHECK(r.out.find("\"frequency_hz\": 1000000.0") != std::string::npos);
    CHECK(r.out.find("\"duration_s\": 5e-07") != std::string::npos);
}

TEST_CASE("compile to samples matches render")
{
    RunResult a = cli("compile --target samples " + corpus("sine_0p3us.json"));
    RunResult b = cli("render " + corpus("sine_0p3us.json"));
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("validate the overflowing schedule")
{
    RunResult bad = cli("validate --bind d=80e-9 " + corpus("overflow_schedule.json"));
    CHECK(bad.status != 0);
    CHECK(lines(bad.err) == 1);
    CHECK(bad.err.find("violation:") == 0);
    CHECK(bad.err.find("[channel drive.a]") != std::string::npos);
    CHECK(bad.err.find("Zero at 1 has negative duration") != std::string::npos);

    RunResult good = cli("validate --bind d=40e-9 " + corpus("overflow_schedule.json"));
    CHECK(good.status == 0);
    CHECK(good.err.empty());

    RunResult unbound = cli("validate " + corpus("overflow_schedule.json"));
    CHECK(unbound.status != 0);
    CHECK(unbound.err.find("error:") != std::string::npos);
}

TEST_CASE("schedule outputs per channel")
{
    RunResult r = cli("render --bind d=40e-9 " + corpus("overflow_schedule.json"));
    REQUIRE(r.status == 0);
    CHECK(r.out.find("# channel drive.a\n") == 0);
    CHECK(r.out.find("# channel probe.b\n") != std::string::npos);

    fs::path out = scratch().dir / "sched.csv";
    RunResult f = cli("render --bind d=40e-9 --out " + pulseir::testing::shell_quote(out.string()) + " " +
                      corpus("overflow_schedule.json"));
    REQUIRE(f.status == 0);
    CHECK(fs::exists(scratch().dir / "sched.drive.a.csv"));
    CHECK(fs::exists(scratch().dir / "sched.probe.b.csv"));
    CHECK(lines(pulseir::testing::read_file(scratch().dir / "sched.drive.a.csv")) == 51);
}

TEST_CASE("dot output")
{
    RunResult r = cli("dot " + corpus("foo_sum.json"));
    REQUIRE(r.status == 0);
    CHECK(r.out.rfind("digraph pulse {", 0) == 0);
    CHECK(r.out.find("Var(foo)") != std::string::npos);

    RunResult bound = cli("dot --bind foo=3 --passes substitute,fold " + corpus("foo_sum.json"));
    REQUIRE(bound.status == 0);
    CHECK(bound.out.find("Num(5)") != std::string::npos);

    fs::path dot = scratch().dir / "side.dot";
    RunResult side = cli("render --bind foo=1 --dot " + pulseir::testing::shell_quote(dot.string()) + " " +
                         corpus("foo_sum.json"));
    REQUIRE(side.status == 0);
    CHECK(pulseir::testing::read_file(dot).rfind("digraph", 0) == 0);
}

TEST_CASE("unsupported dds shapes fail cleanly")
{
    RunResult r = cli("compile --target dds " + corpus("modulation.json"));
    CHECK(r.status != 0);
    CHECK(r.err.find("error:") == 0);
}

TEST_CASE("argument errors")
{
    CHECK(cli("render").status != 0);
    CHECK(cli("compile " + corpus("sine_0p3us.json")).status != 0);
    CHECK(cli("compile --target awg " + corpus("sine_0p3us.json")).status != 0);
    CHECK(cli("render --rate -1 " + corpus("sine_0p3us.json")).status != 0);
    CHECK(cli("render --bind x " + corpus("sine_0p3us.json")).status != 0);
    CHECK(cli("render --passes bogus " + corpus("sine_0p3us.json")).status != 0);
    CHECK(cli("render /nonexistent.json").status != 0);
    RunResult v = cli("--version");
    CHECK(v.status == 0);
    CHECK(v.out.find("schema version 1") != std::string::npos);
}
