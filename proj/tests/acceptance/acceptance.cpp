// Acceptance checks, one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails.
#include "generators.hpp"
#include "process.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <set>

#include <unistd.h>

using namespace pulseir;
using namespace pulseir::testing;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Failure {
    std::string what;
};

void require(bool ok, const std::string &what)
{
    if (!ok)
        throw Failure{what};
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// 1. Duration algebra against the exact oracle.
std::string duration_oracle()
{
    auto start = Clock::now();
    GraphGen gen(20261019);
    int bounded = 0;
    for (int i = 0; i < 1000; ++i) {
        Waveform w = gen.any_waveform(5);
        require(depth_of(w.node()) <= 8, "graph " + std::to_string(i) + " deeper than 8");
        auto want = oracle_duration(w.node());
        Duration got = duration_expr(w);
        require(got.is_unbounded() == !want.has_value(), "boundedness differs on graph " + std::to_string(i));
        if (want) {
            ++bounded;
            require(resolve_scalar(got.expr()) == to_double(*want), "value differs on graph " + std::to_string(i));
        }
    }
    double elapsed = seconds_since(start);
    require(elapsed < 5.0, "took " + fmt(elapsed) + " s");
    return "1000 graphs (" + std::to_string(bounded) + " bounded), exact, " + fmt(elapsed) + " s";
}

// 2. Continuous vs absolute phase mode.
std::string phase_modes()
{
    Waveform clk = clock(10e6, 0.0);
    Waveform cont = sequence({sine(1.0, 10e6, 0.0, 0.15e-6, clk), sine(1.0, 10e6, 0.0, 0.15e-6, clk)});
    Waveform single = sine(1.0, 10e6, 0.0, 0.3e-6);
    auto a = render(cont, 1e9).values;
    auto b = render(single, 1e9).values;
    require(a.size() == 300 && b.size() == 300, "sample count");
    double diff = max_abs_diff(a, b);
    require(diff <= 1e-12, "continuous differs by " + fmt(diff));

    Waveform abs = sequence({sine(1.0, 10e6, 0.0, 0.15e-6), sine(1.0, 10e6, 0.0, 0.15e-6)});
    auto c = render(abs, 1e9).values;
    require(c[150] == 0.0, "absolute second segment starts at " + fmt(c[150]));
    for (double t0 : {0.0, 7e-9, 1.23e-6}) {
        auto shifted = render(abs, 1e9, t0).values;
        require(shifted[150] == 0.0, "absolute start depends on t0");
    }
    // Past the boundary the absolute half restarts the sine.
    require(std::abs(c[175] - std::sin(2 * kPi * 10e6 * 25e-9)) < 1e-12, "absolute restart shape");
    require(std::abs(a[175] - std::sin(2 * kPi * 10e6 * 175e-9)) < 1e-12, "continuous shape");
    return "continuous max diff " + fmt(diff) + ", absolute restarts at 0";
}

// 3. FM/PM expansion.
std::string modulation_expansion()
{
    GraphGen gen(3003);
    double worst = 0.0;
    int fm = 0;
    for (int i = 0; i < 200; ++i) {
        Waveform w = gen.modulated_sine();
        fm += w.kind() == Kind::SineFM;
        Waveform e(expand_modulation(w.node()));
        require(e.kind() == Kind::Sine, "expansion is not a Sine");
        worst = std::max(worst, max_abs_diff(render(w, 1e9).values, render(e, 1e9).values));
    }
    require(worst <= 1e-9, "max diff " + fmt(worst));
    return "200 nodes (" + std::to_string(fm) + " FM), max diff " + fmt(worst);
}

// 4. Product of a triangle-modulated sine and a gaussian.
std::string modulation_figure()
{
    Scalar d = 1e-6;
    Waveform fm = sine(1.0, triangle(5e6, d), 0.0, d);
    Waveform g = gaussian(1.0, 0.15e-6, d);
    auto prod = render(fm * g, 1e9).values;
    auto rs = render(fm, 1e9).values;
    auto rg = render(g, 1e9).values;
    require(prod.size() == 1000, "sample count");
    double worst = 0.0;
    for (std::size_t k = 0; k < prod.size(); ++k)
        worst = std::max(worst, std::abs(prod[k] - rs[k] * rg[k]));
    require(worst <= 1e-12, "max diff " + fmt(worst));
    return "1000 samples, max diff " + fmt(worst);
}

// 5. Substitution round trip, idempotence, fold+simplify.
std::string substitution()
{
    GraphGen gen(5005);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        Bindings b;
        Waveform w = gen.renderable(4, &b);
        NodePtr bound = substitute(w.node(), b);
        require(structural_equal(unbind(bound, keys_of(b)), w.node()), "round trip " + std::to_string(i));
        require(identity_equal(substitute(bound, b), bound), "idempotence " + std::to_string(i));
        auto want = render(Waveform(bound), 1e9).values;
        auto got = render(Waveform(simplify(fold_constants(bound))), 1e9).values;
        worst = std::max(worst, max_abs_diff(want, got));
    }
    require(worst <= 1e-12, "fold+simplify diff " + fmt(worst));
    return "200 graphs, fold+simplify max diff " + fmt(worst);
}

// 6. Schedule durations and the overflow violation.
std::string schedule_invariants()
{
    GraphGen gen(6006);
    for (int i = 0; i < 100; ++i) {
        std::vector<Channel> channels{Channel("a"), Channel("b"), Channel("c")};
        Bindings b;
        Schedule s;
        std::function<void(int)> fill = [&](int depth) {
            int n = gen.integer(1, 4);
            for (int k = 0; k < n; ++k) {
                if (depth > 0 && gen.chance(0.35)) {
                    auto ctx = gen.chance(0.5) ? s.parallel() : s.sequential();
                    fill(depth - 1);
                } else {
                    s.add(channels[static_cast<std::size_t>(gen.integer(0, 2))], gen.renderable(2, &b));
                }
            }
        };
        fill(3);
        std::optional<double> common;
        for (const auto &[ch, w] : s.finalize()) {
            double d = resolve_duration(Waveform(substitute(w.node(), b)));
            common = common.value_or(d);
            require(d == *common, "channel durations differ in schedule " + std::to_string(i));
        }
    }

    Channel a("drive"), p("probe");
    Schedule s;
    {
        auto ctx = s.parallel(50e-9);
        s.add(a, constant(0.25, var("d")));
        s.add(p, zero(30e-9));
    }
    ChannelMap bound;
    for (const auto &[ch, w] : s.finalize())
        bound.set(ch, Waveform(substitute(w.node(), {{"d", 80e-9}})));
    auto violations = validate(bound);
    require(violations.size() == 1, std::to_string(violations.size()) + " violations");
    require(violations[0].node->kind() == Kind::Zero && violations[0].channel == a, "wrong node flagged");
    require(std::abs(violations[0].duration + 30e-9) < 1e-20, "pad is " + fmt(violations[0].duration));
    return "100 random schedules equal; overflow flags " + violations[0].describe();
}

// 7. DDS munch round trip and rejection.
std::string dds_round_trip()
{
    GraphGen gen(7007);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        Waveform w = gen.dds_friendly(gen.integer(1, 6));
        auto segs = munch_dds(w);
        worst = std::max(worst, max_abs_diff(synthesize(segs, 1e9).values, render(w, 1e9).values));
    }
    auto ms = applications::ms_gate();
    for (const auto &[ch, w] : ms.channels)
        worst = std::max(worst, max_abs_diff(synthesize(munch_dds(w), 1e9).values, render(w, 1e9).values));
    require(worst <= 1e-12, "max diff " + fmt(worst));

    Scalar d = 1e-6;
    try {
        munch_dds(sine(1.0, triangle(5e6, d), 0.0, d));
        require(false, "frequency-modulated sine accepted");
    } catch (const Error &e) {
        require(e.code() == ErrorCode::UnsupportedWaveform, "wrong error " + std::string(e.what()));
    }
    return "200 waveforms + MS gate, max diff " + fmt(worst) + "; modulated frequency rejected";
}

// 8. MS gate clock sequence.
std::string ms_gate()
{
    applications::MsGateParams p;
    auto gate = applications::ms_gate(p);
    require(gate.clock.kind() == Kind::ClockSeq, "spin clock is not a ClockSeq");
    std::set<double> freqs;
    for (const auto &e : gate.clock->children())
        freqs.insert(e.node->child("frequency")->value());
    require(freqs.size() == 3, "expected three clock frequencies");

    double d1 = 1e-6, d2 = 4e-6;
    double worst_jump = 0.0;
    for (double t : {d1, d1 + d2, 2 * d1 + d2}) {
        double left = clock_phase(gate.clock, std::nextafter(t, 0.0));
        double right = clock_phase(gate.clock, t);
        // The left limit differs from the value at t only by f * ulp(t).
        double slope = 2 * kPi * 10.1e6 * (t - std::nextafter(t, 0.0));
        worst_jump = std::max(worst_jump, std::abs(left - right) - slope);
    }
    require(worst_jump <= 1e-12, "phase jump " + fmt(worst_jump));

    auto segs = munch_dds(gate.channels.at(gate.spin));
    require(segs.size() == 3, std::to_string(segs.size()) + " spin segments");
    // Independent piecewise integration with a fine midpoint rule.
    auto integrate = [&](double t) {
        const int steps = 400000;
        double h = t / steps, acc = 0.0;
        for (int i = 0; i < steps; ++i) {
            double x = (i + 0.5) * h;
            double f = x < d1 ? p.f_1q : x < d1 + d2 ? p.f_2q : x < 2 * d1 + d2 ? p.f_1q : p.f_idle;
            acc += f * h;
        }
        return 2 * kPi * acc;
    };
    double starts[] = {0.0, d1, d1 + d2};
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        require(segs[i].phase_mode == PhaseMode::Continuous && segs[i].ref_phase_rad, "segment not continuous");
        worst = std::max(worst, std::abs(*segs[i].ref_phase_rad - integrate(starts[i])));
    }
    require(worst <= 1e-9, "ref phase off by " + fmt(worst));
    return "3 frequencies, jump " + fmt(std::max(worst_jump, 0.0)) + ", 3 segments, ref phase error " + fmt(worst);
}

// 9. Shelving clocks.
std::string shelving()
{
    applications::ShelvingParams p;
    auto s = applications::shelving(p);
    require(s.schedule.size() == 4, "expected four channels");
    std::set<double> freqs;
    std::set<const Node *> clocks;
    for (std::size_t i = 0; i < 4; ++i) {
        const Waveform &clk = s.clocks[i];
        require(clk.kind() == Kind::Clock, "clock is not a single Clock");
        require(clock_phase(clk, 0.0) == 0.0, "clock phase at 0");
        freqs.insert(clk->child("frequency")->value());
        clocks.insert(clk.node().get());
        // One linear segment: phase at any t equals 2 pi f t.
        for (double t : {0.3e-6, 2.5e-6, 4.9e-6, 7.0e-6})
            require(std::abs(clock_phase(clk, t) - 2 * kPi * p.frequencies[i] * t) <= 1e-9, "clock is not linear");

        // Every continuous sine on this channel references this channel's clock.
        std::function<void(const NodePtr &)> walk = [&](const NodePtr &n) {
            if (n->kind() == Kind::Sine && n->phase_mode() == PhaseMode::Continuous)
                require(identity_equal(n->child("ref_clock"), clk.node()), "foreign clock on channel");
            for (const auto &e : n->children())
                walk(e.node);
        };
        const Waveform &w = s.schedule.at(s.channels[i]);
        walk(w.node());
        for (const auto &seg : munch_dds(w)) {
            if (seg.amplitude == 0.0)
                continue;
            require(seg.frequency_hz == p.frequencies[i], "segment frequency");
            require(std::abs(*seg.ref_phase_rad - clock_phase(clk, seg.start_s)) <= 1e-12, "segment ref phase");
        }
    }
    require(freqs.size() == 4 && clocks.size() == 4, "clocks are not distinct");
    return "4 channels on 4 distinct clocks";
}

// 10. CLI determinism over the corpus.
std::string cli_determinism(double suite_seconds)
{
    fs::path corpus(PULSEIR_CORPUS_DIR);
    fs::path scratch = fs::temp_directory_path() / ("pulseir_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(scratch);
    struct Job {
        std::string file;
        std::string args;
        bool ok = true;
    };
    std::vector<Job> jobs;
    std::map<std::string, std::string> binds{{"fm_carrier.json", "--bind d=400e-9"},
                                             {"foo_sum.json", "--bind foo=0.5"},
                                             {"ms_gate.json", "--bind d1q=1e-6 --bind d2q=4e-6"},
                                             {"overflow_schedule.json", "--bind d=40e-9"}};
    const std::set<std::string> no_dds{"fm_carrier.json", "foo_sum.json", "modulation.json",
                                       "overflow_schedule.json"};
    std::size_t files = 0;
    for (const auto &entry : fs::directory_iterator(corpus)) {
        if (entry.path().extension() != ".json")
            continue;
        ++files;
        std::string name = entry.path().filename().string();
        std::string b = binds.count(name) ? binds[name] + " " : "";
        std::string in = shell_quote(entry.path().string());
        jobs.push_back({name, "render " + b + in});
        jobs.push_back({name, "dot " + b + in});
        // Files without a DDS form must fail the same way every time.
        bool dds_ok = !no_dds.count(name);
        jobs.push_back({name, "compile --target dds " + b + in, dds_ok});
    }
    auto start = Clock::now();
    std::size_t bytes = 0;
    for (const auto &job : jobs) {
        RunResult first = run_program(PULSEIRC_PATH, job.args, scratch);
        require((first.status == 0) == job.ok,
                job.file + ": '" + job.args + "' " + (job.ok ? "failed: " + first.err : "succeeded unexpectedly"));
        for (int rep = 0; rep < 3; ++rep) {
            RunResult again = run_program(PULSEIRC_PATH, job.args, scratch);
            require(again.status == first.status && again.out == first.out && again.err == first.err,
                    job.file + ": output differs on rerun");
        }
        bytes += first.out.size();
    }
    fs::remove_all(scratch);
    double elapsed = seconds_since(start);
    require(suite_seconds + elapsed < 60.0, "runtime " + fmt(suite_seconds + elapsed) + " s");
    return std::to_string(jobs.size()) + " commands over " + std::to_string(files) + " files x4 runs, " +
           std::to_string(bytes) + " bytes identical, " + fmt(elapsed) + " s";
}

} // namespace

int main()
{
    auto suite_start = Clock::now();
    int failures = 0;
    auto check = [&](int id, const char *name, const std::function<std::string()> &f) {
        std::string detail;
        bool ok = false;
        try {
            detail = f();
            ok = true;
        } catch (const Failure &e) {
            detail = e.what;
        } catch (const std::exception &e) {
            detail = std::string("exception: ") + e.what();
        }
        failures += !ok;
        std::printf("[%s] %2d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
        std::fflush(stdout);
    };
    check(1, "duration algebra oracle", duration_oracle);
    check(2, "phase-mode figure", phase_modes);
    check(3, "FM/PM expansion", modulation_expansion);
    check(4, "modulation figure", modulation_figure);
    check(5, "substitution round trip", substitution);
    check(6, "schedule invariants", schedule_invariants);
    check(7, "DDS munch round trip", dds_round_trip);
    check(8, "MS gate", ms_gate);
    check(9, "shelving", shelving);
    check(10, "CLI determinism", [&] { return cli_determinism(seconds_since(suite_start)); });
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
