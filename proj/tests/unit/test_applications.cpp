#include "generators.hpp"

#include <doctest.h>

#include <numbers>

using namespace pulseir;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent phase of a piecewise-constant frequency profile.
double profile_phase(const std::vector<std::pair<double, double>> &segments, double t)
{
    double phase = 0.0;
    double start = 0.0;
    for (const auto &[f, d] : segments) {
        double span = std::min(t - start, d);
        if (span <= 0)
            break;
        phase += 2 * kPi * f * span;
        start += d;
    }
    return phase;
}

} // namespace

TEST_CASE("ms gate layout")
{
    applications::MsGateParams p;
    auto gate = applications::ms_gate(p);
    REQUIRE(gate.channels.size() == 2);
    CHECK(gate.channels.channels()[0] == gate.spin);
    CHECK(gate.clock.kind() == Kind::ClockSeq);
    CHECK(gate.clock->children().size() == 4);
    double total = 6e-6;
    CHECK(resolve_duration(gate.channels.at(gate.spin)) == doctest::Approx(total));
    CHECK(resolve_duration(gate.channels.at(gate.spin)) == resolve_duration(gate.channels.at(gate.motion)));
}

TEST_CASE("ms gate spin segments follow the clock sequence")
{
    applications::MsGateParams p;
    auto gate = applications::ms_gate(p);
    auto spin = munch_dds(gate.channels.at(gate.spin));
    REQUIRE(spin.size() == 3);
    std::vector<std::pair<double, double>> profile{{p.f_1q, 1e-6}, {p.f_2q, 4e-6}, {p.f_1q, 1e-6}, {p.f_idle, 1.0}};
    double starts[] = {0.0, 1e-6, 5e-6};
    double freqs[] = {p.f_1q, p.f_2q, p.f_1q};
    for (int i = 0; i < 3; ++i) {
        CHECK(spin[i].phase_mode == PhaseMode::Continuous);
        CHECK(spin[i].start_s == doctest::Approx(starts[i]));
        CHECK(spin[i].frequency_hz == freqs[i]);
        REQUIRE(spin[i].ref_phase_rad);
        CHECK(std::abs(*spin[i].ref_phase_rad - profile_phase(profile, starts[i])) <= 1e-9);
    }
    auto motion = munch_dds(gate.channels.at(gate.motion));
    CHECK(motion.size() == 3);
    CHECK(motion[1].frequency_hz == p.motion_frequency);
    CHECK(motion[0].amplitude == 0.0);
}

TEST_CASE("ms gate durations can stay symbolic")
{
    applications::MsGateParams p;
    p.d_1q = var("d1q");
    p.d_2q = var("d2q");
    auto gate = applications::ms_gate(p);
    Bindings b{{"d1q", 1e-6}, {"d2q", 4e-6}};
    for (const auto &[ch, w] : gate.channels)
        CHECK(resolve_duration(Waveform(substitute(w.node(), b))) == doctest::Approx(6e-6));
}

TEST_CASE("shelving uses one clock per channel")
{
    applications::ShelvingParams p;
    auto s = applications::shelving(p);
    REQUIRE(s.schedule.size() == 4);
    double total = 2 * p.half_pi_duration + p.pi_duration + 2 * p.transfer_duration;
    for (std::size_t i = 0; i < 4; ++i) {
        const Waveform &w = s.schedule.at(s.channels[i]);
        CHECK(resolve_duration(w) == doctest::Approx(total));
        CHECK(s.clocks[i].kind() == Kind::Clock);
        CHECK(clock_phase(s.clocks[i], 0.0) == 0.0);
        auto segs = munch_dds(w);
        for (const auto &seg : segs) {
            if (seg.amplitude == 0.0)
                continue;
            CHECK(seg.phase_mode == PhaseMode::Continuous);
            CHECK(seg.frequency_hz == p.frequencies[i]);
            CHECK(std::abs(*seg.ref_phase_rad - 2 * kPi * p.frequencies[i] * seg.start_s) <= 1e-9);
        }
    }
}
