#include "pulseir/applications.hpp"

#include <numbers>

namespace pulseir::applications {

MsGate ms_gate(const MsGateParams &p)
{
    Channel spin("spin");
    Channel motion("motion");
    Waveform clock_seq = clock_sequence({
        clock(p.f_1q, 0.0, p.d_1q),
        clock(p.f_2q, 0.0, p.d_2q),
        clock(p.f_1q, 0.0, p.d_1q),
        clock(p.f_idle, 0.0),
    });

    Schedule s;
    s.add(spin, sine(p.spin_amplitude, p.f_1q, 0.0, p.d_1q, clock_seq));
    {
        auto ctx = s.parallel();
        s.add(spin, sine(p.spin_amplitude, p.f_2q, 0.0, p.d_2q, clock_seq));
        s.add(motion, sine(p.motion_amplitude, p.motion_frequency, 0.0, p.d_2q));
    }
    s.add(spin, sine(p.spin_amplitude, p.f_1q, 0.0, p.d_1q, clock_seq));
    return MsGate{spin, motion, clock_seq, s.finalize()};
}

Shelving shelving(const ShelvingParams &p)
{
    std::array<Channel, 4> ch{Channel("ground"), Channel("transfer0"), Channel("transfer1"), Channel("metastable")};
    std::array<Waveform, 4> clocks{clock(p.frequencies[0], 0.0), clock(p.frequencies[1], 0.0),
                                   clock(p.frequencies[2], 0.0), clock(p.frequencies[3], 0.0)};
    auto pulse = [&](std::size_t i, double duration, double phase) {
        return sine(p.amplitude, p.frequencies[i], phase, duration, clocks[i]);
    };
    constexpr double y_phase = std::numbers::pi / 2;

    Schedule s;
    s.add(ch[0], pulse(0, p.half_pi_duration, y_phase));
    {
        auto ctx = s.parallel();
        s.add(ch[1], pulse(1, p.transfer_duration, 0.0));
        s.add(ch[2], pulse(2, p.transfer_duration, 0.0));
    }
    s.add(ch[3], pulse(3, p.pi_duration, y_phase));
    {
        auto ctx = s.parallel();
        s.add(ch[1], pulse(1, p.transfer_duration, 0.0));
        s.add(ch[2], pulse(2, p.transfer_duration, 0.0));
    }
    s.add(ch[0], pulse(0, p.half_pi_duration, y_phase));
    return Shelving{ch, clocks, s.finalize()};
}

} // namespace pulseir::applications
