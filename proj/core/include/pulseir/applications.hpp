#pragma once

#include "pulseir/schedule.hpp"

#include <array>

namespace pulseir::applications {

// Single-qubit gate, two-qubit MS gate, single-qubit gate. The spin channel
// tracks the qubit phase on a clock sequence whose frequency follows the
// AC-Stark shift of each pulse; the motion channel carries no clock.
struct MsGateParams {
    double f_1q = 10.05e6;  // clock frequency while a single-qubit pulse plays
    double f_2q = 9.97e6;   // clock frequency during the MS gate
    double f_idle = 10.0e6; // clock frequency after the sequence
    Scalar d_1q = 1e-6;
    Scalar d_2q = 4e-6;
    double spin_amplitude = 1.0;
    double motion_frequency = 1.2e6;
    double motion_amplitude = 0.5;
};

struct MsGate {
    Channel spin;
    Channel motion;
    Waveform clock;
    ChannelMap channels;
};

MsGate ms_gate(const MsGateParams &params = {});

// sqrt(Y) on the ground qubit, transfer to the metastable pair, Y on the
// metastable qubit, transfer back, sqrt(Y). Every channel plays continuous
// pulses on its own constant-frequency clock; all clocks start at phase 0.
struct ShelvingParams {
    std::array<double, 4> frequencies{12.6e6, 7.2e6, 8.4e6, 3.1e6}; // ground, 0-0', 1-1', metastable
    double half_pi_duration = 0.5e-6;
    double pi_duration = 1.0e-6;
    double transfer_duration = 2.0e-6;
    double amplitude = 1.0;
};

struct Shelving {
    std::array<Channel, 4> channels; // ground, transfer0, transfer1, metastable
    std::array<Waveform, 4> clocks;
    ChannelMap schedule;
};

Shelving shelving(const ShelvingParams &params = {});

} // namespace pulseir::applications
