#pragma once

#include "pulseir/eval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pulseir {

/// Graphviz digraph with one vertex per unique node, numbered in depth-first
/// pre-order, and edges labeled with the child labels.
std::string to_dot(const NodePtr &graph);

// One DDS instruction in SI units.
struct DdsSegment {
    double duration_s = 0.0;
    double frequency_hz = 0.0;
    double amplitude = 0.0;
    double phase_rad = 0.0;
    PhaseMode phase_mode = PhaseMode::Absolute;
    std::optional<double> ref_phase_rad; // reference clock phase at start_s; continuous only
    double start_s = 0.0;                // absolute start time
};

/// Greedy linearization of a bound waveform into DDS segments. Nested
/// sequences are flattened and zero-duration items skipped; each remaining
/// item must match one of:
///   Sine with parameters constant over the item (SineFM/SinePM expanded first)
///   Zero, or Const with value 0
///   Product of one such sine and factors constant over the item
/// Anything else raises UnsupportedWaveform with the item's path.
std::vector<DdsSegment> munch_dds(const Waveform &w, double t0 = 0.0);

/// Re-renders a segment list with the same sine kernel the evaluator uses.
SampleBlock synthesize(const std::vector<DdsSegment> &segments, double sample_rate, double t0 = 0.0);

/// Sample output for arbitrary-waveform hardware; same as render().
SampleBlock emit_samples(const Waveform &w, double sample_rate, double t0 = 0.0);

} // namespace pulseir
