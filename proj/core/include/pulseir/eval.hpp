#pragma once

#include "pulseir/waveform.hpp"

#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <vector>

namespace pulseir {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Start time of the waveform under evaluation. Clocks are anchored at the
/// global origin t = 0 regardless of t_start.
struct EvalContext {
    double t_start = 0.0;
};

struct SampleBlock {
    double sample_rate = 0.0;
    double t0 = 0.0;
    std::vector<double> values;

    double time(std::size_t k) const { return t0 + static_cast<double>(k) / sample_rate; }
};

/// The sine kernel shared by the evaluator and every backend that
/// re-synthesizes a sine, so both produce bit-identical samples.
inline double sine_value(double amplitude, double phase_offset, double frequency, double tau, double phase)
{
    return amplitude * std::sin(phase_offset + kTwoPi * frequency * tau + phase);
}

double resolve_scalar(const Scalar &s);
/// nullopt when the scalar still contains variables.
std::optional<double> try_resolve_scalar(const Scalar &s);

/// Effective duration in seconds; +inf when unbounded. May be negative.
double resolve_duration(const Waveform &w);

double clock_phase(const Waveform &clock, double tau);
double value_at(const Waveform &w, double t, EvalContext ctx = {});

/// Left-edge sampling of [t0, t0 + d) at the given rate.
SampleBlock render(const Waveform &w, double sample_rate, double t0 = 0.0);

/// ceil(duration * rate), with products within 1e-9 relative of an integer
/// snapped to it so that e.g. 0.3 us at 1 GHz is 300 samples.
std::size_t sample_count(double duration, double sample_rate);

/// Rewrites a SineFM / SinePM node into the equivalent continuous-mode Sine
/// whose reference clock is the carrier.
Waveform expand_sine_fm(const Waveform &w);
Waveform expand_sine_pm(const Waveform &w);

// Caching evaluator for repeated queries against the same graphs. Not
// thread-safe; use one instance per thread.
class Evaluator {
public:
    Evaluator();
    ~Evaluator();
    Evaluator(Evaluator &&) noexcept;
    Evaluator &operator=(Evaluator &&) noexcept;

    double scalar(const NodePtr &s);
    double duration(const NodePtr &w);
    double clock_phase(const NodePtr &clock, double tau);
    double value_at(const NodePtr &w, double t, double t_start);
    /// Absolute start times of a Sequence's items when it starts at t_start.
    std::vector<double> item_starts(const NodePtr &sequence, double t_start);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace pulseir
