#pragma once

#include "pulseir/scalar.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace pulseir {

// A waveform duration: a scalar expression in seconds, or Unbounded.
// Unbounded behaves like +inf in the duration algebra.
class Duration {
public:
    template <typename T>
        requires std::is_arithmetic_v<T>
    Duration(T seconds) : expr_(Scalar(seconds))
    {
    }
    Duration(Scalar expr) : expr_(std::move(expr)) {}

    static Duration unbounded() { return Duration(); }

    bool is_unbounded() const noexcept { return !expr_.has_value(); }
    /// Throws UnboundedDuration when unbounded.
    const Scalar &expr() const;

private:
    Duration() = default;
    std::optional<Scalar> expr_;
};

class Waveform {
public:
    explicit Waveform(NodePtr node);

    const NodePtr &node() const noexcept { return node_; }
    const Node *operator->() const noexcept { return node_.get(); }
    Kind kind() const noexcept { return node_->kind(); }

private:
    NodePtr node_;
};

// A value accepted in a waveform-parameter position. Scalars (and literals)
// are promoted to a Const waveform with the host waveform's duration.
class WaveParam {
public:
    WaveParam(Waveform w) : value_(std::move(w)) {}
    WaveParam(Scalar s) : value_(std::move(s)) {}
    template <typename T>
        requires std::is_arithmetic_v<T>
    WaveParam(T value) : value_(Scalar(value))
    {
    }

    Waveform promote(const Scalar &host_duration) const;

private:
    std::variant<Waveform, Scalar> value_;
};

Waveform constant(Scalar value, Scalar duration);
Waveform zero(Scalar duration);
Waveform ramp(Scalar start_value, Scalar stop_value, Scalar duration);
Waveform triangle(Scalar amplitude, Scalar duration);
Waveform gaussian(Scalar amplitude, Scalar sigma, Scalar duration);
Waveform clock(Scalar frequency, Scalar phase, Duration duration = Duration::unbounded());
Waveform clock_sequence(std::vector<Waveform> clocks);

/// Absolute phase mode sine.
Waveform sine(WaveParam amplitude, WaveParam frequency, WaveParam phase, Scalar duration);
/// Continuous phase mode sine referencing a Clock or ClockSeq.
Waveform sine(WaveParam amplitude, WaveParam frequency, WaveParam phase, Scalar duration,
              const Waveform &ref_clock);

Waveform sine_fm(const Waveform &carrier, WaveParam modulation, WaveParam amplitude, WaveParam phase,
                 Scalar duration);
Waveform sine_pm(const Waveform &carrier, WaveParam modulation, WaveParam amplitude, WaveParam phase,
                 Scalar duration);

Waveform polynomial(std::vector<Scalar> coefficients, Scalar duration);
Waveform power(Scalar scale, Scalar exponent, Scalar duration);

Waveform sequence(std::vector<Waveform> items);
Waveform wave_sum(std::vector<Waveform> items);
Waveform wave_product(std::vector<Waveform> items);
Waveform wave_sub(Waveform a, Waveform b);
Waveform wave_div(Waveform a, Waveform b);
Waveform wave_neg(Waveform a);

Waveform operator+(const Waveform &a, const Waveform &b);
Waveform operator-(const Waveform &a, const Waveform &b);
Waveform operator*(const Waveform &a, const Waveform &b);
Waveform operator/(const Waveform &a, const Waveform &b);
Waveform operator-(const Waveform &a);

// Mixed forms promote the scalar to a Const waveform whose duration is the
// waveform operand's duration.
Waveform operator+(const Waveform &a, const Scalar &b);
Waveform operator+(const Scalar &a, const Waveform &b);
Waveform operator-(const Waveform &a, const Scalar &b);
Waveform operator-(const Scalar &a, const Waveform &b);
Waveform operator*(const Waveform &a, const Scalar &b);
Waveform operator*(const Scalar &a, const Waveform &b);
Waveform operator/(const Waveform &a, const Scalar &b);
Waveform operator/(const Scalar &a, const Waveform &b);

/// Symbolic effective duration of a waveform (see duration.cpp for the rules).
Duration duration_expr(const Waveform &w);
Duration duration_expr(const NodePtr &waveform);

/// The duration a waveform was configured with, ignoring its parameters.
/// ClockSeq reports the sum of its clocks.
Duration configured_duration(const NodePtr &waveform);

Duration min_duration(const std::vector<Duration> &items);
Duration max_duration(const std::vector<Duration> &items);
Duration sum_duration(const std::vector<Duration> &items);

} // namespace pulseir
