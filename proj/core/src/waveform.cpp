#include "pulseir/waveform.hpp"

#include "pulseir/error.hpp"

#include <utility>

namespace pulseir {
namespace {

Waveform make(Kind kind, std::vector<Edge> children, PhaseMode mode = PhaseMode::Absolute)
{
    return Waveform(Node::make(kind, std::move(children), mode));
}

Waveform wave_op(Kind kind, std::vector<Waveform> items)
{
    std::vector<Edge> children;
    children.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        children.push_back({index_label(i), items[i].node()});
    return make(kind, std::move(children));
}

Scalar promotion_duration(const Waveform &w)
{
    Duration d = duration_expr(w);
    if (d.is_unbounded())
        throw Error(ErrorCode::InvalidArgument,
                    "cannot promote a scalar next to an unbounded " + std::string(w->name()));
    return d.expr();
}

Waveform promote(const Scalar &s, const Waveform &host) { return constant(s, promotion_duration(host)); }

Waveform modulated(Kind kind, const Waveform &carrier, const WaveParam &modulation, const WaveParam &amplitude,
                   const WaveParam &phase, const Scalar &duration)
{
    return make(kind, {{"carrier", carrier.node()},
                       {"modulation", modulation.promote(duration).node()},
                       {"amplitude", amplitude.promote(duration).node()},
                       {"phase", phase.promote(duration).node()},
                       {"duration", duration.node()}});
}

} // namespace

const Scalar &Duration::expr() const
{
    if (!expr_)
        throw Error(ErrorCode::UnboundedDuration, "duration is unbounded");
    return *expr_;
}

Waveform::Waveform(NodePtr node) : node_(std::move(node))
{
    if (!node_)
        throw Error(ErrorCode::InvalidArgument, "null waveform node");
    if (node_->category() != Category::Waveform)
        throw Error(ErrorCode::CategoryViolation, "expected a waveform, got " + std::string(node_->name()));
}

Waveform WaveParam::promote(const Scalar &host_duration) const
{
    if (auto w = std::get_if<Waveform>(&value_))
        return *w;
    return constant(std::get<Scalar>(value_), host_duration);
}

Waveform constant(Scalar value, Scalar duration)
{
    return make(Kind::Const, {{"value", value.node()}, {"duration", duration.node()}});
}

Waveform zero(Scalar duration) { return make(Kind::Zero, {{"duration", duration.node()}}); }

Waveform ramp(Scalar start_value, Scalar stop_value, Scalar duration)
{
    return make(Kind::Ramp,
                {{"start_value", start_value.node()}, {"stop_value", stop_value.node()}, {"duration", duration.node()}});
}

Waveform triangle(Scalar amplitude, Scalar duration)
{
    return make(Kind::Triangle, {{"amplitude", amplitude.node()}, {"duration", duration.node()}});
}

Waveform gaussian(Scalar amplitude, Scalar sigma, Scalar duration)
{
    return make(Kind::Gaussian,
                {{"amplitude", amplitude.node()}, {"sigma", sigma.node()}, {"duration", duration.node()}});
}

Waveform clock(Scalar frequency, Scalar phase, Duration duration)
{
    std::vector<Edge> children{{"frequency", frequency.node()}, {"phase", phase.node()}};
    if (!duration.is_unbounded())
        children.push_back({"duration", duration.expr().node()});
    return make(Kind::Clock, std::move(children));
}

Waveform clock_sequence(std::vector<Waveform> clocks)
{
    std::vector<Edge> children;
    children.reserve(clocks.size());
    for (std::size_t i = 0; i < clocks.size(); ++i)
        children.push_back({index_label(i), clocks[i].node()});
    return make(Kind::ClockSeq, std::move(children));
}

Waveform sine(WaveParam amplitude, WaveParam frequency, WaveParam phase, Scalar duration)
{
    return make(Kind::Sine, {{"amplitude", amplitude.promote(duration).node()},
                             {"frequency", frequency.promote(duration).node()},
                             {"phase", phase.promote(duration).node()},
                             {"duration", duration.node()}});
}

Waveform sine(WaveParam amplitude, WaveParam frequency, WaveParam phase, Scalar duration, const Waveform &ref_clock)
{
    return make(Kind::Sine,
                {{"amplitude", amplitude.promote(duration).node()},
                 {"frequency", frequency.promote(duration).node()},
                 {"phase", phase.promote(duration).node()},
                 {"duration", duration.node()},
                 {"ref_clock", ref_clock.node()}},
                PhaseMode::Continuous);
}

Waveform sine_fm(const Waveform &carrier, WaveParam modulation, WaveParam amplitude, WaveParam phase,
                 Scalar duration)
{
    return modulated(Kind::SineFM, carrier, modulation, amplitude, phase, duration);
}

Waveform sine_pm(const Waveform &carrier, WaveParam modulation, WaveParam amplitude, WaveParam phase,
                 Scalar duration)
{
    return modulated(Kind::SinePM, carrier, modulation, amplitude, phase, duration);
}

Waveform polynomial(std::vector<Scalar> coefficients, Scalar duration)
{
    std::vector<Edge> children;
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        children.push_back({"c" + std::to_string(i), coefficients[i].node()});
    children.push_back({"duration", duration.node()});
    return make(Kind::Polynomial, std::move(children));
}

Waveform power(Scalar scale, Scalar exponent, Scalar duration)
{
    return make(Kind::Power, {{"scale", scale.node()}, {"exponent", exponent.node()}, {"duration", duration.node()}});
}

Waveform sequence(std::vector<Waveform> items) { return wave_op(Kind::Sequence, std::move(items)); }
Waveform wave_sum(std::vector<Waveform> items) { return wave_op(Kind::WaveformSum, std::move(items)); }
Waveform wave_product(std::vector<Waveform> items) { return wave_op(Kind::WaveformProduct, std::move(items)); }
Waveform wave_sub(Waveform a, Waveform b) { return wave_op(Kind::WaveformSub, {std::move(a), std::move(b)}); }
Waveform wave_div(Waveform a, Waveform b) { return wave_op(Kind::WaveformDiv, {std::move(a), std::move(b)}); }
Waveform wave_neg(Waveform a) { return wave_op(Kind::WaveformNeg, {std::move(a)}); }

Waveform operator+(const Waveform &a, const Waveform &b) { return wave_sum({a, b}); }
Waveform operator-(const Waveform &a, const Waveform &b) { return wave_sub(a, b); }
Waveform operator*(const Waveform &a, const Waveform &b) { return wave_product({a, b}); }
Waveform operator/(const Waveform &a, const Waveform &b) { return wave_div(a, b); }
Waveform operator-(const Waveform &a) { return wave_neg(a); }

Waveform operator+(const Waveform &a, const Scalar &b) { return a + promote(b, a); }
Waveform operator+(const Scalar &a, const Waveform &b) { return promote(a, b) + b; }
Waveform operator-(const Waveform &a, const Scalar &b) { return a - promote(b, a); }
Waveform operator-(const Scalar &a, const Waveform &b) { return promote(a, b) - b; }
Waveform operator*(const Waveform &a, const Scalar &b) { return a * promote(b, a); }
Waveform operator*(const Scalar &a, const Waveform &b) { return promote(a, b) * b; }
Waveform operator/(const Waveform &a, const Scalar &b) { return a / promote(b, a); }
Waveform operator/(const Scalar &a, const Waveform &b) { return promote(a, b) / b; }

} // namespace pulseir
