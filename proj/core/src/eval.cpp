#include "pulseir/eval.hpp"

#include "pulseir/error.hpp"

#include "resolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace pulseir {

struct Evaluator::Impl {
    struct ClockTable {
        std::vector<double> starts;      // segment start times
        std::vector<double> frequencies; // Hz
        std::vector<double> phases;      // accumulated phase at each start
    };

    // Non-empty items of a sequence with their offsets from the sequence start.
    struct SequenceTable {
        std::vector<double> offsets;
        std::vector<std::size_t> items;
        std::optional<Error> error; // first negative-duration item
    };

    detail::Resolver resolver;
    std::unordered_map<const Node *, ClockTable> clocks;
    std::unordered_map<const Node *, SequenceTable> sequences;

    template <typename F>
    static auto at_edge(const std::string &label, F &&f) -> decltype(f())
    {
        try {
            return f();
        } catch (Error &e) {
            e.prepend_path(label);
            throw;
        }
    }

    double scalar_child(const NodePtr &w, std::string_view label)
    {
        const auto &child = w->child(label);
        return at_edge(std::string(label), [&] { return resolver.scalar(child); });
    }

    const ClockTable &clock_table(const NodePtr &c)
    {
        if (auto it = clocks.find(c.get()); it != clocks.end())
            return it->second;
        ClockTable table;
        if (c->kind() == Kind::Clock) {
            table.starts.push_back(0.0);
            table.frequencies.push_back(scalar_child(c, "frequency"));
            table.phases.push_back(scalar_child(c, "phase"));
        } else if (c->kind() == Kind::ClockSeq) {
            auto items = c->children();
            double start = 0.0;
            double phase = at_edge(items[0].label, [&] { return scalar_child(items[0].node, "phase"); });
            for (std::size_t i = 0; i < items.size(); ++i) {
                const auto &item = items[i];
                double f = at_edge(item.label, [&] { return scalar_child(item.node, "frequency"); });
                table.starts.push_back(start);
                table.frequencies.push_back(f);
                table.phases.push_back(phase);
                if (i + 1 < items.size()) {
                    double d = at_edge(item.label, [&] { return resolver.duration(item.node); });
                    phase += kTwoPi * f * d;
                    start += d;
                }
            }
        } else {
            throw Error(ErrorCode::InvalidArgument, std::string(c->name()) + " is not a clock");
        }
        return clocks.emplace(c.get(), std::move(table)).first->second;
    }

    double clock_phase(const NodePtr &c, double tau)
    {
        if (!(tau >= 0.0))
            throw Error(ErrorCode::NegativeTime, "clock phase requested at t = " + format_number(tau) + " s");
        const auto &table = clock_table(c);
        std::size_t k = static_cast<std::size_t>(
            std::upper_bound(table.starts.begin() + 1, table.starts.end(), tau) - table.starts.begin() - 1);
        return table.phases[k] + kTwoPi * table.frequencies[k] * (tau - table.starts[k]);
    }

    double eval_child(const NodePtr &w, std::string_view label, double t, double t_start)
    {
        const auto &child = w->child(label);
        return at_edge(std::string(label), [&] { return eval(child, t, t_start); });
    }

    double eval(const NodePtr &w, double t, double t_start)
    {
        double d = resolver.duration(w);
        if (d < 0.0)
            throw Error(ErrorCode::NegativeDuration,
                        std::string(w->name()) + " has negative duration " + format_number(d) + " s");
        double tau = t - t_start;
        if (tau < 0.0 || !(tau < d))
            return 0.0;
        return inside(w, t, t_start, tau, d);
    }

    double inside(const NodePtr &w, double t, double t_start, double tau, double d)
    {
        switch (w->kind()) {
        case Kind::Const:
            return scalar_child(w, "value");
        case Kind::Zero:
            return 0.0;
        case Kind::Ramp: {
            double a = scalar_child(w, "start_value");
            double b = scalar_child(w, "stop_value");
            return a + (b - a) * (tau / d);
        }
        case Kind::Triangle: {
            double amplitude = scalar_child(w, "amplitude");
            return amplitude * (1.0 - std::abs(2.0 * tau / d - 1.0));
        }
        case Kind::Gaussian: {
            double amplitude = scalar_child(w, "amplitude");
            double sigma = scalar_child(w, "sigma");
            if (sigma == 0.0)
                throw Error(ErrorCode::DivisionByZero, "Gaussian with sigma = 0");
            double x = tau - d / 2.0;
            return amplitude * std::exp(-(x * x) / (2.0 * sigma * sigma));
        }
        case Kind::Polynomial: {
            auto children = w->children();
            double acc = 0.0;
            for (std::size_t i = children.size() - 1; i-- > 0;)
                acc = acc * tau + at_edge(children[i].label, [&] { return resolver.scalar(children[i].node); });
            return acc;
        }
        case Kind::Power: {
            double scale = scalar_child(w, "scale");
            double exponent = scalar_child(w, "exponent");
            if (tau == 0.0 && exponent < 0.0)
                throw Error(ErrorCode::SingularPower, "negative exponent " + format_number(exponent) +
                                                          " evaluated at the start of the domain");
            return scale * std::pow(tau, exponent);
        }
        case Kind::Clock:
        case Kind::ClockSeq:
            return std::sin(clock_phase(w, t));
        case Kind::Sine: {
            double a = eval_child(w, "amplitude", t, t_start);
            double f = eval_child(w, "frequency", t, t_start);
            double p = eval_child(w, "phase", t, t_start);
            double offset = 0.0;
            if (w->phase_mode() == PhaseMode::Continuous) {
                const auto &ref = w->child("ref_clock");
                offset = at_edge("ref_clock", [&] { return clock_phase(ref, t_start); });
            }
            return sine_value(a, offset, f, tau, p);
        }
        case Kind::SineFM:
        case Kind::SinePM: {
            const auto &carrier = w->child("carrier");
            double fc = at_edge("carrier", [&] { return scalar_child(carrier, "frequency"); });
            double offset = at_edge("carrier", [&] { return clock_phase(carrier, t_start); });
            double m = eval_child(w, "modulation", t, t_start);
            double a = eval_child(w, "amplitude", t, t_start);
            double p = eval_child(w, "phase", t, t_start);
            if (w->kind() == Kind::SineFM)
                return sine_value(a, offset, fc + m, tau, p);
            return sine_value(a, offset, fc, tau, m + p);
        }
        case Kind::WaveformSum: {
            double acc = 0.0;
            for (const auto &edge : w->children())
                acc += eval_child(w, edge.label, t, t_start);
            return acc;
        }
        case Kind::WaveformSub:
            return eval_child(w, "0", t, t_start) - eval_child(w, "1", t, t_start);
        case Kind::WaveformProduct: {
            double acc = 1.0;
            for (const auto &edge : w->children())
                acc *= eval_child(w, edge.label, t, t_start);
            return acc;
        }
        case Kind::WaveformDiv: {
            double num = eval_child(w, "0", t, t_start);
            double den = eval_child(w, "1", t, t_start);
            if (den == 0.0)
                throw Error(ErrorCode::DivisionByZero, "waveform divisor is zero at t = " + format_number(t) + " s");
            return num / den;
        }
        case Kind::WaveformNeg:
            return -eval_child(w, "0", t, t_start);
        case Kind::Sequence:
            return sequence_value(w, t, t_start);
        default:
            throw Error(ErrorCode::CategoryViolation, std::string(w->name()) + " is not a waveform");
        }
    }

    const SequenceTable &sequence_table(const NodePtr &w)
    {
        if (auto it = sequences.find(w.get()); it != sequences.end())
            return it->second;
        SequenceTable table;
        auto items = w->children();
        const auto &offsets = resolver.item_offsets(w);
        for (std::size_t k = 0; k < items.size(); ++k) {
            double d = at_edge(items[k].label, [&] { return resolver.duration(items[k].node); });
            if (d < 0.0) {
                Error e(ErrorCode::NegativeDuration, std::string(items[k].node->name()) +
                                                         " has negative duration " + format_number(d) + " s");
                e.prepend_path(items[k].label);
                table.error = std::move(e);
                break;
            }
            if (d == 0.0)
                continue;
            table.offsets.push_back(offsets[k]);
            table.items.push_back(k);
        }
        return sequences.emplace(w.get(), std::move(table)).first->second;
    }

    // The active item is the last non-empty item whose absolute start is at
    // or before t; it is then evaluated against its own domain.
    double sequence_value(const NodePtr &w, double t, double t_start)
    {
        const auto &table = sequence_table(w);
        if (table.error)
            throw *table.error;
        // Absolute starts are compared as t_start + offset, matching item_starts().
        auto first = table.offsets.begin();
        auto last = table.offsets.end();
        auto pos = std::upper_bound(first, last, t, [&](double x, double off) { return x < t_start + off; });
        if (pos == first)
            return 0.0;
        std::size_t slot = static_cast<std::size_t>(pos - first) - 1;
        const auto &edge = w->children()[table.items[slot]];
        return at_edge(edge.label, [&] { return eval(edge.node, t, t_start + table.offsets[slot]); });
    }
};

Evaluator::Evaluator() : impl_(std::make_unique<Impl>()) {}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator &&) noexcept = default;
Evaluator &Evaluator::operator=(Evaluator &&) noexcept = default;

double Evaluator::scalar(const NodePtr &s)
{
    impl_->resolver.pin(s);
    return impl_->resolver.scalar(s);
}

double Evaluator::duration(const NodePtr &w)
{
    impl_->resolver.pin(w);
    return impl_->resolver.duration(w);
}

double Evaluator::clock_phase(const NodePtr &clock, double tau)
{
    impl_->resolver.pin(clock);
    return impl_->clock_phase(clock, tau);
}

double Evaluator::value_at(const NodePtr &w, double t, double t_start)
{
    impl_->resolver.pin(w);
    return impl_->eval(w, t, t_start);
}

std::vector<double> Evaluator::item_starts(const NodePtr &sequence, double t_start)
{
    impl_->resolver.pin(sequence);
    std::vector<double> starts = impl_->resolver.item_offsets(sequence);
    for (auto &s : starts)
        s = t_start + s;
    return starts;
}

double resolve_scalar(const Scalar &s)
{
    detail::Resolver resolver;
    return resolver.scalar(s.node());
}

std::optional<double> try_resolve_scalar(const Scalar &s)
{
    std::unordered_map<const Node *, bool> memo;
    if (!detail::is_var_free(s.node(), memo))
        return std::nullopt;
    return resolve_scalar(s);
}

double resolve_duration(const Waveform &w)
{
    detail::Resolver resolver;
    return resolver.duration(w.node());
}

double clock_phase(const Waveform &clock, double tau)
{
    Evaluator evaluator;
    return evaluator.clock_phase(clock.node(), tau);
}

double value_at(const Waveform &w, double t, EvalContext ctx)
{
    Evaluator evaluator;
    return evaluator.value_at(w.node(), t, ctx.t_start);
}

std::size_t sample_count(double duration, double sample_rate)
{
    double x = duration * sample_rate;
    if (!(x > 0.0))
        return 0;
    double nearest = std::nearbyint(x);
    if (std::abs(x - nearest) <= 1e-9 * std::max(1.0, std::abs(x)))
        return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(x));
}

SampleBlock render(const Waveform &w, double sample_rate, double t0)
{
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw Error(ErrorCode::InvalidArgument, "sample rate must be positive and finite");
    if (!std::isfinite(t0))
        throw Error(ErrorCode::InvalidArgument, "start time must be finite");
    Evaluator evaluator;
    double d = evaluator.duration(w.node());
    if (std::isinf(d))
        throw Error(ErrorCode::UnboundedDuration, "cannot render unbounded " + std::string(w->name()));
    if (d < 0.0)
        throw Error(ErrorCode::NegativeDuration,
                    std::string(w->name()) + " has negative duration " + format_number(d) + " s");
    SampleBlock block;
    block.sample_rate = sample_rate;
    block.t0 = t0;
    std::size_t n = sample_count(d, sample_rate);
    block.values.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        block.values.push_back(evaluator.value_at(w.node(), block.time(k), t0));
    return block;
}

namespace {

Waveform expand_modulated(const Waveform &w, Kind expected)
{
    if (w.kind() != expected)
        throw Error(ErrorCode::InvalidArgument,
                    "expected " + std::string(kind_name(expected)) + ", got " + std::string(w->name()));
    Waveform carrier(w->child("carrier"));
    Waveform modulation(w->child("modulation"));
    Waveform amplitude(w->child("amplitude"));
    Waveform phase(w->child("phase"));
    Scalar carrier_frequency(carrier->child("frequency"));
    // The expansion is configured with the original's effective duration, so
    // the new Const and Sum parameters can never extend or shorten it.
    Scalar d = duration_expr(w).expr();
    if (expected == Kind::SineFM) {
        Waveform frequency = wave_sum({constant(carrier_frequency, d), modulation});
        return sine(amplitude, frequency, phase, d, carrier);
    }
    Waveform total_phase = wave_sum({modulation, phase});
    return sine(amplitude, constant(carrier_frequency, d), total_phase, d, carrier);
}

} // namespace

Waveform expand_sine_fm(const Waveform &w) { return expand_modulated(w, Kind::SineFM); }
Waveform expand_sine_pm(const Waveform &w) { return expand_modulated(w, Kind::SinePM); }

} // namespace pulseir
