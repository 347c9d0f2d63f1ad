// Duration algebra.
//
//   leaf kinds            configured duration
//   Sine                  min(configured, amplitude, frequency, phase)
//   SineFM / SinePM       min(configured, modulation, amplitude, phase)
//   Product / Div         min over items
//   Sum / Sub             max over items
//   Neg                   duration of the item
//   Sequence              sum over items
//   Clock / ClockSeq      configured, possibly unbounded
//
// Reference clocks and carriers are not parameters of the waveform's value
// domain, so they never shorten it.
#include "pulseir/error.hpp"
#include "pulseir/waveform.hpp"

#include "duration_builder.hpp"

#include <unordered_map>

namespace pulseir {

namespace detail {

Duration DurationBuilder::of(const NodePtr &w)
{
    if (auto it = memo_.find(w.get()); it != memo_.end())
        return it->second;
    Duration d = compute(w);
    memo_.emplace(w.get(), d);
    return d;
}

Duration DurationBuilder::compute(const NodePtr &w)
{
    switch (w->kind()) {
    case Kind::Sine:
        return min_duration({configured_duration(w), of(w->child("amplitude")), of(w->child("frequency")),
                             of(w->child("phase"))});
    case Kind::SineFM:
    case Kind::SinePM:
        return min_duration({configured_duration(w), of(w->child("modulation")), of(w->child("amplitude")),
                             of(w->child("phase"))});
    case Kind::WaveformProduct:
    case Kind::WaveformDiv:
        return min_duration(items(w));
    case Kind::WaveformSum:
    case Kind::WaveformSub:
        return max_duration(items(w));
    case Kind::WaveformNeg:
        return of(w->children().front().node);
    case Kind::Sequence:
        return sum_duration(items(w));
    default:
        return configured_duration(w);
    }
}

std::vector<Duration> DurationBuilder::items(const NodePtr &w)
{
    std::vector<Duration> out;
    out.reserve(w->children().size());
    for (const auto &edge : w->children())
        out.push_back(of(edge.node));
    return out;
}

} // namespace detail

Duration min_duration(const std::vector<Duration> &items)
{
    std::vector<Scalar> bounded;
    for (const auto &d : items) {
        if (!d.is_unbounded())
            bounded.push_back(d.expr());
    }
    if (bounded.empty())
        return Duration::unbounded();
    if (bounded.size() == 1)
        return bounded.front();
    return min(std::move(bounded));
}

Duration max_duration(const std::vector<Duration> &items)
{
    std::vector<Scalar> bounded;
    for (const auto &d : items) {
        if (d.is_unbounded())
            return Duration::unbounded();
        bounded.push_back(d.expr());
    }
    if (bounded.empty())
        return Scalar(0.0);
    if (bounded.size() == 1)
        return bounded.front();
    return max(std::move(bounded));
}

Duration sum_duration(const std::vector<Duration> &items)
{
    std::vector<Scalar> bounded;
    for (const auto &d : items) {
        if (d.is_unbounded())
            return Duration::unbounded();
        bounded.push_back(d.expr());
    }
    if (bounded.empty())
        return Scalar(0.0);
    if (bounded.size() == 1)
        return bounded.front();
    return sum(std::move(bounded));
}

Duration configured_duration(const NodePtr &w)
{
    if (!w || w->category() != Category::Waveform)
        throw Error(ErrorCode::CategoryViolation, "duration requested for a non-waveform node");
    if (w->kind() == Kind::ClockSeq) {
        std::vector<Duration> parts;
        for (const auto &edge : w->children())
            parts.push_back(configured_duration(edge.node));
        return sum_duration(parts);
    }
    if (const auto &d = w->child("duration"))
        return Scalar(d);
    if (w->kind() == Kind::Clock)
        return Duration::unbounded();
    throw Error(ErrorCode::Schema, std::string(w->name()) + " has no configured duration");
}

Duration duration_expr(const NodePtr &waveform)
{
    if (!waveform || waveform->category() != Category::Waveform)
        throw Error(ErrorCode::CategoryViolation, "duration requested for a non-waveform node");
    detail::DurationBuilder builder;
    return builder.of(waveform);
}

Duration duration_expr(const Waveform &w) { return duration_expr(w.node()); }

} // namespace pulseir
