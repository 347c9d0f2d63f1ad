#pragma once

// Internal exact-arithmetic resolution shared by eval, schedule and targets.
//
// Scalar graphs only use Sum/Product/Sub/Div/Neg/Min/Max, so every bound
// scalar has an exact rational value. Resolving exactly and rounding once
// makes symbolic padding such as d + (D - d) come out as exactly D, which is
// what keeps schedule channels at identical durations.

#include "pulseir/node.hpp"
#include "pulseir/waveform.hpp"

#include "duration_builder.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pulseir::detail {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational &r);

class Resolver {
public:
    const Rational &exact_scalar(const NodePtr &scalar);
    double scalar(const NodePtr &scalar);

    /// Exact effective duration; nullopt means unbounded.
    const std::optional<Rational> &exact_duration(const NodePtr &waveform);
    /// Effective duration in seconds; +inf when unbounded.
    double duration(const NodePtr &waveform);

    /// Start offsets of a Sequence's items relative to the sequence start,
    /// rounded once from exact prefix sums.
    const std::vector<double> &item_offsets(const NodePtr &sequence);

    /// Keeps a graph alive for as long as its nodes are cached.
    void pin(const NodePtr &root);

private:
    DurationBuilder builder_;
    std::unordered_map<const Node *, Rational> exact_;
    std::unordered_map<const Node *, double> rounded_;
    std::unordered_map<const Node *, std::optional<Rational>> durations_;
    std::unordered_map<const Node *, double> duration_seconds_;
    std::unordered_map<const Node *, std::vector<double>> offsets_;
    std::unordered_set<NodePtr> pinned_;
};

/// True when no Var occurs anywhere below the node.
bool is_var_free(const NodePtr &node, std::unordered_map<const Node *, bool> &memo);

} // namespace pulseir::detail
