#pragma once

#include "pulseir/waveform.hpp"

#include <unordered_map>
#include <vector>

namespace pulseir::detail {

// Memoizing construction of symbolic durations; one instance shares the
// expressions it builds across every node it is asked about.
class DurationBuilder {
public:
    Duration of(const NodePtr &w);

private:
    Duration compute(const NodePtr &w);
    std::vector<Duration> items(const NodePtr &w);

    std::unordered_map<const Node *, Duration> memo_;
};

} // namespace pulseir::detail
