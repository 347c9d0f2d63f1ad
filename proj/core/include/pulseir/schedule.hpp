#pragma once

#include "pulseir/waveform.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pulseir {

// An abstract analog output. Two channels are equal only if one was copied
// from the other; the label is metadata.
class Channel {
public:
    /// Creates a new channel with a generated id ("ch<N>").
    explicit Channel(std::string label = {});
    /// Creates a new channel with an explicit id. Ids are not checked for
    /// uniqueness; identity still decides equality.
    Channel(std::string id, std::string label);

    const std::string &id() const noexcept;
    const std::string &label() const noexcept;
    /// Display name: "label.id", or just the id when the label is empty.
    std::string display_name() const;

    friend bool operator==(const Channel &a, const Channel &b) noexcept { return a.impl_ == b.impl_; }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// Channel to waveform map that iterates in order of first use.
class ChannelMap {
public:
    using value_type = std::pair<Channel, Waveform>;
    using const_iterator = std::vector<value_type>::const_iterator;

    const_iterator begin() const noexcept { return entries_.begin(); }
    const_iterator end() const noexcept { return entries_.end(); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }

    bool contains(const Channel &ch) const noexcept;
    /// Throws InvalidArgument if the channel is absent.
    const Waveform &at(const Channel &ch) const;
    const Waveform *find(const Channel &ch) const noexcept;
    /// Inserts or replaces.
    void set(const Channel &ch, Waveform w);

    std::vector<Channel> channels() const;

private:
    std::vector<value_type> entries_;
};

enum class ContextKind : std::uint8_t { Sequential, Parallel };

class Schedule;

// Closes the context it opened when it goes out of scope. During stack
// unwinding the close is skipped so the original error is not masked.
class ContextGuard {
public:
    ContextGuard(const ContextGuard &) = delete;
    ContextGuard &operator=(const ContextGuard &) = delete;
    ContextGuard(ContextGuard &&other) noexcept;
    ContextGuard &operator=(ContextGuard &&) = delete;
    ~ContextGuard() noexcept(false);

    /// Closes now; later destruction is a no-op.
    void close();

private:
    friend class Schedule;
    explicit ContextGuard(Schedule &s);

    Schedule *schedule_;
    int uncaught_;
};

// Builds a channel map through a stack of sequential and parallel time
// contexts. Padding is inserted symbolically and never resolved here.
class Schedule {
public:
    /// The root context is Sequential; its optional target pads the whole
    /// schedule.
    explicit Schedule(std::optional<Scalar> target_duration = std::nullopt);
    ~Schedule();
    Schedule(Schedule &&) noexcept;
    Schedule &operator=(Schedule &&) noexcept;

    void open(ContextKind kind, std::optional<Scalar> target_duration = std::nullopt);
    void close();
    [[nodiscard]] ContextGuard sequential(std::optional<Scalar> target_duration = std::nullopt);
    [[nodiscard]] ContextGuard parallel(std::optional<Scalar> target_duration = std::nullopt);

    void add(const Channel &ch, const Waveform &w);

    /// Closes the root context. Terminal: later add/open/finalize fail.
    const ChannelMap &finalize();

    bool finalized() const noexcept;
    /// Number of open contexts including the root.
    std::size_t depth() const noexcept;
    /// Requires finalize().
    const ChannelMap &result() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct Violation {
    Channel channel;
    std::vector<std::string> path; // edge labels from the channel root
    NodePtr node;
    double duration = 0.0; // resolved, negative

    std::string path_string() const;
    std::string describe() const;
};

/// Reports every unique waveform node with a negative resolved duration.
/// All variables must be bound.
std::vector<Violation> validate(const ChannelMap &channels);
std::vector<Violation> validate(const Channel &ch, const Waveform &w);

} // namespace pulseir
