#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pulseir {

enum class ErrorCode {
    Arity,
    Schema,
    CategoryViolation,
    ClockReplacement,
    PhaseMode,
    UnboundVariable,
    DivisionByZero,
    SingularPower,
    UnboundedDuration,
    NegativeDuration,
    NegativeTime,
    InvalidArgument,
    UnsupportedWaveform,
    ContextState,
    Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure in the library is reported through this type. The node path
// is the sequence of edge labels from the root of the graph being processed
// down to the node that failed; it is filled in while the stack unwinds.
class Error : public std::exception {
public:
    Error(ErrorCode code, std::string message);

    ErrorCode code() const noexcept { return code_; }
    const std::string &message() const noexcept { return message_; }
    const std::vector<std::string> &path() const noexcept { return path_; }
    std::string path_string() const;

    const std::optional<std::size_t> &pass_index() const noexcept { return pass_index_; }
    const std::string &pass_name() const noexcept { return pass_name_; }
    const std::string &channel() const noexcept { return channel_; }

    void prepend_path(std::string label);
    void set_pass(std::size_t index, std::string name);
    void set_channel(std::string channel);

    const char *what() const noexcept override { return what_.c_str(); }

private:
    void refresh();

    ErrorCode code_;
    std::string message_;
    std::vector<std::string> path_;
    std::optional<std::size_t> pass_index_;
    std::string pass_name_;
    std::string channel_;
    std::string what_;
};

} // namespace pulseir
