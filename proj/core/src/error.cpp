#include "pulseir/error.hpp"

#include <utility>

namespace pulseir {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::Arity: return "Arity";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::CategoryViolation: return "CategoryViolation";
    case ErrorCode::ClockReplacement: return "ClockReplacement";
    case ErrorCode::PhaseMode: return "PhaseMode";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::SingularPower: return "SingularPower";
    case ErrorCode::UnboundedDuration: return "UnboundedDuration";
    case ErrorCode::NegativeDuration: return "NegativeDuration";
    case ErrorCode::NegativeTime: return "NegativeTime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnsupportedWaveform: return "UnsupportedWaveform";
    case ErrorCode::ContextState: return "ContextState";
    case ErrorCode::Parse: return "Parse";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, std::string message)
    : code_(code), message_(std::move(message))
{
    refresh();
}

std::string Error::path_string() const
{
    std::string out;
    for (const auto &label : path_) {
        if (!out.empty())
            out += '/';
        out += label;
    }
    return out;
}

void Error::prepend_path(std::string label)
{
    path_.insert(path_.begin(), std::move(label));
    refresh();
}

void Error::set_pass(std::size_t index, std::string name)
{
    pass_index_ = index;
    pass_name_ = std::move(name);
    refresh();
}

void Error::set_channel(std::string channel)
{
    channel_ = std::move(channel);
    refresh();
}

void Error::refresh()
{
    what_ = std::string(to_string(code_));
    what_ += ": ";
    what_ += message_;
    if (pass_index_) {
        what_ += " [pass ";
        what_ += std::to_string(*pass_index_);
        if (!pass_name_.empty()) {
            what_ += " (" + pass_name_ + ")";
        }
        what_ += ']';
    }
    if (!channel_.empty())
        what_ += " [channel " + channel_ + ']';
    if (!path_.empty())
        what_ += " [path " + path_string() + ']';
}

} // namespace pulseir
