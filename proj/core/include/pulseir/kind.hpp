#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace pulseir {

enum class Category : std::uint8_t { Scalar, Waveform };

enum class Kind : std::uint8_t {
    // scalars
    Num,
    Var,
    ScalarSum,
    ScalarProduct,
    ScalarSub,
    ScalarDiv,
    ScalarNeg,
    ScalarMin,
    ScalarMax,
    // waveforms
    Const,
    Zero,
    Ramp,
    Triangle,
    Gaussian,
    Clock,
    ClockSeq,
    Sine,
    SineFM,
    SinePM,
    Polynomial,
    Power,
    // waveform operators
    WaveformSum,
    WaveformProduct,
    WaveformSub,
    WaveformDiv,
    WaveformNeg,
    Sequence,
};

inline constexpr std::size_t kKindCount = static_cast<std::size_t>(Kind::Sequence) + 1;

std::string_view kind_name(Kind kind) noexcept;
std::optional<Kind> kind_from_name(std::string_view name) noexcept;

/// Dispatch order used by visitors: the kind itself first, then its
/// abstract ancestors, ending in either "Node" or "OperatorNode".
std::span<const std::string_view> lineage(Kind kind) noexcept;

Category category(Kind kind) noexcept;
bool is_operator(Kind kind) noexcept;
bool is_clock_like(Kind kind) noexcept;

/// Maps a bare operator name ("Sum", "Min", ...) to the scalar or waveform
/// operator kind. Returns nullopt if the name is not an operator of that
/// category.
std::optional<Kind> operator_kind(std::string_view op, Category category) noexcept;

std::array<Kind, kKindCount> all_kinds() noexcept;

} // namespace pulseir
