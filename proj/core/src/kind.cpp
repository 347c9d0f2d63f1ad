#include "pulseir/kind.hpp"

namespace pulseir {
namespace {

using namespace std::string_view_literals;

struct KindInfo {
    std::string_view name;
    Category category;
    bool is_operator;
    std::span<const std::string_view> lineage;
};

#define PULSEIR_LINEAGE(id, ...) constexpr std::array id{__VA_ARGS__}

PULSEIR_LINEAGE(kNum, "Num"sv, "Scalar"sv, "Node"sv);
PULSEIR_LINEAGE(kVar, "Var"sv, "Scalar"sv, "Node"sv);
PULSEIR_LINEAGE(kSSum, "ScalarSum"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSProduct, "ScalarProduct"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSSub, "ScalarSub"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSDiv, "ScalarDiv"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSNeg, "ScalarNeg"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSMin, "ScalarMin"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSMax, "ScalarMax"sv, "ScalarOperator"sv, "Scalar"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kConst, "Const"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kZero, "Zero"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kRamp, "Ramp"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kTriangle, "Triangle"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kGaussian, "Gaussian"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kClock, "Clock"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kClockSeq, "ClockSeq"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kSine, "Sine"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kSineFM, "SineFM"sv, "Sine"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kSinePM, "SinePM"sv, "Sine"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kPolynomial, "Polynomial"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kPower, "Power"sv, "Waveform"sv, "Node"sv);
PULSEIR_LINEAGE(kWSum, "WaveformSum"sv, "WaveformOperator"sv, "Waveform"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kWProduct, "WaveformProduct"sv, "WaveformOperator"sv, "Waveform"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kWSub, "WaveformSub"sv, "WaveformOperator"sv, "Waveform"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kWDiv, "WaveformDiv"sv, "WaveformOperator"sv, "Waveform"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kWNeg, "WaveformNeg"sv, "WaveformOperator"sv, "Waveform"sv, "OperatorNode"sv);
PULSEIR_LINEAGE(kSequence, "Sequence"sv, "WaveformOperator"sv, "Waveform"sv, "OperatorNode"sv);

#undef PULSEIR_LINEAGE

constexpr auto S = Category::Scalar;
constexpr auto W = Category::Waveform;

// Indexed by Kind.
constexpr std::array<KindInfo, kKindCount> kTable{{
    {"Num", S, false, kNum},
    {"Var", S, false, kVar},
    {"ScalarSum", S, true, kSSum},
    {"ScalarProduct", S, true, kSProduct},
    {"ScalarSub", S, true, kSSub},
    {"ScalarDiv", S, true, kSDiv},
    {"ScalarNeg", S, true, kSNeg},
    {"ScalarMin", S, true, kSMin},
    {"ScalarMax", S, true, kSMax},
    {"Const", W, false, kConst},
    {"Zero", W, false, kZero},
    {"Ramp", W, false, kRamp},
    {"Triangle", W, false, kTriangle},
    {"Gaussian", W, false, kGaussian},
    {"Clock", W, false, kClock},
    {"ClockSeq", W, false, kClockSeq},
    {"Sine", W, false, kSine},
    {"SineFM", W, false, kSineFM},
    {"SinePM", W, false, kSinePM},
    {"Polynomial", W, false, kPolynomial},
    {"Power", W, false, kPower},
    {"WaveformSum", W, true, kWSum},
    {"WaveformProduct", W, true, kWProduct},
    {"WaveformSub", W, true, kWSub},
    {"WaveformDiv", W, true, kWDiv},
    {"WaveformNeg", W, true, kWNeg},
    {"Sequence", W, true, kSequence},
}};

const KindInfo &info(Kind kind) noexcept
{
    return kTable[static_cast<std::size_t>(kind)];
}

} // namespace

std::string_view kind_name(Kind kind) noexcept { return info(kind).name; }

std::optional<Kind> kind_from_name(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kTable.size(); ++i) {
        if (kTable[i].name == name)
            return static_cast<Kind>(i);
    }
    return std::nullopt;
}

std::span<const std::string_view> lineage(Kind kind) noexcept { return info(kind).lineage; }

Category category(Kind kind) noexcept { return info(kind).category; }

bool is_operator(Kind kind) noexcept { return info(kind).is_operator; }

bool is_clock_like(Kind kind) noexcept { return kind == Kind::Clock || kind == Kind::ClockSeq; }

std::optional<Kind> operator_kind(std::string_view op, Category cat) noexcept
{
    if (cat == Category::Scalar) {
        if (op == "Sum") return Kind::ScalarSum;
        if (op == "Product") return Kind::ScalarProduct;
        if (op == "Sub") return Kind::ScalarSub;
        if (op == "Div") return Kind::ScalarDiv;
        if (op == "Neg") return Kind::ScalarNeg;
        if (op == "Min") return Kind::ScalarMin;
        if (op == "Max") return Kind::ScalarMax;
        return std::nullopt;
    }
    if (op == "Sum") return Kind::WaveformSum;
    if (op == "Product") return Kind::WaveformProduct;
    if (op == "Sub") return Kind::WaveformSub;
    if (op == "Div") return Kind::WaveformDiv;
    if (op == "Neg") return Kind::WaveformNeg;
    return std::nullopt;
}

std::array<Kind, kKindCount> all_kinds() noexcept
{
    std::array<Kind, kKindCount> out{};
    for (std::size_t i = 0; i < kKindCount; ++i)
        out[i] = static_cast<Kind>(i);
    return out;
}

} // namespace pulseir
