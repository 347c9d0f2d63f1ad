#include "pulseir/node.hpp"

#include "pulseir/error.hpp"

#include <charconv>
#include <functional>
#include <set>
#include <utility>

namespace pulseir {
namespace {

enum class Slot { Scalar, Waveform, ClockRef, ClockOnly };

struct Param {
    std::string_view label;
    Slot slot;
};

constexpr Param kDurationParam{"duration", Slot::Scalar};

std::vector<Param> fixed_schema(Kind kind, PhaseMode mode)
{
    switch (kind) {
    case Kind::Const: return {{"value", Slot::Scalar}, kDurationParam};
    case Kind::Zero: return {kDurationParam};
    case Kind::Ramp: return {{"start_value", Slot::Scalar}, {"stop_value", Slot::Scalar}, kDurationParam};
    case Kind::Triangle: return {{"amplitude", Slot::Scalar}, kDurationParam};
    case Kind::Gaussian: return {{"amplitude", Slot::Scalar}, {"sigma", Slot::Scalar}, kDurationParam};
    case Kind::Clock: return {{"frequency", Slot::Scalar}, {"phase", Slot::Scalar}};
    case Kind::Sine: {
        std::vector<Param> params{{"amplitude", Slot::Waveform},
                                  {"frequency", Slot::Waveform},
                                  {"phase", Slot::Waveform},
                                  kDurationParam};
        if (mode == PhaseMode::Continuous)
            params.push_back({"ref_clock", Slot::ClockRef});
        return params;
    }
    case Kind::SineFM:
    case Kind::SinePM:
        return {{"carrier", Slot::ClockOnly},
                {"modulation", Slot::Waveform},
                {"amplitude", Slot::Waveform},
                {"phase", Slot::Waveform},
                kDurationParam};
    case Kind::Power: return {{"scale", Slot::Scalar}, {"exponent", Slot::Scalar}, kDurationParam};
    default: return {};
    }
}

void check_slot(const Edge &edge, Slot slot)
{
    if (!edge.node)
        throw Error(ErrorCode::InvalidArgument, "null child '" + edge.label + "'");
    const Node &child = *edge.node;
    switch (slot) {
    case Slot::Scalar:
        if (child.category() != Category::Scalar)
            throw Error(ErrorCode::CategoryViolation,
                        "parameter '" + edge.label + "' expects a scalar, got " + std::string(child.name()));
        return;
    case Slot::Waveform:
        if (child.category() != Category::Waveform)
            throw Error(ErrorCode::CategoryViolation,
                        "parameter '" + edge.label + "' expects a waveform, got " + std::string(child.name()));
        return;
    case Slot::ClockRef:
    case Slot::ClockOnly: {
        if (child.category() != Category::Waveform)
            throw Error(ErrorCode::CategoryViolation,
                        "parameter '" + edge.label + "' expects a clock, got " + std::string(child.name()));
        bool ok = slot == Slot::ClockOnly ? child.kind() == Kind::Clock : is_clock_like(child.kind());
        if (!ok)
            throw Error(ErrorCode::ClockReplacement,
                        "parameter '" + edge.label + "' expects a clock, got " + std::string(child.name()));
        return;
    }
    }
}

void check_labels(Kind kind, const std::vector<Edge> &children, const std::vector<Param> &schema)
{
    bool match = children.size() == schema.size();
    for (std::size_t i = 0; match && i < schema.size(); ++i)
        match = children[i].label == schema[i].label;
    if (!match) {
        std::string expected;
        for (const auto &p : schema) {
            if (!expected.empty())
                expected += ", ";
            expected += p.label;
        }
        std::string got;
        for (const auto &c : children) {
            if (!got.empty())
                got += ", ";
            got += c.label;
        }
        throw Error(ErrorCode::Schema, std::string(kind_name(kind)) + " expects parameters [" + expected +
                                           "], got [" + got + "]");
    }
    for (std::size_t i = 0; i < schema.size(); ++i)
        check_slot(children[i], schema[i].slot);
}

void check_items(Kind kind, const std::vector<Edge> &children, Slot slot)
{
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (children[i].label != index_label(i))
            throw Error(ErrorCode::Schema, std::string(kind_name(kind)) + " item " + std::to_string(i) +
                                               " has label '" + children[i].label + "'");
        check_slot(children[i], slot);
    }
}

void check_arity(Kind kind, std::size_t n)
{
    auto fail = [&](std::string_view want) {
        throw Error(ErrorCode::Arity, std::string(kind_name(kind)) + " takes " + std::string(want) + " item(s), got " +
                                          std::to_string(n));
    };
    switch (kind) {
    case Kind::ScalarNeg:
    case Kind::WaveformNeg:
        if (n != 1)
            fail("exactly 1");
        break;
    case Kind::ScalarSub:
    case Kind::ScalarDiv:
    case Kind::WaveformSub:
    case Kind::WaveformDiv:
        if (n != 2)
            fail("exactly 2");
        break;
    case Kind::Sequence:
        break;
    default:
        if (n < 1)
            fail("at least 1");
        break;
    }
}

void validate(Kind kind, const std::vector<Edge> &children, PhaseMode mode)
{
    switch (kind) {
    case Kind::Num:
    case Kind::Var:
        throw Error(ErrorCode::InvalidArgument, "leaf scalars are built with Node::num / Node::var");
    case Kind::ClockSeq: {
        if (children.empty())
            throw Error(ErrorCode::Arity, "ClockSeq takes at least 1 clock");
        check_items(kind, children, Slot::ClockOnly);
        for (std::size_t i = 0; i + 1 < children.size(); ++i) {
            if (!children[i].node->child("duration"))
                throw Error(ErrorCode::Schema, "ClockSeq item " + std::to_string(i) +
                                                   " is unbounded but not the last item");
        }
        return;
    }
    case Kind::Clock: {
        auto schema = fixed_schema(kind, mode);
        if (children.size() == 3)
            schema.push_back(kDurationParam);
        check_labels(kind, children, schema);
        return;
    }
    case Kind::Polynomial: {
        if (children.size() < 2)
            throw Error(ErrorCode::Arity, "Polynomial takes at least one coefficient");
        std::vector<std::string> labels;
        std::vector<Param> schema;
        labels.reserve(children.size());
        for (std::size_t i = 0; i + 1 < children.size(); ++i)
            labels.push_back("c" + std::to_string(i));
        for (const auto &l : labels)
            schema.push_back({l, Slot::Scalar});
        schema.push_back(kDurationParam);
        check_labels(kind, children, schema);
        return;
    }
    case Kind::Sine: {
        bool has_ref = !children.empty() && children.back().label == "ref_clock";
        if (mode == PhaseMode::Continuous && !has_ref)
            throw Error(ErrorCode::PhaseMode, "continuous phase mode requires a reference clock");
        if (mode == PhaseMode::Absolute && has_ref)
            throw Error(ErrorCode::PhaseMode, "absolute phase mode does not take a reference clock");
        check_labels(kind, children, fixed_schema(kind, mode));
        return;
    }
    default:
        break;
    }
    if (is_operator(kind)) {
        check_arity(kind, children.size());
        check_items(kind, children, category(kind) == Category::Scalar ? Slot::Scalar : Slot::Waveform);
        return;
    }
    check_labels(kind, children, fixed_schema(kind, mode));
}

const NodePtr kNoChild;

} // namespace

std::string_view to_string(PhaseMode mode) noexcept
{
    return mode == PhaseMode::Absolute ? "absolute" : "continuous";
}

Node::Node(Private, Kind kind, std::vector<Edge> children, double value, std::string text, bool has_origin,
           PhaseMode mode)
    : kind_(kind), children_(std::move(children)), value_(value), text_(std::move(text)),
      has_origin_(has_origin), mode_(mode)
{
}

const NodePtr &Node::child(std::string_view label) const noexcept
{
    for (const auto &edge : children_) {
        if (edge.label == label)
            return edge.node;
    }
    return kNoChild;
}

double Node::value() const
{
    if (kind_ != Kind::Num)
        throw Error(ErrorCode::InvalidArgument, std::string(name()) + " has no numeric value");
    return value_;
}

const std::string &Node::key() const
{
    if (kind_ != Kind::Var)
        throw Error(ErrorCode::InvalidArgument, std::string(name()) + " has no key");
    return text_;
}

std::optional<std::string_view> Node::origin() const
{
    if (kind_ == Kind::Num && has_origin_)
        return std::string_view(text_);
    return std::nullopt;
}

PhaseMode Node::phase_mode() const
{
    if (kind_ != Kind::Sine)
        throw Error(ErrorCode::InvalidArgument, std::string(name()) + " has no phase mode");
    return mode_;
}

NodePtr Node::num(double value, std::optional<std::string> origin)
{
    bool has_origin = origin.has_value();
    return std::make_shared<const Node>(Private{}, Kind::Num, std::vector<Edge>{}, value,
                                        std::move(origin).value_or(std::string{}), has_origin,
                                        PhaseMode::Absolute);
}

NodePtr Node::var(std::string key)
{
    if (key.empty())
        throw Error(ErrorCode::InvalidArgument, "variable key must not be empty");
    return std::make_shared<const Node>(Private{}, Kind::Var, std::vector<Edge>{}, 0.0, std::move(key), false,
                                        PhaseMode::Absolute);
}

NodePtr Node::make(Kind kind, std::vector<Edge> children, PhaseMode mode)
{
    if (kind != Kind::Sine)
        mode = PhaseMode::Absolute;
    validate(kind, children, mode);
    return std::make_shared<const Node>(Private{}, kind, std::move(children), 0.0, std::string{}, false, mode);
}

NodePtr Node::rebuild(std::vector<Edge> children) const
{
    if (kind_ == Kind::Num || kind_ == Kind::Var) {
        if (!children.empty())
            throw Error(ErrorCode::Schema, std::string(name()) + " is a leaf");
        return std::make_shared<const Node>(Private{}, kind_, std::vector<Edge>{}, value_, text_, has_origin_,
                                            mode_);
    }
    return make(kind_, std::move(children), mode_);
}

bool identity_equal(const NodePtr &a, const NodePtr &b) noexcept { return a.get() == b.get(); }

bool structural_equal(const NodePtr &a, const NodePtr &b)
{
    std::set<std::pair<const Node *, const Node *>> known;
    std::function<bool(const Node *, const Node *)> eq = [&](const Node *x, const Node *y) -> bool {
        if (x == y)
            return true;
        if (!x || !y)
            return false;
        if (known.count({x, y}))
            return true;
        if (x->kind() != y->kind())
            return false;
        switch (x->kind()) {
        case Kind::Num:
            if (!(x->value() == y->value() || (x->value() != x->value() && y->value() != y->value())))
                return false;
            if (x->origin() != y->origin())
                return false;
            break;
        case Kind::Var:
            if (x->key() != y->key())
                return false;
            break;
        case Kind::Sine:
            if (x->phase_mode() != y->phase_mode())
                return false;
            break;
        default:
            break;
        }
        auto xc = x->children();
        auto yc = y->children();
        if (xc.size() != yc.size())
            return false;
        for (std::size_t i = 0; i < xc.size(); ++i) {
            if (xc[i].label != yc[i].label || !eq(xc[i].node.get(), yc[i].node.get()))
                return false;
        }
        known.insert({x, y});
        return true;
    };
    return eq(a.get(), b.get());
}

std::string format_number(double value)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{})
        return "nan";
    return std::string(buf, end);
}

std::string index_label(std::size_t i) { return std::to_string(i); }

} // namespace pulseir
