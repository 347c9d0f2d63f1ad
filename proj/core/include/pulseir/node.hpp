#pragma once

#include "pulseir/kind.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pulseir {

enum class PhaseMode : std::uint8_t { Absolute, Continuous };

std::string_view to_string(PhaseMode mode) noexcept;

class Node;
using NodePtr = std::shared_ptr<const Node>;

struct Edge {
    std::string label;
    NodePtr node;
};

// An immutable vertex of the pulse graph.
//
// Parameter children are labeled with the parameter name, operator and
// sequence items with their index. A node never changes after construction;
// rewrites build new nodes and share every untouched child.
class Node {
public:
    Kind kind() const noexcept { return kind_; }
    Category category() const noexcept { return pulseir::category(kind_); }
    std::string_view name() const noexcept { return kind_name(kind_); }
    bool is_operator() const noexcept { return pulseir::is_operator(kind_); }

    std::span<const Edge> children() const noexcept { return children_; }
    /// Child with the given edge label, or nullptr.
    const NodePtr &child(std::string_view label) const noexcept;

    double value() const;                      // Num
    const std::string &key() const;            // Var
    std::optional<std::string_view> origin() const; // Num produced by substitution
    PhaseMode phase_mode() const;              // Sine

    static NodePtr num(double value, std::optional<std::string> origin = std::nullopt);
    static NodePtr var(std::string key);

    /// Builds and validates a non-leaf node. Children must follow the kind's
    /// schema (labels, order, categories).
    static NodePtr make(Kind kind, std::vector<Edge> children,
                        PhaseMode mode = PhaseMode::Absolute);

    /// Same kind and payload with replaced children; revalidated.
    NodePtr rebuild(std::vector<Edge> children) const;

private:
    struct Private {};

public:
    Node(Private, Kind kind, std::vector<Edge> children, double value, std::string text,
         bool has_origin, PhaseMode mode);

private:
    Kind kind_;
    std::vector<Edge> children_;
    double value_ = 0.0;
    std::string text_; // Var key or Num origin key
    bool has_origin_ = false;
    PhaseMode mode_ = PhaseMode::Absolute;
};

bool identity_equal(const NodePtr &a, const NodePtr &b) noexcept;
bool structural_equal(const NodePtr &a, const NodePtr &b);

/// Numeric literal formatting shared by DOT output and diagnostics: the
/// shortest text that round-trips.
std::string format_number(double value);

/// Item edge label for index i ("0", "1", ...).
std::string index_label(std::size_t i);

} // namespace pulseir
