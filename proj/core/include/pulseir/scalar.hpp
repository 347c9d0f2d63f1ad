#pragma once

#include "pulseir/node.hpp"

#include <string>
#include <type_traits>
#include <vector>

namespace pulseir {

// Typed handle over a scalar node. Numeric literals promote implicitly to
// Num, so `2.0 * var("t")` builds a ScalarProduct without evaluating.
class Scalar {
public:
    template <typename T>
        requires std::is_arithmetic_v<T>
    Scalar(T value) : node_(Node::num(static_cast<double>(value)))
    {
    }

    explicit Scalar(NodePtr node);

    const NodePtr &node() const noexcept { return node_; }
    const Node *operator->() const noexcept { return node_.get(); }
    Kind kind() const noexcept { return node_->kind(); }

private:
    NodePtr node_;
};

Scalar num(double value);
Scalar var(std::string key);

Scalar sum(std::vector<Scalar> items);
Scalar product(std::vector<Scalar> items);
Scalar min(std::vector<Scalar> items);
Scalar max(std::vector<Scalar> items);
Scalar sub(Scalar a, Scalar b);
Scalar div(Scalar a, Scalar b);
Scalar neg(Scalar a);

/// Generic scalar operator construction; arity is checked.
Scalar scalar_op(Kind kind, std::vector<Scalar> items);

Scalar operator+(const Scalar &a, const Scalar &b);
Scalar operator-(const Scalar &a, const Scalar &b);
Scalar operator*(const Scalar &a, const Scalar &b);
Scalar operator/(const Scalar &a, const Scalar &b);
Scalar operator-(const Scalar &a);

} // namespace pulseir
