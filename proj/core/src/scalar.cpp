#include "pulseir/scalar.hpp"

#include "pulseir/error.hpp"

#include <utility>

namespace pulseir {

Scalar::Scalar(NodePtr node) : node_(std::move(node))
{
    if (!node_)
        throw Error(ErrorCode::InvalidArgument, "null scalar node");
    if (node_->category() != Category::Scalar)
        throw Error(ErrorCode::CategoryViolation, "expected a scalar, got " + std::string(node_->name()));
}

Scalar num(double value) { return Scalar(Node::num(value)); }

Scalar var(std::string key) { return Scalar(Node::var(std::move(key))); }

Scalar scalar_op(Kind kind, std::vector<Scalar> items)
{
    if (category(kind) != Category::Scalar || !is_operator(kind))
        throw Error(ErrorCode::InvalidArgument, std::string(kind_name(kind)) + " is not a scalar operator");
    std::vector<Edge> children;
    children.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        children.push_back({index_label(i), items[i].node()});
    return Scalar(Node::make(kind, std::move(children)));
}

Scalar sum(std::vector<Scalar> items) { return scalar_op(Kind::ScalarSum, std::move(items)); }
Scalar product(std::vector<Scalar> items) { return scalar_op(Kind::ScalarProduct, std::move(items)); }
Scalar min(std::vector<Scalar> items) { return scalar_op(Kind::ScalarMin, std::move(items)); }
Scalar max(std::vector<Scalar> items) { return scalar_op(Kind::ScalarMax, std::move(items)); }
Scalar sub(Scalar a, Scalar b) { return scalar_op(Kind::ScalarSub, {std::move(a), std::move(b)}); }
Scalar div(Scalar a, Scalar b) { return scalar_op(Kind::ScalarDiv, {std::move(a), std::move(b)}); }
Scalar neg(Scalar a) { return scalar_op(Kind::ScalarNeg, {std::move(a)}); }

Scalar operator+(const Scalar &a, const Scalar &b) { return sum({a, b}); }
Scalar operator-(const Scalar &a, const Scalar &b) { return sub(a, b); }
Scalar operator*(const Scalar &a, const Scalar &b) { return product({a, b}); }
Scalar operator/(const Scalar &a, const Scalar &b) { return div(a, b); }
Scalar operator-(const Scalar &a) { return neg(a); }

} // namespace pulseir
