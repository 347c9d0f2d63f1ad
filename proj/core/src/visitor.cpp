#include "pulseir/visitor.hpp"

#include "pulseir/error.hpp"

namespace pulseir {

namespace {

template <typename F>
auto along_edge(std::vector<std::string> &path, const std::string &label, F &&f) -> decltype(f())
{
    path.push_back(label);
    try {
        auto result = f();
        path.pop_back();
        return result;
    } catch (Error &e) {
        path.pop_back();
        e.prepend_path(label);
        throw;
    }
}

void check_category(const NodePtr &before, const NodePtr &after)
{
    if (!after)
        throw Error(ErrorCode::InvalidArgument, "transformer produced no node for " + std::string(before->name()));
    if (after->category() != before->category()) {
        throw Error(ErrorCode::CategoryViolation, "transformer replaced " + std::string(before->name()) + " with " +
                                                      std::string(after->name()));
    }
}

} // namespace

NodePtr Visitor::run(const NodePtr &root)
{
    visit(root);
    return root;
}

void Visitor::visit(const NodePtr &root)
{
    seen_.clear();
    path_.clear();
    dispatch(root);
}

bool Visitor::handle(std::string_view, const NodePtr &) { return false; }

void Visitor::generic_visit(const NodePtr &node) { visit_children(node); }

void Visitor::visit_children(const NodePtr &node)
{
    for (const auto &edge : node->children()) {
        along_edge(path_, edge.label, [&] {
            dispatch(edge.node);
            return 0;
        });
    }
}

void Visitor::dispatch(const NodePtr &node)
{
    if (!seen_.insert(node.get()).second)
        return;
    for (auto kind : lineage(node->kind())) {
        if (handle(kind, node))
            return;
    }
    generic_visit(node);
}

NodePtr Transformer::run(const NodePtr &root) { return transform(root); }

NodePtr Transformer::transform(const NodePtr &root)
{
    memo_.clear();
    path_.clear();
    NodePtr out = rewrite(root);
    memo_.clear();
    return out;
}

NodePtr Transformer::intercept(const NodePtr &) { return nullptr; }
NodePtr Transformer::handle(std::string_view, const NodePtr &) { return nullptr; }
NodePtr Transformer::generic_transform(const NodePtr &node) { return node; }

NodePtr Transformer::rewrite(const NodePtr &node)
{
    if (auto it = memo_.find(node.get()); it != memo_.end())
        return it->second;

    NodePtr out = intercept(node);
    if (out) {
        check_category(node, out);
    } else {
        std::vector<Edge> children;
        bool changed = false;
        for (const auto &edge : node->children()) {
            NodePtr child = along_edge(path_, edge.label, [&] { return rewrite(edge.node); });
            changed = changed || child != edge.node;
            children.push_back(Edge{edge.label, std::move(child)});
        }
        NodePtr current = changed ? node->rebuild(std::move(children)) : node;
        out = dispatch(current);
        check_category(node, out);
    }
    memo_.emplace(node.get(), out);
    return out;
}

NodePtr Transformer::dispatch(const NodePtr &node)
{
    for (auto kind : lineage(node->kind())) {
        if (NodePtr out = handle(kind, node))
            return out;
    }
    return generic_transform(node);
}

} // namespace pulseir
