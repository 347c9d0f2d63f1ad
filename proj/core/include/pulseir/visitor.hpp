#pragma once

#include "pulseir/node.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pulseir {

// A unit of a pipeline. Instances hold per-run state; pipelines clone a
// prototype for every run so state never leaks between runs or channels.
class Pass {
public:
    virtual ~Pass() = default;

    virtual std::string name() const = 0;
    /// A fresh instance with the same configuration and no run state.
    virtual std::unique_ptr<Pass> clone() const = 0;
    virtual NodePtr run(const NodePtr &root) = 0;
};

// Depth-first read-only traversal. Each node is dispatched once per run by
// walking its lineage most-specific first: the first handle() that returns
// true wins, otherwise generic_visit() runs. generic_visit() recurses into
// the children; a handler that wants the children visited calls
// visit_children().
class Visitor : public Pass {
public:
    NodePtr run(const NodePtr &root) override;
    void visit(const NodePtr &root);

protected:
    /// Return false to reject the node and continue the lineage search.
    virtual bool handle(std::string_view kind, const NodePtr &node);
    virtual void generic_visit(const NodePtr &node);
    void visit_children(const NodePtr &node);

    /// Edge labels from the root to the node being visited.
    const std::vector<std::string> &path() const noexcept { return path_; }

private:
    void dispatch(const NodePtr &node);

    std::unordered_set<const Node *> seen_;
    std::vector<std::string> path_;
};

// Bottom-up rewriting traversal. Children are transformed first; if any
// changed the node is rebuilt with the new children, then it is dispatched
// through the lineage like a visitor. A handler returns the replacement or
// nullptr to reject. Returning the node itself means unchanged, and an
// unchanged graph comes back as the identical instance.
//
// intercept() runs top-down before the children are touched; a non-null
// result replaces the whole subtree.
class Transformer : public Pass {
public:
    NodePtr run(const NodePtr &root) override;
    NodePtr transform(const NodePtr &root);

protected:
    virtual NodePtr intercept(const NodePtr &node);
    virtual NodePtr handle(std::string_view kind, const NodePtr &node);
    virtual NodePtr generic_transform(const NodePtr &node);

    const std::vector<std::string> &path() const noexcept { return path_; }

private:
    NodePtr rewrite(const NodePtr &node);
    NodePtr dispatch(const NodePtr &node);

    std::unordered_map<const Node *, NodePtr> memo_;
    std::vector<std::string> path_;
};

} // namespace pulseir
