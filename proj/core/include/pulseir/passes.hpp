#pragma once

#include "pulseir/error.hpp"
#include "pulseir/schedule.hpp"
#include "pulseir/visitor.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace pulseir {

using Bindings = std::map<std::string, double>;

/// Var(key) -> Num(value) for every bound key; the Num remembers its key.
class SubstitutePass : public Transformer {
public:
    explicit SubstitutePass(Bindings bindings) : bindings_(std::move(bindings)) {}
    std::string name() const override { return "substitute"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<SubstitutePass>(bindings_); }

protected:
    NodePtr handle(std::string_view kind, const NodePtr &node) override;

private:
    Bindings bindings_;
};

/// Num produced by substituting one of the keys -> Var(key).
class UnbindPass : public Transformer {
public:
    explicit UnbindPass(std::set<std::string> keys) : keys_(std::move(keys)) {}
    std::string name() const override { return "unbind"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<UnbindPass>(keys_); }

protected:
    NodePtr handle(std::string_view kind, const NodePtr &node) override;

private:
    std::set<std::string> keys_;
};

/// Replaces every maximal variable-free scalar operator subtree with the Num
/// of its exact value. Subtrees that cannot be evaluated (division by zero)
/// are left alone.
class FoldPass : public Transformer {
public:
    std::string name() const override { return "fold"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<FoldPass>(); }
    NodePtr run(const NodePtr &root) override;

protected:
    NodePtr intercept(const NodePtr &node) override;

private:
    struct State;
    std::shared_ptr<State> state_;
};

/// Algebraic clean-up repeated until nothing changes. Variable-free scalar
/// subtrees are left to FoldPass so the two passes commute.
class SimplifyPass : public Pass {
public:
    std::string name() const override { return "simplify"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<SimplifyPass>(); }
    NodePtr run(const NodePtr &root) override;
};

/// Rewrites SineFM and SinePM into continuous-mode Sine nodes.
class ExpandPass : public Transformer {
public:
    std::string name() const override { return "expand"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<ExpandPass>(); }

protected:
    NodePtr handle(std::string_view kind, const NodePtr &node) override;
};

struct DurationViolation {
    std::vector<std::string> path;
    NodePtr node;
    double duration = 0.0;
};

/// Collects waveform nodes with a negative resolved duration. Requires all
/// variables bound.
class ValidatePass : public Visitor {
public:
    std::string name() const override { return "validate"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<ValidatePass>(); }
    NodePtr run(const NodePtr &root) override;

    const std::vector<DurationViolation> &violations() const noexcept { return violations_; }

protected:
    void generic_visit(const NodePtr &node) override;

private:
    struct State;
    std::shared_ptr<State> state_;
    std::vector<DurationViolation> violations_;
};

NodePtr substitute(const NodePtr &root, const Bindings &bindings);
NodePtr unbind(const NodePtr &root, const std::set<std::string> &keys);
NodePtr fold_constants(const NodePtr &root);
NodePtr simplify(const NodePtr &root);
NodePtr expand_modulation(const NodePtr &root);

std::set<std::string> keys_of(const Bindings &bindings);

struct PassResult {
    NodePtr graph;
    std::vector<std::unique_ptr<Pass>> passes; // the instances used, in order

    template <typename P>
    const P *find() const
    {
        for (const auto &p : passes) {
            if (const auto *typed = dynamic_cast<const P *>(p.get()))
                return typed;
        }
        return nullptr;
    }
};

struct ChannelResult {
    Channel channel;
    std::optional<PassResult> result;
    std::optional<Error> error;

    bool ok() const noexcept { return result.has_value(); }
};

class Pipeline {
public:
    Pipeline() = default;
    Pipeline(const Pipeline &other);
    Pipeline &operator=(const Pipeline &other);
    Pipeline(Pipeline &&) noexcept = default;
    Pipeline &operator=(Pipeline &&) noexcept = default;

    Pipeline &add(std::unique_ptr<Pass> pass);
    template <typename P, typename... Args>
    Pipeline &emplace(Args &&...args)
    {
        return add(std::make_unique<P>(std::forward<Args>(args)...));
    }

    std::size_t size() const noexcept { return prototypes_.size(); }
    std::vector<std::string> names() const;

    /// Runs fresh copies of the passes in order. A failure is rethrown with
    /// the pass index and name attached.
    PassResult run(const NodePtr &graph) const;
    /// Runs an independent copy of the pipeline per channel, concurrently
    /// when requested. Results keep the map's channel order.
    std::vector<ChannelResult> run(const ChannelMap &channels, bool concurrent = true) const;

private:
    std::vector<std::unique_ptr<Pass>> prototypes_;
};

/// Builds a pipeline from text such as "substitute,fold,simplify,validate".
/// Options go in parentheses: "substitute(a=1,b=2)", "unbind(a,b)". A bare
/// "substitute" uses the given default bindings.
Pipeline parse_pipeline(std::string_view text, const Bindings &default_bindings = {});

/// Parses "key=value" with a non-empty key and a finite number.
std::pair<std::string, double> parse_binding(std::string_view text);

} // namespace pulseir
