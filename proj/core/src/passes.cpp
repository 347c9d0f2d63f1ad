#include "pulseir/passes.hpp"

#include "pulseir/eval.hpp"

#include "resolver.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <future>

namespace pulseir {

namespace {

bool is_num(const NodePtr &n, double value) { return n->kind() == Kind::Num && n->value() == value; }

// Var-free test with results cached for the lifetime of the cache. Nodes are
// kept alive so their addresses cannot be reused while cached.
class VarFreeCache {
public:
    bool operator()(const NodePtr &node)
    {
        if (auto it = memo_.find(node.get()); it != memo_.end())
            return it->second;
        bool free = detail::is_var_free(node, memo_);
        keep_.push_back(node);
        return free;
    }

private:
    std::unordered_map<const Node *, bool> memo_;
    std::vector<NodePtr> keep_;
};

std::vector<Edge> relabel(std::vector<NodePtr> items)
{
    std::vector<Edge> edges;
    edges.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        edges.push_back(Edge{index_label(i), std::move(items[i])});
    return edges;
}

class SimplifyStep : public Transformer {
public:
    std::string name() const override { return "simplify-step"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<SimplifyStep>(); }

protected:
    NodePtr handle(std::string_view kind, const NodePtr &node) override
    {
        if (kind == "ScalarOperator")
            return scalar(node);
        if (kind == "WaveformOperator")
            return waveform(node);
        return nullptr;
    }

private:
    NodePtr scalar(const NodePtr &node)
    {
        // Constant subtrees belong to fold.
        if (var_free_(node))
            return node;
        auto children = node->children();
        switch (node->kind()) {
        case Kind::ScalarSum:
        case Kind::ScalarProduct:
        case Kind::ScalarMin:
        case Kind::ScalarMax: {
            std::vector<NodePtr> items;
            for (const auto &edge : children) {
                const auto &c = edge.node;
                if (c->kind() == node->kind() && !var_free_(c)) {
                    for (const auto &inner : c->children())
                        items.push_back(inner.node);
                } else if (node->kind() == Kind::ScalarSum && is_num(c, 0.0)) {
                    continue;
                } else if (node->kind() == Kind::ScalarProduct && is_num(c, 1.0)) {
                    continue;
                } else {
                    items.push_back(c);
                }
            }
            if (items.empty())
                return Node::num(node->kind() == Kind::ScalarProduct ? 1.0 : 0.0);
            if (items.size() == 1)
                return items.front();
            if (items.size() == children.size()) {
                bool same = true;
                for (std::size_t i = 0; same && i < items.size(); ++i)
                    same = items[i] == children[i].node;
                if (same)
                    return node;
            }
            return Node::make(node->kind(), relabel(std::move(items)));
        }
        case Kind::ScalarSub:
            return is_num(children[1].node, 0.0) ? children[0].node : node;
        case Kind::ScalarDiv:
            return is_num(children[1].node, 1.0) ? children[0].node : node;
        case Kind::ScalarNeg: {
            const auto &inner = children[0].node;
            return inner->kind() == Kind::ScalarNeg ? inner->children()[0].node : node;
        }
        default:
            return node;
        }
    }

    NodePtr waveform(const NodePtr &node)
    {
        auto children = node->children();
        switch (node->kind()) {
        case Kind::WaveformSum:
        case Kind::WaveformProduct:
        case Kind::Sequence: {
            std::vector<NodePtr> items;
            bool changed = false;
            for (const auto &edge : children) {
                const auto &c = edge.node;
                if (c->kind() == node->kind()) {
                    for (const auto &inner : c->children())
                        items.push_back(inner.node);
                    changed = true;
                } else if (node->kind() == Kind::Sequence && zero_duration(c)) {
                    changed = true;
                } else {
                    items.push_back(c);
                }
            }
            if (node->kind() == Kind::Sequence) {
                // Flattened items may themselves be empty.
                std::vector<NodePtr> kept;
                for (auto &item : items) {
                    if (zero_duration(item))
                        changed = true;
                    else
                        kept.push_back(std::move(item));
                }
                items = std::move(kept);
            }
            if (items.size() == 1)
                return items.front();
            if (!changed)
                return node;
            return Node::make(node->kind(), relabel(std::move(items)));
        }
        case Kind::WaveformNeg: {
            const auto &inner = children[0].node;
            return inner->kind() == Kind::WaveformNeg ? inner->children()[0].node : node;
        }
        default:
            return node;
        }
    }

    bool zero_duration(const NodePtr &w)
    {
        resolver_.pin(w);
        try {
            const auto &d = resolver_.exact_duration(w);
            return d && *d == 0;
        } catch (const Error &) {
            return false;
        }
    }

    VarFreeCache var_free_;
    detail::Resolver resolver_;
};

} // namespace

NodePtr SubstitutePass::handle(std::string_view kind, const NodePtr &node)
{
    if (kind != "Var")
        return nullptr;
    auto it = bindings_.find(node->key());
    if (it == bindings_.end())
        return nullptr;
    return Node::num(it->second, it->first);
}

NodePtr UnbindPass::handle(std::string_view kind, const NodePtr &node)
{
    if (kind != "Num")
        return nullptr;
    auto origin = node->origin();
    if (!origin || !keys_.contains(std::string(*origin)))
        return nullptr;
    return Node::var(std::string(*origin));
}

struct FoldPass::State {
    VarFreeCache var_free;
};

NodePtr FoldPass::run(const NodePtr &root)
{
    state_ = std::make_shared<State>();
    NodePtr out = transform(root);
    state_.reset();
    return out;
}

NodePtr FoldPass::intercept(const NodePtr &node)
{
    if (node->category() != Category::Scalar || !node->is_operator())
        return nullptr;
    if (!state_)
        state_ = std::make_shared<State>();
    if (!state_->var_free(node))
        return nullptr;
    try {
        detail::Resolver resolver;
        double value = detail::to_double(resolver.exact_scalar(node));
        if (!std::isfinite(value))
            return nullptr;
        return Node::num(value);
    } catch (const Error &) {
        return nullptr;
    }
}

NodePtr SimplifyPass::run(const NodePtr &root)
{
    NodePtr current = root;
    for (;;) {
        SimplifyStep step;
        NodePtr next = step.transform(current);
        if (next == current)
            return current;
        current = std::move(next);
    }
}

NodePtr ExpandPass::handle(std::string_view kind, const NodePtr &node)
{
    if (kind == "SineFM")
        return expand_sine_fm(Waveform(node)).node();
    if (kind == "SinePM")
        return expand_sine_pm(Waveform(node)).node();
    return nullptr;
}

struct ValidatePass::State {
    detail::Resolver resolver;
};

NodePtr ValidatePass::run(const NodePtr &root)
{
    violations_.clear();
    state_ = std::make_shared<State>();
    state_->resolver.pin(root);
    visit(root);
    state_.reset();
    return root;
}

void ValidatePass::generic_visit(const NodePtr &node)
{
    if (node->category() == Category::Waveform) {
        if (!state_)
            state_ = std::make_shared<State>();
        double d = state_->resolver.duration(node);
        if (d < 0.0)
            violations_.push_back(DurationViolation{path(), node, d});
    }
    visit_children(node);
}

NodePtr substitute(const NodePtr &root, const Bindings &bindings) { return SubstitutePass(bindings).run(root); }
NodePtr unbind(const NodePtr &root, const std::set<std::string> &keys) { return UnbindPass(keys).run(root); }
NodePtr fold_constants(const NodePtr &root) { return FoldPass().run(root); }
NodePtr simplify(const NodePtr &root) { return SimplifyPass().run(root); }
NodePtr expand_modulation(const NodePtr &root) { return ExpandPass().run(root); }

std::set<std::string> keys_of(const Bindings &bindings)
{
    std::set<std::string> keys;
    for (const auto &[k, v] : bindings)
        keys.insert(k);
    return keys;
}

Pipeline::Pipeline(const Pipeline &other)
{
    for (const auto &p : other.prototypes_)
        prototypes_.push_back(p->clone());
}

Pipeline &Pipeline::operator=(const Pipeline &other)
{
    if (this != &other) {
        Pipeline copy(other);
        prototypes_ = std::move(copy.prototypes_);
    }
    return *this;
}

Pipeline &Pipeline::add(std::unique_ptr<Pass> pass)
{
    if (!pass)
        throw Error(ErrorCode::InvalidArgument, "null pass");
    prototypes_.push_back(std::move(pass));
    return *this;
}

std::vector<std::string> Pipeline::names() const
{
    std::vector<std::string> out;
    for (const auto &p : prototypes_)
        out.push_back(p->name());
    return out;
}

PassResult Pipeline::run(const NodePtr &graph) const
{
    PassResult result;
    result.graph = graph;
    for (std::size_t i = 0; i < prototypes_.size(); ++i) {
        auto pass = prototypes_[i]->clone();
        try {
            result.graph = pass->run(result.graph);
        } catch (Error &e) {
            e.set_pass(i, pass->name());
            throw;
        }
        result.passes.push_back(std::move(pass));
    }
    return result;
}

std::vector<ChannelResult> Pipeline::run(const ChannelMap &channels, bool concurrent) const
{
    auto one = [this](const Channel &ch, const Waveform &w) {
        ChannelResult out{ch, std::nullopt, std::nullopt};
        try {
            out.result = run(w.node());
        } catch (Error &e) {
            e.set_channel(ch.display_name());
            out.error = std::move(e);
        } catch (const std::exception &e) {
            Error err(ErrorCode::InvalidArgument, e.what());
            err.set_channel(ch.display_name());
            out.error = std::move(err);
        }
        return out;
    };
    std::vector<ChannelResult> results;
    if (!concurrent) {
        for (const auto &[ch, w] : channels)
            results.push_back(one(ch, w));
        return results;
    }
    std::vector<std::future<ChannelResult>> pending;
    for (const auto &[ch, w] : channels)
        pending.push_back(std::async(std::launch::async, one, ch, w));
    for (auto &f : pending)
        results.push_back(f.get());
    return results;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

// Splits on commas outside parentheses.
std::vector<std::string_view> split_top(std::string_view text)
{
    std::vector<std::string_view> parts;
    int depth = 0;
    std::size_t begin = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '(')
            ++depth;
        else if (text[i] == ')')
            --depth;
        if (depth < 0)
            throw Error(ErrorCode::InvalidArgument, "unbalanced ')' in pass list");
        if (text[i] == ',' && depth == 0) {
            parts.push_back(trim(text.substr(begin, i - begin)));
            begin = i + 1;
        }
    }
    if (depth != 0)
        throw Error(ErrorCode::InvalidArgument, "unbalanced '(' in pass list");
    parts.push_back(trim(text.substr(begin)));
    return parts;
}

std::unique_ptr<Pass> make_pass(std::string_view spec, const Bindings &default_bindings)
{
    std::string_view name = spec;
    std::optional<std::string_view> args;
    if (auto open = spec.find('('); open != std::string_view::npos) {
        if (spec.back() != ')')
            throw Error(ErrorCode::InvalidArgument, "malformed pass '" + std::string(spec) + "'");
        name = trim(spec.substr(0, open));
        args = trim(spec.substr(open + 1, spec.size() - open - 2));
    }
    auto no_args = [&] {
        if (args && !args->empty())
            throw Error(ErrorCode::InvalidArgument, "pass '" + std::string(name) + "' takes no options");
    };
    if (name == "substitute") {
        if (!args || args->empty())
            return std::make_unique<SubstitutePass>(default_bindings);
        Bindings bindings;
        for (auto part : split_top(*args))
            bindings.insert_or_assign(parse_binding(part).first, parse_binding(part).second);
        return std::make_unique<SubstitutePass>(std::move(bindings));
    }
    if (name == "unbind") {
        std::set<std::string> keys;
        if (!args || args->empty()) {
            keys = keys_of(default_bindings);
        } else {
            for (auto part : split_top(*args)) {
                if (part.empty())
                    throw Error(ErrorCode::InvalidArgument, "empty key in unbind");
                keys.insert(std::string(part));
            }
        }
        return std::make_unique<UnbindPass>(std::move(keys));
    }
    if (name == "fold") {
        no_args();
        return std::make_unique<FoldPass>();
    }
    if (name == "simplify") {
        no_args();
        return std::make_unique<SimplifyPass>();
    }
    if (name == "expand") {
        no_args();
        return std::make_unique<ExpandPass>();
    }
    if (name == "validate") {
        no_args();
        return std::make_unique<ValidatePass>();
    }
    throw Error(ErrorCode::InvalidArgument, "unknown pass '" + std::string(name) + "'");
}

} // namespace

Pipeline parse_pipeline(std::string_view text, const Bindings &default_bindings)
{
    Pipeline pipeline;
    if (trim(text).empty())
        return pipeline;
    for (auto part : split_top(text)) {
        if (part.empty())
            throw Error(ErrorCode::InvalidArgument, "empty pass name in '" + std::string(text) + "'");
        pipeline.add(make_pass(part, default_bindings));
    }
    return pipeline;
}

std::pair<std::string, double> parse_binding(std::string_view text)
{
    auto eq = text.find('=');
    if (eq == std::string_view::npos)
        throw Error(ErrorCode::InvalidArgument, "binding '" + std::string(text) + "' is not key=value");
    auto key = trim(text.substr(0, eq));
    auto value = trim(text.substr(eq + 1));
    if (key.empty())
        throw Error(ErrorCode::InvalidArgument, "binding '" + std::string(text) + "' has an empty key");
    double v = 0.0;
    auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || end != value.data() + value.size() || !std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, "binding '" + std::string(text) + "' has a bad value");
    return {std::string(key), v};
}

} // namespace pulseir
