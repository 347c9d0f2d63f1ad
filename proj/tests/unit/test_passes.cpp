#include "generators.hpp"

#include <doctest.h>

#include <atomic>

using namespace pulseir;

namespace {

class CountVisitor : public Visitor {
public:
    std::string name() const override { return "count"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<CountVisitor>(); }
    int count = 0;

protected:
    void generic_visit(const NodePtr &node) override
    {
        ++count;
        Visitor::generic_visit(node);
    }
};

// Handles "Sine" but rejects SineFM nodes, so those fall through to the
// generic handler.
class SineVisitor : public Visitor {
public:
    std::string name() const override { return "sine"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<SineVisitor>(); }
    std::vector<std::string> handled;
    std::vector<std::string> generic;

protected:
    bool handle(std::string_view kind, const NodePtr &node) override
    {
        if (kind != "Sine" || node->kind() == Kind::SineFM)
            return false;
        handled.emplace_back(node->name());
        visit_children(node);
        return true;
    }
    void generic_visit(const NodePtr &node) override
    {
        if (node->category() == Category::Waveform && node->kind() != Kind::Const && node->kind() != Kind::Clock)
            generic.emplace_back(node->name());
        Visitor::generic_visit(node);
    }
};

class IdentityTransformer : public Transformer {
public:
    std::string name() const override { return "identity"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<IdentityTransformer>(); }
};

class SineToNum : public Transformer {
public:
    std::string name() const override { return "bad"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<SineToNum>(); }

protected:
    NodePtr handle(std::string_view kind, const NodePtr &) override
    {
        return kind == "Sine" ? Node::num(1.0) : nullptr;
    }
};

class ReplaceClock : public Transformer {
public:
    std::string name() const override { return "clock"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<ReplaceClock>(); }

protected:
    NodePtr handle(std::string_view kind, const NodePtr &) override
    {
        return kind == "Clock" ? constant(1.0, 1e-6).node() : nullptr;
    }
};

// Counts every node it sees across the lifetime of one instance.
class StatefulVisitor : public Visitor {
public:
    std::string name() const override { return "stateful"; }
    std::unique_ptr<Pass> clone() const override { return std::make_unique<StatefulVisitor>(); }
    int seen = 0;
    static inline std::atomic<int> max_seen{0};

    NodePtr run(const NodePtr &root) override
    {
        NodePtr out = Visitor::run(root);
        int prev = max_seen.load();
        while (seen > prev && !max_seen.compare_exchange_weak(prev, seen)) {
        }
        return out;
    }

protected:
    void generic_visit(const NodePtr &node) override
    {
        ++seen;
        Visitor::generic_visit(node);
    }
};

ErrorCode code_of(const std::function<void()> &f)
{
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return ErrorCode::Parse;
}

Scalar foo_sum() { return sum({1.0, var("foo")}); }

} // namespace

TEST_CASE("node-count visitor")
{
    CountVisitor v;
    Scalar s = foo_sum();
    NodePtr out = v.run(s.node());
    CHECK(identity_equal(out, s.node()));
    CHECK(v.count == 3);
}

TEST_CASE("visitor dispatches shared nodes once")
{
    Scalar shared = 2.0;
    Scalar s = sum({shared, shared * shared});
    CountVisitor v;
    v.run(s.node());
    CHECK(v.count == 3);
}

TEST_CASE("a rejecting handler lets the lineage search continue")
{
    Scalar d = 100e-9;
    Waveform plain = sine(1.0, 10e6, 0.0, d);
    Waveform fm = sine_fm(clock(10e6, 0.0), 0.0, 1.0, 0.0, d);
    SineVisitor v;
    v.run(sequence({plain, fm}).node());
    CHECK(v.handled == std::vector<std::string>{"Sine"});
    CHECK(v.generic == std::vector<std::string>{"Sequence", "SineFM"});
}

TEST_CASE("identity transformer returns the same instance")
{
    pulseir::testing::GraphGen gen(3);
    for (int i = 0; i < 20; ++i) {
        Waveform w = gen.any_waveform(4);
        IdentityTransformer t;
        CHECK(identity_equal(t.run(w.node()), w.node()));
    }
}

TEST_CASE("substituting foo rebuilds only the path to the variable")
{
    Scalar one = 1.0;
    Scalar s = sum({one, var("foo")});
    NodePtr out = substitute(s.node(), {{"foo", 2.0}});
    CHECK_FALSE(identity_equal(out, s.node()));
    CHECK(out->kind() == Kind::ScalarSum);
    CHECK(identity_equal(out->children()[0].node, one.node()));
    CHECK(out->children()[1].node->value() == 2.0);
    CHECK(out->children()[1].node->origin() == "foo");
    CHECK(structural_equal(out, sum({1.0, Scalar(Node::num(2.0, "foo"))}).node()));
    CHECK(identity_equal(substitute(s.node(), {}), s.node()));
    CHECK(identity_equal(substitute(s.node(), {{"bar", 1.0}}), s.node()));
}

TEST_CASE("transformer category and clock checks")
{
    Waveform s = sine(1.0, 10e6, 0.0, 100e-9);
    SineToNum bad;
    CHECK(code_of([&] { bad.run(sequence({s}).node()); }) == ErrorCode::CategoryViolation);

    Waveform cs = sine(1.0, 10e6, 0.0, 100e-9, clock(10e6, 0.0));
    ReplaceClock rc;
    CHECK(code_of([&] { rc.run(cs.node()); }) == ErrorCode::ClockReplacement);
}

TEST_CASE("errors carry the node path")
{
    Waveform w = sequence({constant(1.0, 1e-9), sine(1.0, 10e6, 0.0, 100e-9)});
    try {
        SineToNum bad;
        bad.run(w.node());
        FAIL("expected error");
    } catch (const Error &e) {
        CHECK(e.path_string() == "1");
    }
}

TEST_CASE("unbind round trip")
{
    Scalar s = foo_sum();
    Bindings m{{"foo", 2.0}};
    NodePtr bound = substitute(s.node(), m);
    CHECK(structural_equal(unbind(bound, keys_of(m)), s.node()));
    CHECK(identity_equal(unbind(bound, {}), bound));
    CHECK(identity_equal(unbind(bound, {"bar"}), bound));
    CHECK(identity_equal(unbind(s.node(), {"foo"}), s.node()));
}

TEST_CASE("fold")
{
    CHECK(structural_equal(fold_constants(sum({2.0, 3.0}).node()), Scalar(5.0).node()));
    Scalar x = var("x");
    Scalar mixed = sum({product({2.0, 3.0}), x});
    NodePtr folded = fold_constants(mixed.node());
    CHECK(structural_equal(folded, sum({6.0, x}).node()));
    NodePtr div0 = (Scalar(1.0) / Scalar(0.0)).node();
    CHECK(identity_equal(fold_constants(div0), div0));
    Scalar exact = Scalar(0.1) + Scalar(0.2);
    CHECK(fold_constants(exact.node())->value() == resolve_scalar(exact));

    Waveform w = constant(sum({1.0, 2.0}), product({10e-9, 2.0}));
    NodePtr fw = fold_constants(w.node());
    CHECK(fw->child("value")->kind() == Kind::Num);
    CHECK(fw->child("duration")->value() == 20e-9);
}

TEST_CASE("simplify")
{
    Scalar x = var("x");
    CHECK(structural_equal(simplify(sum({0.0, x}).node()), x.node()));
    CHECK(structural_equal(simplify(product({1.0, x}).node()), x.node()));
    CHECK(structural_equal(simplify(sub(x, 0.0).node()), x.node()));
    CHECK(structural_equal(simplify(div(x, 1.0).node()), x.node()));
    CHECK(structural_equal(simplify(neg(neg(x)).node()), x.node()));
    Scalar y = var("y");
    Scalar z = var("z");
    CHECK(structural_equal(simplify(sum({x, sum({y, z})}).node()), sum({x, y, z}).node()));
    CHECK(structural_equal(simplify(product({product({x, sum({0.0, y})}), z}).node()), product({x, y, z}).node()));

    Waveform a = constant(1.0, 100e-9);
    Waveform b = sine(1.0, 10e6, 0.0, 50e-9);
    Waveform seq = sequence({a, zero(0.0), b});
    NodePtr s = simplify(seq.node());
    CHECK(structural_equal(s, sequence({a, b}).node()));
    CHECK(pulseir::testing::max_abs_diff(render(seq, 1e9).values, render(Waveform(s), 1e9).values) == 0.0);
    CHECK(structural_equal(simplify(sequence({a}).node()), a.node()));
    CHECK(structural_equal(simplify(sequence({sequence({a, b}), a}).node()), sequence({a, b, a}).node()));
    NodePtr plain = a.node();
    CHECK(identity_equal(simplify(plain), plain));
}

TEST_CASE("expand")
{
    Scalar d = 100e-9;
    Waveform fm = sine_fm(clock(10e6, 0.0), triangle(1e6, d), 1.0, 0.0, d);
    NodePtr e = expand_modulation(sequence({fm, zero(10e-9)}).node());
    CHECK(e->children()[0].node->kind() == Kind::Sine);
    CHECK(pulseir::testing::max_abs_diff(render(fm, 1e9).values,
                                         render(Waveform(e->children()[0].node), 1e9).values) <= 1e-9);
}

TEST_CASE("validate pass")
{
    ValidatePass v;
    Waveform w = sequence({constant(1.0, 10e-9), zero(-3e-9)});
    v.run(w.node());
    REQUIRE(v.violations().size() == 1);
    CHECK(v.violations()[0].path == std::vector<std::string>{"1"});
    CHECK(v.violations()[0].duration == -3e-9);

    ValidatePass unbound;
    CHECK(code_of([&] { unbound.run(constant(1.0, var("d")).node()); }) == ErrorCode::UnboundVariable);
}

TEST_CASE("pipeline")
{
    Pipeline p;
    p.emplace<SubstitutePass>(Bindings{{"foo", 2.0}}).emplace<FoldPass>();
    CHECK(p.names() == std::vector<std::string>{"substitute", "fold"});
    PassResult r = p.run(foo_sum().node());
    CHECK(structural_equal(r.graph, Scalar(3.0).node()));
    CHECK(r.passes.size() == 2);
    CHECK(r.find<FoldPass>() != nullptr);
    CHECK(r.find<ValidatePass>() == nullptr);

    Pipeline empty;
    NodePtr g = foo_sum().node();
    CHECK(identity_equal(empty.run(g).graph, g));

    Pipeline copy = p;
    CHECK(copy.size() == 2);
}

TEST_CASE("pipeline failures name the pass")
{
    Pipeline p = parse_pipeline("fold,validate");
    try {
        p.run(constant(1.0, var("d")).node());
        FAIL("expected error");
    } catch (const Error &e) {
        CHECK(e.code() == ErrorCode::UnboundVariable);
        REQUIRE(e.pass_index().has_value());
        CHECK(*e.pass_index() == 1);
        CHECK(e.pass_name() == "validate");
    }
}

TEST_CASE("schedule pipelines run independent pass instances per channel")
{
    Channel a("a"), b("b");
    Schedule s;
    s.add(a, constant(1.0, 10e-9));
    s.add(b, constant(2.0, 10e-9));
    const ChannelMap &m = s.finalize();
    for (bool concurrent : {false, true}) {
        StatefulVisitor::max_seen = 0;
        Pipeline p;
        p.emplace<StatefulVisitor>();
        auto results = p.run(m, concurrent);
        REQUIRE(results.size() == 2);
        CHECK(results[0].channel == a);
        CHECK(results[1].channel == b);
        int per_channel = static_cast<int>(pulseir::testing::unique_nodes(m.at(a).node()));
        CHECK(StatefulVisitor::max_seen.load() == per_channel);
        for (const auto &r : results) {
            REQUIRE(r.ok());
            CHECK(dynamic_cast<const StatefulVisitor *>(r.result->passes[0].get())->seen == per_channel);
        }
    }
}

TEST_CASE("channel errors are reported per channel")
{
    Channel a("a"), b("b");
    ChannelMap m;
    m.set(a, constant(1.0, 10e-9));
    m.set(b, constant(1.0, var("d")));
    auto results = parse_pipeline("validate").run(m);
    CHECK(results[0].ok());
    REQUIRE_FALSE(results[1].ok());
    CHECK(results[1].error->channel() == b.display_name());
}

TEST_CASE("parse_pipeline")
{
    CHECK(parse_pipeline("substitute,fold,simplify,validate").names() ==
          std::vector<std::string>{"substitute", "fold", "simplify", "validate"});
    CHECK(parse_pipeline("").size() == 0);
    CHECK(parse_pipeline(" fold , expand ").names() == std::vector<std::string>{"fold", "expand"});
    Pipeline p = parse_pipeline("substitute(foo=2),fold");
    CHECK(p.run(foo_sum().node()).graph->value() == 3.0);
    Pipeline q = parse_pipeline("substitute,fold", {{"foo", 4.0}});
    CHECK(q.run(foo_sum().node()).graph->value() == 5.0);
    Pipeline u = parse_pipeline("substitute(foo=2),unbind(foo)");
    CHECK(structural_equal(u.run(foo_sum().node()).graph, foo_sum().node()));
    CHECK(code_of([] { parse_pipeline("bogus"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_pipeline("fold(1)"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_pipeline("substitute(foo)"); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("parse_binding")
{
    CHECK(parse_binding("d=80e-9") == std::pair<std::string, double>{"d", 80e-9});
    CHECK(code_of([] { parse_binding("=1"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_binding("d"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_binding("d=abc"); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { parse_binding("d=inf"); }) == ErrorCode::InvalidArgument);
}
