#include "pulseir/targets.hpp"

#include "pulseir/error.hpp"

#include <cmath>
#include <sstream>
#include <unordered_map>

namespace pulseir {

namespace {

std::string escape(std::string_view text)
{
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out;
}

std::string vertex_label(const Node &n)
{
    switch (n.kind()) {
    case Kind::Num:
        return "Num(" + format_number(n.value()) + ")";
    case Kind::Var:
        return "Var(" + n.key() + ")";
    case Kind::Sine:
        return n.phase_mode() == PhaseMode::Continuous ? "Sine(continuous)" : "Sine";
    default:
        return std::string(n.name());
    }
}

} // namespace

std::string to_dot(const NodePtr &graph)
{
    std::unordered_map<const Node *, std::size_t> ids;
    std::ostringstream vertices;
    std::ostringstream edges;
    auto number = [&](auto &self, const NodePtr &node) -> std::size_t {
        if (auto it = ids.find(node.get()); it != ids.end())
            return it->second;
        std::size_t id = ids.size();
        ids.emplace(node.get(), id);
        vertices << "  n" << id << " [label=\"" << escape(vertex_label(*node)) << "\"];\n";
        for (const auto &edge : node->children()) {
            std::size_t child = self(self, edge.node);
            edges << "  n" << id << " -> n" << child << " [label=\"" << escape(edge.label) << "\"];\n";
        }
        return id;
    };
    number(number, graph);
    return "digraph pulse {\n" + vertices.str() + edges.str() + "}\n";
}

namespace {

class Muncher {
public:
    std::vector<DdsSegment> run(const NodePtr &root, double t0)
    {
        double d = evaluator_.duration(root);
        if (std::isinf(d))
            throw Error(ErrorCode::UnboundedDuration, "cannot lower unbounded " + std::string(root->name()));
        item(root, t0);
        return std::move(segments_);
    }

private:
    template <typename F>
    static auto at_edge(const std::string &label, F &&f) -> decltype(f())
    {
        try {
            return f();
        } catch (Error &e) {
            e.prepend_path(label);
            throw;
        }
    }

    void item(const NodePtr &node, double start)
    {
        double d = evaluator_.duration(node);
        if (d < 0.0)
            throw Error(ErrorCode::NegativeDuration,
                        std::string(node->name()) + " has negative duration " + format_number(d) + " s");
        if (d == 0.0)
            return;
        if (node->kind() == Kind::Sequence) {
            auto starts = evaluator_.item_starts(node, start);
            auto children = node->children();
            for (std::size_t k = 0; k < children.size(); ++k)
                at_edge(children[k].label, [&] {
                    item(children[k].node, starts[k]);
                    return 0;
                });
            return;
        }
        segments_.push_back(segment(node, start, d));
    }

    DdsSegment segment(const NodePtr &node, double start, double d)
    {
        DdsSegment seg;
        seg.duration_s = d;
        seg.start_s = start;
        if (node->kind() == Kind::Zero || (node->kind() == Kind::Const && constant_value(node, start) == 0.0))
            return seg;
        if (auto sine = sine_pattern(node, start, d))
            return *sine;
        if (node->kind() == Kind::WaveformProduct) {
            std::optional<DdsSegment> found;
            double factor = 1.0;
            for (const auto &edge : node->children()) {
                const auto &c = edge.node;
                if (!found) {
                    found = at_edge(edge.label, [&] { return sine_pattern(c, start, d); });
                    if (found)
                        continue;
                }
                if (!constant_over(c, d))
                    unsupported(node);
                factor *= at_edge(edge.label, [&] { return constant_value(c, start); });
            }
            if (!found)
                unsupported(node);
            found->amplitude *= factor;
            found->duration_s = d;
            return *found;
        }
        unsupported(node);
    }

    std::optional<DdsSegment> sine_pattern(const NodePtr &node, double start, double d)
    {
        NodePtr sine = node;
        if (node->kind() == Kind::SineFM)
            sine = expand_sine_fm(Waveform(node)).node();
        else if (node->kind() == Kind::SinePM)
            sine = expand_sine_pm(Waveform(node)).node();
        if (sine->kind() != Kind::Sine)
            return std::nullopt;
        keep_.push_back(sine);
        for (const char *param : {"amplitude", "frequency", "phase"}) {
            if (!constant_over(sine->child(param), d))
                return std::nullopt;
        }
        DdsSegment seg;
        seg.duration_s = d;
        seg.start_s = start;
        seg.amplitude = at_edge("amplitude", [&] { return constant_value(sine->child("amplitude"), start); });
        seg.frequency_hz = at_edge("frequency", [&] { return constant_value(sine->child("frequency"), start); });
        seg.phase_rad = at_edge("phase", [&] { return constant_value(sine->child("phase"), start); });
        seg.phase_mode = sine->phase_mode();
        if (seg.phase_mode == PhaseMode::Continuous) {
            const auto &ref = sine->child("ref_clock");
            seg.ref_phase_rad = at_edge("ref_clock", [&] { return evaluator_.clock_phase(ref, start); });
        }
        return seg;
    }

    // True when the waveform is a constant, or arithmetic over constants,
    // whose every operand covers at least `span` seconds.
    bool constant_over(const NodePtr &w, double span)
    {
        switch (w->kind()) {
        case Kind::Const:
        case Kind::Zero:
            return evaluator_.duration(w) >= span;
        case Kind::WaveformSum:
        case Kind::WaveformSub:
        case Kind::WaveformProduct:
        case Kind::WaveformDiv:
        case Kind::WaveformNeg:
            for (const auto &edge : w->children()) {
                if (!constant_over(edge.node, span))
                    return false;
            }
            return true;
        default:
            return false;
        }
    }

    double constant_value(const NodePtr &w, double start) { return evaluator_.value_at(w, start, start); }

    [[noreturn]] static void unsupported(const NodePtr &node)
    {
        throw Error(ErrorCode::UnsupportedWaveform,
                    std::string(node->name()) + " does not match any DDS segment pattern");
    }

    Evaluator evaluator_;
    std::vector<NodePtr> keep_;
    std::vector<DdsSegment> segments_;
};

double segment_value(const DdsSegment &seg, double tau)
{
    double offset = seg.ref_phase_rad.value_or(0.0);
    return sine_value(seg.amplitude, offset, seg.frequency_hz, tau, seg.phase_rad);
}

} // namespace

std::vector<DdsSegment> munch_dds(const Waveform &w, double t0)
{
    Muncher muncher;
    return muncher.run(w.node(), t0);
}

SampleBlock synthesize(const std::vector<DdsSegment> &segments, double sample_rate, double t0)
{
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw Error(ErrorCode::InvalidArgument, "sample rate must be positive and finite");
    SampleBlock block;
    block.sample_rate = sample_rate;
    block.t0 = t0;
    double end = t0;
    for (const auto &seg : segments)
        end = std::max(end, seg.start_s + seg.duration_s);
    std::size_t n = sample_count(end - t0, sample_rate);
    block.values.reserve(n);
    std::size_t next = 0;
    const DdsSegment *active = nullptr;
    for (std::size_t k = 0; k < n; ++k) {
        double t = block.time(k);
        while (next < segments.size() && t >= segments[next].start_s)
            active = &segments[next++];
        double value = 0.0;
        if (active) {
            double tau = t - active->start_s;
            if (tau >= 0.0 && tau < active->duration_s)
                value = segment_value(*active, tau);
        }
        block.values.push_back(value);
    }
    return block;
}

SampleBlock emit_samples(const Waveform &w, double sample_rate, double t0) { return render(w, sample_rate, t0); }

} // namespace pulseir
