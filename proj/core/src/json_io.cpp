#include "pulseir/json_io.hpp"

#include "pulseir/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pulseir {

namespace {

using json = nlohmann::json;

std::string line_context(std::string_view text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error &e) {
        std::string what = e.what();
        if (auto pos = what.find("parse error"); pos != std::string::npos)
            what = what.substr(pos);
        throw Error(ErrorCode::Parse, line_context(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + what);
    }
}

std::vector<Edge> indexed(std::vector<NodePtr> items)
{
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < items.size(); ++i)
        edges.push_back(Edge{index_label(i), std::move(items[i])});
    return edges;
}

class Parser {
public:
    explicit Parser(const json *defs) : defs_(defs) {}

    NodePtr node(const json &j, Category preferred)
    {
        if (j.is_number())
            return Node::num(j.get<double>());
        if (!j.is_object())
            fail("expected a node object or a number, got " + std::string(j.type_name()));
        if (j.contains("ref"))
            return ref(j, preferred);
        if (!j.contains("kind") || !j["kind"].is_string())
            fail("node object needs a string \"kind\"");
        std::string name = j["kind"].get<std::string>();
        std::optional<Kind> kind = kind_from_name(name);
        if (!kind)
            kind = operator_kind(name, preferred);
        if (!kind)
            fail("unknown kind '" + name + "'");
        check_keys(j, *kind);
        return build(j, *kind);
    }

    Scalar scalar(const json &j)
    {
        NodePtr n = node(j, Category::Scalar);
        if (n->category() != Category::Scalar)
            fail("expected a scalar, got " + std::string(n->name()), ErrorCode::CategoryViolation);
        return Scalar(n);
    }

    WaveParam wave_param(const json &j)
    {
        NodePtr n = node(j, Category::Waveform);
        if (n->category() == Category::Scalar)
            return Scalar(n);
        return Waveform(n);
    }

    Waveform waveform(const json &j)
    {
        NodePtr n = node(j, Category::Waveform);
        if (n->category() != Category::Waveform)
            fail("expected a waveform, got " + std::string(n->name()), ErrorCode::CategoryViolation);
        return Waveform(n);
    }

    Waveform clock_node(const json &j)
    {
        Waveform w = waveform(j);
        if (!is_clock_like(w.kind()))
            fail("expected a Clock or ClockSeq, got " + std::string(w->name()), ErrorCode::ClockReplacement);
        return w;
    }

    Duration duration(const json &j)
    {
        if (j.is_string()) {
            if (j.get<std::string>() == "unbounded")
                return Duration::unbounded();
            fail("duration must be a scalar or \"unbounded\"");
        }
        return scalar(j);
    }

    [[noreturn]] void fail(const std::string &message, ErrorCode code = ErrorCode::Parse) const
    {
        throw Error(code, location() + message);
    }

    struct Field {
        Field(Parser &p, std::string name) : parser(p) { parser.where_.push_back(std::move(name)); }
        ~Field() { parser.where_.pop_back(); }
        Field(const Field &) = delete;
        Field &operator=(const Field &) = delete;
        Parser &parser;
    };

    std::string location() const
    {
        if (where_.empty())
            return "at document root: ";
        std::string out;
        for (const auto &w : where_) {
            if (!out.empty() && w.front() != '[')
                out += '.';
            out += w;
        }
        return "at " + out + ": ";
    }

private:
    NodePtr ref(const json &j, Category preferred)
    {
        if (j.size() != 1 || !j["ref"].is_string())
            fail("a reference is exactly {\"ref\": \"<name>\"}");
        std::string name = j["ref"].get<std::string>();
        if (auto it = cache_.find(name); it != cache_.end())
            return it->second;
        if (!defs_ || !defs_->contains(name))
            fail("undefined reference '" + name + "'");
        if (!active_.insert(name).second)
            fail("reference cycle through '" + name + "'");
        // Errors inside a definition are located relative to the definition.
        auto saved = std::exchange(where_, {"defs." + name});
        NodePtr n;
        try {
            n = node((*defs_)[name], preferred);
        } catch (...) {
            where_ = std::move(saved);
            throw;
        }
        where_ = std::move(saved);
        active_.erase(name);
        cache_.emplace(name, n);
        return n;
    }

    void check_keys(const json &j, Kind kind)
    {
        for (const auto &[key, value] : j.items()) {
            if (key == "kind" || key == "defs")
                continue;
            if (kind == Kind::Num && (key == "value" || key == "origin"))
                continue;
            if (kind == Kind::Var && key == "key")
                continue;
            if (kind != Kind::Num && kind != Kind::Var && (key == "params" || key == "items"))
                continue;
            Field f(*this, key);
            fail("unexpected field for " + std::string(kind_name(kind)));
        }
        if (j.contains("params") && !j["params"].is_object()) {
            Field f(*this, "params");
            fail("\"params\" must be an object");
        }
        if (j.contains("items") && !j["items"].is_array()) {
            Field f(*this, "items");
            fail("\"items\" must be an array");
        }
    }

    // Reads named parameters, rejecting any the kind does not take.
    class Params {
    public:
        Params(Parser &p, const json &j, Kind kind, std::set<std::string> allowed)
            : parser_(p), params_(j.contains("params") ? &j["params"] : nullptr), kind_(kind)
        {
            if (!params_)
                return;
            for (const auto &[key, value] : params_->items()) {
                bool coefficient = kind == Kind::Polynomial && key.size() > 1 && key[0] == 'c' &&
                                   key.find_first_not_of("0123456789", 1) == std::string::npos;
                if (!allowed.contains(key) && !coefficient) {
                    Field f(parser_, "params");
                    Field g(parser_, key);
                    parser_.fail("unknown parameter for " + std::string(kind_name(kind)));
                }
            }
        }

        const json *get(const std::string &label) const
        {
            if (!params_ || !params_->contains(label))
                return nullptr;
            return &(*params_)[label];
        }

        const json &require(const std::string &label) const
        {
            if (const auto *j = get(label))
                return *j;
            Field f(parser_, "params");
            parser_.fail(std::string(kind_name(kind_)) + " requires parameter '" + label + "'");
        }

        template <typename F>
        auto read(const std::string &label, F &&f) const
        {
            Field a(parser_, "params");
            Field b(parser_, label);
            return f(require(label));
        }

        template <typename F, typename T>
        auto read_or(const std::string &label, F &&f, T fallback) const -> decltype(f(std::declval<const json &>()))
        {
            if (!get(label))
                return fallback;
            return read(label, std::forward<F>(f));
        }

    private:
        Parser &parser_;
        const json *params_;
        Kind kind_;
    };

    template <typename F>
    NodePtr located(F &&f)
    {
        try {
            return f();
        } catch (const Error &e) {
            if (e.code() == ErrorCode::Parse)
                throw;
            throw Error(e.code(), location() + e.message());
        }
    }

    void no_items(const json &j, Kind kind)
    {
        if (j.contains("items") && !j["items"].empty()) {
            Field f(*this, "items");
            fail(std::string(kind_name(kind)) + " takes no items");
        }
    }

    template <typename F>
    auto items(const json &j, F &&each) -> std::vector<decltype(each(std::declval<const json &>()))>
    {
        std::vector<decltype(each(std::declval<const json &>()))> out;
        if (!j.contains("items"))
            return out;
        const auto &arr = j["items"];
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Field f(*this, "items");
            Field g(*this, "[" + std::to_string(i) + "]");
            out.push_back(each(arr[i]));
        }
        return out;
    }

    NodePtr build(const json &j, Kind kind)
    {
        auto S = [this](const json &x) { return scalar(x); };
        auto W = [this](const json &x) { return wave_param(x); };
        auto D = [this](const json &x) { return duration(x); };
        auto C = [this](const json &x) { return clock_node(x); };

        switch (kind) {
        case Kind::Num: {
            if (!j.contains("value") || !j["value"].is_number()) {
                Field f(*this, "value");
                fail("Num requires a numeric \"value\"");
            }
            std::optional<std::string> origin;
            if (j.contains("origin")) {
                if (!j["origin"].is_string()) {
                    Field f(*this, "origin");
                    fail("origin must be a string");
                }
                origin = j["origin"].get<std::string>();
            }
            return Node::num(j["value"].get<double>(), origin);
        }
        case Kind::Var: {
            if (!j.contains("key") || !j["key"].is_string()) {
                Field f(*this, "key");
                fail("Var requires a string \"key\"");
            }
            return located([&] { return Node::var(j["key"].get<std::string>()); });
        }
        case Kind::Const: {
            no_items(j, kind);
            Params p(*this, j, kind, {"value", "duration"});
            auto value = p.read("value", S);
            auto d = p.read("duration", S);
            return located([&] { return constant(value, d).node(); });
        }
        case Kind::Zero: {
            no_items(j, kind);
            Params p(*this, j, kind, {"duration"});
            auto d = p.read("duration", S);
            return located([&] { return zero(d).node(); });
        }
        case Kind::Ramp: {
            no_items(j, kind);
            Params p(*this, j, kind, {"start_value", "stop_value", "duration"});
            auto a = p.read("start_value", S);
            auto b = p.read("stop_value", S);
            auto d = p.read("duration", S);
            return located([&] { return ramp(a, b, d).node(); });
        }
        case Kind::Triangle: {
            no_items(j, kind);
            Params p(*this, j, kind, {"amplitude", "duration"});
            auto a = p.read("amplitude", S);
            auto d = p.read("duration", S);
            return located([&] { return triangle(a, d).node(); });
        }
        case Kind::Gaussian: {
            no_items(j, kind);
            Params p(*this, j, kind, {"amplitude", "sigma", "duration"});
            auto a = p.read("amplitude", S);
            auto s = p.read("sigma", S);
            auto d = p.read("duration", S);
            return located([&] { return gaussian(a, s, d).node(); });
        }
        case Kind::Clock: {
            no_items(j, kind);
            Params p(*this, j, kind, {"frequency", "phase", "duration"});
            auto f = p.read("frequency", S);
            auto phase = p.read_or("phase", S, Scalar(0.0));
            auto d = p.read_or("duration", D, Duration::unbounded());
            return located([&] { return clock(f, phase, d).node(); });
        }
        case Kind::ClockSeq: {
            Params p(*this, j, kind, {});
            auto clocks = items(j, C);
            return located([&] { return clock_sequence(clocks).node(); });
        }
        case Kind::Sine: {
            no_items(j, kind);
            Params p(*this, j, kind, {"amplitude", "frequency", "phase", "duration", "phase_mode", "ref_clock"});
            auto a = p.read("amplitude", W);
            auto f = p.read("frequency", W);
            auto phase = p.read_or("phase", W, WaveParam(0.0));
            auto d = p.read("duration", S);
            std::optional<Waveform> ref;
            if (p.get("ref_clock"))
                ref = p.read("ref_clock", C);
            PhaseMode mode = ref ? PhaseMode::Continuous : PhaseMode::Absolute;
            if (p.get("phase_mode")) {
                mode = p.read("phase_mode", [this](const json &x) {
                    if (x == "absolute")
                        return PhaseMode::Absolute;
                    if (x == "continuous")
                        return PhaseMode::Continuous;
                    fail("phase_mode must be \"absolute\" or \"continuous\"");
                });
            }
            return located([&] {
                if (mode == PhaseMode::Continuous) {
                    if (!ref)
                        throw Error(ErrorCode::PhaseMode, "continuous phase mode requires a reference clock");
                    return sine(a, f, phase, d, *ref).node();
                }
                if (ref)
                    throw Error(ErrorCode::PhaseMode, "absolute phase mode does not take a reference clock");
                return sine(a, f, phase, d).node();
            });
        }
        case Kind::SineFM:
        case Kind::SinePM: {
            no_items(j, kind);
            Params p(*this, j, kind, {"carrier", "modulation", "amplitude", "phase", "duration"});
            auto carrier = p.read("carrier", C);
            auto m = p.read("modulation", W);
            auto a = p.read("amplitude", W);
            auto phase = p.read_or("phase", W, WaveParam(0.0));
            auto d = p.read("duration", S);
            return located([&] {
                return kind == Kind::SineFM ? sine_fm(carrier, m, a, phase, d).node()
                                            : sine_pm(carrier, m, a, phase, d).node();
            });
        }
        case Kind::Polynomial: {
            no_items(j, kind);
            Params p(*this, j, kind, {"coefficients", "duration"});
            std::vector<Scalar> coefficients;
            if (p.get("coefficients")) {
                coefficients = p.read("coefficients", [&](const json &x) {
                    if (!x.is_array())
                        fail("coefficients must be an array");
                    std::vector<Scalar> out;
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        Field f(*this, "[" + std::to_string(i) + "]");
                        out.push_back(scalar(x[i]));
                    }
                    return out;
                });
            } else {
                for (std::size_t i = 0; p.get("c" + std::to_string(i)); ++i)
                    coefficients.push_back(p.read("c" + std::to_string(i), S));
            }
            auto d = p.read("duration", S);
            return located([&] { return polynomial(coefficients, d).node(); });
        }
        case Kind::Power: {
            no_items(j, kind);
            Params p(*this, j, kind, {"scale", "exponent", "duration"});
            auto s = p.read("scale", S);
            auto e = p.read("exponent", S);
            auto d = p.read("duration", S);
            return located([&] { return power(s, e, d).node(); });
        }
        case Kind::Sequence: {
            Params p(*this, j, kind, {});
            auto ws = items(j, [this](const json &x) { return waveform(x); });
            return located([&] { return sequence(ws).node(); });
        }
        default:
            break;
        }

        Params p(*this, j, kind, {});
        if (category(kind) == Category::Scalar) {
            auto xs = items(j, [this](const json &x) { return scalar(x); });
            return located([&] { return scalar_op(kind, xs).node(); });
        }
        // Scalar operands of a waveform operator take the duration of the
        // first bounded waveform operand.
        auto params = items(j, [this](const json &x) { return node(x, Category::Waveform); });
        bool any_waveform = std::any_of(params.begin(), params.end(),
                                        [](const NodePtr &n) { return n->category() == Category::Waveform; });
        if (!any_waveform) {
            // Without a waveform operand a bare operator is a scalar operator.
            std::string_view name = kind_name(kind);
            if (auto sk = operator_kind(name.substr(std::string_view("Waveform").size()), Category::Scalar)) {
                std::vector<Scalar> xs(params.begin(), params.end());
                return located([&] { return scalar_op(*sk, xs).node(); });
            }
        }
        std::optional<Scalar> host;
        bool needs_host = std::any_of(params.begin(), params.end(),
                                      [](const NodePtr &n) { return n->category() == Category::Scalar; });
        for (const auto &n : params) {
            if (!needs_host)
                break;
            if (n->category() != Category::Waveform)
                continue;
            Duration d = duration_expr(n);
            if (!d.is_unbounded()) {
                host = d.expr();
                break;
            }
        }
        std::vector<NodePtr> nodes;
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (params[i]->category() == Category::Waveform) {
                nodes.push_back(params[i]);
                continue;
            }
            if (!host) {
                Field f(*this, "items");
                fail(std::string(kind_name(kind)) + " needs at least one bounded waveform operand");
            }
            nodes.push_back(constant(Scalar(params[i]), *host).node());
        }
        return located([&] { return Node::make(kind, indexed(std::move(nodes))); });
    }

    const json *defs_;
    std::map<std::string, NodePtr> cache_;
    std::set<std::string> active_;
    std::vector<std::string> where_;
};

std::string channel_id(const json &j)
{
    if (j.is_string())
        return j.get<std::string>();
    if (j.is_number_integer())
        return j.dump();
    throw Error(ErrorCode::Parse, "channel id must be a string or an integer");
}

class ScheduleReader {
public:
    ScheduleReader(Parser &parser, const json &doc) : parser_(parser)
    {
        Parser::Field f(parser_, "channels");
        if (!doc.contains("channels") || !doc["channels"].is_array())
            parser_.fail("schedule needs a \"channels\" array");
        const auto &arr = doc["channels"];
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Parser::Field g(parser_, "[" + std::to_string(i) + "]");
            const auto &c = arr[i];
            if (!c.is_object() || !c.contains("id"))
                parser_.fail("channel needs an \"id\"");
            std::string id = located_id(c["id"]);
            std::string label;
            if (c.contains("label")) {
                if (!c["label"].is_string())
                    parser_.fail("channel label must be a string");
                label = c["label"].get<std::string>();
            }
            if (by_id_.contains(id))
                parser_.fail("duplicate channel id '" + id + "'");
            by_id_.emplace(id, Channel(id, label));
            order_.push_back(id);
        }
    }

    ChannelMap read(const json &doc)
    {
        Parser::Field f(parser_, "body");
        if (!doc.contains("body"))
            parser_.fail("schedule needs a \"body\"");
        const auto &body = doc["body"];
        auto [kind, target] = context_header(body);
        std::optional<Schedule> s;
        if (kind == ContextKind::Sequential) {
            s.emplace(target);
            entries(*s, body);
        } else {
            s.emplace();
            s->open(kind, target);
            entries(*s, body);
            s->close();
        }
        return s->finalize();
    }

private:
    std::string located_id(const json &j)
    {
        try {
            return channel_id(j);
        } catch (const Error &e) {
            parser_.fail(e.message());
        }
    }

    std::pair<ContextKind, std::optional<Scalar>> context_header(const json &ctx)
    {
        if (!ctx.is_object() || !ctx.contains("context") || !ctx["context"].is_string())
            parser_.fail("context needs \"context\": \"sequential\" or \"parallel\"");
        for (const auto &[key, value] : ctx.items()) {
            if (key != "context" && key != "target_duration" && key != "items") {
                Parser::Field f(parser_, key);
                parser_.fail("unexpected field in context");
            }
        }
        std::string name = ctx["context"].get<std::string>();
        ContextKind kind;
        if (name == "sequential")
            kind = ContextKind::Sequential;
        else if (name == "parallel")
            kind = ContextKind::Parallel;
        else
            parser_.fail("unknown context '" + name + "'");
        std::optional<Scalar> target;
        if (ctx.contains("target_duration")) {
            Parser::Field f(parser_, "target_duration");
            target = parser_.scalar(ctx["target_duration"]);
        }
        return {kind, target};
    }

    void entries(Schedule &s, const json &ctx)
    {
        if (!ctx.contains("items"))
            return;
        const auto &arr = ctx["items"];
        if (!arr.is_array()) {
            Parser::Field f(parser_, "items");
            parser_.fail("\"items\" must be an array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Parser::Field f(parser_, "items");
            Parser::Field g(parser_, "[" + std::to_string(i) + "]");
            const auto &item = arr[i];
            if (item.is_object() && item.contains("context")) {
                auto [kind, target] = context_header(item);
                s.open(kind, target);
                entries(s, item);
                s.close();
                continue;
            }
            if (!item.is_object() || !item.contains("channel") || !item.contains("waveform"))
                parser_.fail("item needs \"channel\" and \"waveform\", or is a nested context");
            std::string id;
            {
                Parser::Field h(parser_, "channel");
                id = located_id(item["channel"]);
                if (!by_id_.contains(id))
                    parser_.fail("unknown channel '" + id + "'");
            }
            Parser::Field h(parser_, "waveform");
            s.add(by_id_.at(id), parser_.waveform(item["waveform"]));
        }
    }

    Parser &parser_;
    std::map<std::string, Channel> by_id_;
    std::vector<std::string> order_;
};

const json *defs_of(const json &doc)
{
    if (!doc.is_object() || !doc.contains("defs"))
        return nullptr;
    if (!doc["defs"].is_object())
        throw Error(ErrorCode::Parse, "at defs: must be an object");
    return &doc["defs"];
}

json node_json(const NodePtr &n)
{
    switch (n->kind()) {
    case Kind::Num: {
        if (!n->origin())
            return n->value();
        return json{{"kind", "Num"}, {"value", n->value()}, {"origin", std::string(*n->origin())}};
    }
    case Kind::Var:
        return json{{"kind", "Var"}, {"key", n->key()}};
    default:
        break;
    }
    json out;
    out["kind"] = std::string(n->name());
    json params = json::object();
    json items = json::array();
    for (const auto &edge : n->children()) {
        if (n->is_operator() || n->kind() == Kind::ClockSeq)
            items.push_back(node_json(edge.node));
        else
            params[edge.label] = node_json(edge.node);
    }
    if (n->kind() == Kind::Sine)
        params["phase_mode"] = std::string(to_string(n->phase_mode()));
    if (!params.empty())
        out["params"] = std::move(params);
    if (n->is_operator() || n->kind() == Kind::ClockSeq)
        out["items"] = std::move(items);
    return out;
}

} // namespace

Document parse_document(std::string_view text)
{
    json doc = parse_json(text);
    if (!doc.is_object())
        throw Error(ErrorCode::Parse, "at document root: expected an object");
    Parser parser(defs_of(doc));
    Document out;
    if (doc.contains("channels") || doc.contains("body")) {
        for (const auto &[key, value] : doc.items()) {
            if (key != "channels" && key != "body" && key != "defs")
                throw Error(ErrorCode::Parse, "at " + key + ": unexpected field in schedule document");
        }
        ScheduleReader reader(parser, doc);
        out.schedule = reader.read(doc);
    } else {
        out.graph = parser.node(doc, Category::Waveform);
    }
    return out;
}

Document load_document(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::Parse, "cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_document(buffer.str());
}

NodePtr parse_node(std::string_view text)
{
    json doc = parse_json(text);
    Parser parser(defs_of(doc));
    return parser.node(doc, Category::Waveform);
}

std::string node_to_json(const NodePtr &node, int indent) { return node_json(node).dump(indent); }

std::string dds_to_json(const std::vector<DdsSegment> &segments, int indent)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto &seg : segments) {
        nlohmann::ordered_json s;
        s["duration_s"] = seg.duration_s;
        s["frequency_hz"] = seg.frequency_hz;
        s["amplitude"] = seg.amplitude;
        s["phase_rad"] = seg.phase_rad;
        s["phase_mode"] = std::string(to_string(seg.phase_mode));
        if (seg.ref_phase_rad)
            s["ref_phase_rad"] = *seg.ref_phase_rad;
        out.push_back(std::move(s));
    }
    return out.dump(indent) + "\n";
}

} // namespace pulseir
