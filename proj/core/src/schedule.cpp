#include "pulseir/schedule.hpp"

#include "pulseir/error.hpp"

#include "resolver.hpp"

#include <atomic>
#include <exception>
#include <unordered_set>

namespace pulseir {

namespace {

std::atomic<std::uint64_t> next_channel{0};

} // namespace

struct Channel::Impl {
    std::string id;
    std::string label;
};

Channel::Channel(std::string label)
    : impl_(std::make_shared<const Impl>(Impl{"ch" + std::to_string(next_channel++), std::move(label)}))
{
}

Channel::Channel(std::string id, std::string label)
    : impl_(std::make_shared<const Impl>(Impl{std::move(id), std::move(label)}))
{
}

const std::string &Channel::id() const noexcept { return impl_->id; }
const std::string &Channel::label() const noexcept { return impl_->label; }

std::string Channel::display_name() const
{
    return impl_->label.empty() ? impl_->id : impl_->label + "." + impl_->id;
}

bool ChannelMap::contains(const Channel &ch) const noexcept { return find(ch) != nullptr; }

const Waveform &ChannelMap::at(const Channel &ch) const
{
    if (const auto *w = find(ch))
        return *w;
    throw Error(ErrorCode::InvalidArgument, "channel " + ch.display_name() + " is not in the map");
}

const Waveform *ChannelMap::find(const Channel &ch) const noexcept
{
    for (const auto &[c, w] : entries_) {
        if (c == ch)
            return &w;
    }
    return nullptr;
}

void ChannelMap::set(const Channel &ch, Waveform w)
{
    for (auto &entry : entries_) {
        if (entry.first == ch) {
            entry.second = std::move(w);
            return;
        }
    }
    entries_.emplace_back(ch, std::move(w));
}

std::vector<Channel> ChannelMap::channels() const
{
    std::vector<Channel> out;
    out.reserve(entries_.size());
    for (const auto &entry : entries_)
        out.push_back(entry.first);
    return out;
}

namespace {

struct Context {
    ContextKind kind;
    std::optional<Scalar> target;
    // Sequential: one map per slot. Parallel: a single map whose values are
    // appended to per channel, kept in `lists`.
    std::vector<ChannelMap> slots;
    std::vector<std::pair<Channel, std::vector<Waveform>>> lists;
};

Waveform sequence_or_single(std::vector<Waveform> items)
{
    if (items.size() == 1)
        return std::move(items.front());
    return sequence(std::move(items));
}

Scalar bounded(const Duration &d, const char *what)
{
    if (d.is_unbounded())
        throw Error(ErrorCode::UnboundedDuration, std::string(what) + " has unbounded duration");
    return d.expr();
}

ChannelMap close_sequential(const Context &ctx)
{
    std::vector<Channel> order;
    for (const auto &slot : ctx.slots) {
        for (const auto &[ch, w] : slot) {
            bool seen = false;
            for (const auto &c : order)
                seen = seen || c == ch;
            if (!seen)
                order.push_back(ch);
        }
    }
    ChannelMap out;
    if (order.empty())
        return out;

    std::vector<Scalar> slot_durations;
    std::vector<std::optional<Waveform>> fillers;
    for (const auto &slot : ctx.slots) {
        std::vector<Duration> ds;
        for (const auto &[ch, w] : slot)
            ds.push_back(duration_expr(w));
        slot_durations.push_back(bounded(max_duration(ds), "sequential slot"));
        fillers.emplace_back();
    }

    std::optional<Waveform> tail;
    if (ctx.target) {
        std::vector<Duration> parts(slot_durations.begin(), slot_durations.end());
        tail = zero(*ctx.target - bounded(sum_duration(parts), "sequential context"));
    }

    for (const auto &ch : order) {
        std::vector<Waveform> items;
        for (std::size_t i = 0; i < ctx.slots.size(); ++i) {
            if (const auto *w = ctx.slots[i].find(ch)) {
                items.push_back(*w);
            } else {
                if (!fillers[i])
                    fillers[i] = zero(slot_durations[i]);
                items.push_back(*fillers[i]);
            }
        }
        if (tail)
            items.push_back(*tail);
        out.set(ch, sequence_or_single(std::move(items)));
    }
    return out;
}

ChannelMap close_parallel(const Context &ctx)
{
    ChannelMap out;
    if (ctx.lists.empty())
        return out;
    std::vector<Duration> durations;
    for (const auto &[ch, items] : ctx.lists) {
        std::vector<Duration> parts;
        for (const auto &w : items)
            parts.push_back(duration_expr(w));
        durations.push_back(sum_duration(parts));
    }
    Scalar total = ctx.target ? *ctx.target : bounded(max_duration(durations), "parallel context");
    for (std::size_t i = 0; i < ctx.lists.size(); ++i) {
        const auto &[ch, items] = ctx.lists[i];
        std::vector<Waveform> padded = items;
        padded.push_back(zero(total - bounded(durations[i], "parallel channel")));
        out.set(ch, sequence(std::move(padded)));
    }
    return out;
}

void append(Context &ctx, const Channel &ch, const Waveform &w)
{
    if (ctx.kind == ContextKind::Sequential) {
        ChannelMap slot;
        slot.set(ch, w);
        ctx.slots.push_back(std::move(slot));
        return;
    }
    for (auto &[c, items] : ctx.lists) {
        if (c == ch) {
            items.push_back(w);
            return;
        }
    }
    ctx.lists.emplace_back(ch, std::vector<Waveform>{w});
}

void merge(Context &parent, ChannelMap collapsed)
{
    if (collapsed.empty())
        return;
    if (parent.kind == ContextKind::Sequential) {
        parent.slots.push_back(std::move(collapsed));
        return;
    }
    for (const auto &[ch, w] : collapsed)
        append(parent, ch, w);
}

ChannelMap collapse(const Context &ctx)
{
    return ctx.kind == ContextKind::Sequential ? close_sequential(ctx) : close_parallel(ctx);
}

} // namespace

struct Schedule::Impl {
    std::vector<Context> stack;
    std::optional<ChannelMap> result;

    void require_open(const char *what) const
    {
        if (result)
            throw Error(ErrorCode::ContextState, std::string(what) + " after finalize");
    }
};

Schedule::Schedule(std::optional<Scalar> target_duration) : impl_(std::make_unique<Impl>())
{
    impl_->stack.push_back(Context{ContextKind::Sequential, std::move(target_duration), {}, {}});
}

Schedule::~Schedule() = default;
Schedule::Schedule(Schedule &&) noexcept = default;
Schedule &Schedule::operator=(Schedule &&) noexcept = default;

void Schedule::open(ContextKind kind, std::optional<Scalar> target_duration)
{
    impl_->require_open("open");
    impl_->stack.push_back(Context{kind, std::move(target_duration), {}, {}});
}

void Schedule::close()
{
    impl_->require_open("close");
    if (impl_->stack.size() < 2)
        throw Error(ErrorCode::ContextState, "close without a matching open");
    ChannelMap collapsed = collapse(impl_->stack.back());
    impl_->stack.pop_back();
    merge(impl_->stack.back(), std::move(collapsed));
}

ContextGuard Schedule::sequential(std::optional<Scalar> target_duration)
{
    open(ContextKind::Sequential, std::move(target_duration));
    return ContextGuard(*this);
}

ContextGuard Schedule::parallel(std::optional<Scalar> target_duration)
{
    open(ContextKind::Parallel, std::move(target_duration));
    return ContextGuard(*this);
}

void Schedule::add(const Channel &ch, const Waveform &w)
{
    impl_->require_open("add");
    if (w->category() != Category::Waveform)
        throw Error(ErrorCode::CategoryViolation, "only waveforms can be scheduled");
    append(impl_->stack.back(), ch, w);
}

const ChannelMap &Schedule::finalize()
{
    impl_->require_open("finalize");
    if (impl_->stack.size() != 1)
        throw Error(ErrorCode::ContextState,
                    "finalize with " + std::to_string(impl_->stack.size() - 1) + " unclosed context(s)");
    impl_->result = collapse(impl_->stack.back());
    impl_->stack.clear();
    return *impl_->result;
}

bool Schedule::finalized() const noexcept { return impl_->result.has_value(); }
std::size_t Schedule::depth() const noexcept { return impl_->stack.size(); }

const ChannelMap &Schedule::result() const
{
    if (!impl_->result)
        throw Error(ErrorCode::ContextState, "schedule is not finalized");
    return *impl_->result;
}

ContextGuard::ContextGuard(Schedule &s) : schedule_(&s), uncaught_(std::uncaught_exceptions()) {}

ContextGuard::ContextGuard(ContextGuard &&other) noexcept
    : schedule_(std::exchange(other.schedule_, nullptr)), uncaught_(other.uncaught_)
{
}

ContextGuard::~ContextGuard() noexcept(false)
{
    if (schedule_ && std::uncaught_exceptions() == uncaught_)
        close();
}

void ContextGuard::close()
{
    if (auto *s = std::exchange(schedule_, nullptr))
        s->close();
}

std::string Violation::path_string() const
{
    std::string out;
    for (const auto &label : path) {
        if (!out.empty())
            out += '/';
        out += label;
    }
    return out;
}

std::string Violation::describe() const
{
    std::string where = path.empty() ? "<root>" : path_string();
    return "channel " + channel.display_name() + ": " + std::string(node->name()) + " at " + where +
           " has negative duration " + format_number(duration) + " s";
}

namespace {

void collect(const Channel &ch, const NodePtr &node, std::vector<std::string> &path,
             detail::Resolver &resolver, std::unordered_set<const Node *> &seen, std::vector<Violation> &out)
{
    if (node->category() != Category::Waveform || !seen.insert(node.get()).second)
        return;
    double d = 0.0;
    try {
        d = resolver.duration(node);
    } catch (Error &e) {
        for (auto it = path.rbegin(); it != path.rend(); ++it)
            e.prepend_path(*it);
        e.set_channel(ch.display_name());
        throw;
    }
    if (d < 0.0)
        out.push_back(Violation{ch, path, node, d});
    for (const auto &edge : node->children()) {
        path.push_back(edge.label);
        collect(ch, edge.node, path, resolver, seen, out);
        path.pop_back();
    }
}

} // namespace

std::vector<Violation> validate(const Channel &ch, const Waveform &w)
{
    detail::Resolver resolver;
    std::unordered_set<const Node *> seen;
    std::vector<std::string> path;
    std::vector<Violation> out;
    collect(ch, w.node(), path, resolver, seen, out);
    return out;
}

std::vector<Violation> validate(const ChannelMap &channels)
{
    std::vector<Violation> out;
    for (const auto &[ch, w] : channels) {
        auto part = validate(ch, w);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

} // namespace pulseir
