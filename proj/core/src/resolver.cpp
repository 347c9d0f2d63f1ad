#include "resolver.hpp"

#include "pulseir/error.hpp"

#include <cmath>
#include <limits>

namespace pulseir::detail {

// Correctly rounded (half to even) conversion.
double to_double(const Rational &r)
{
    using boost::multiprecision::cpp_int;
    cpp_int num = boost::multiprecision::numerator(r);
    cpp_int den = boost::multiprecision::denominator(r);
    if (num == 0)
        return 0.0;
    bool negative = num < 0;
    if (negative)
        num = -num;
    long k = 55 - (static_cast<long>(msb(num)) - static_cast<long>(msb(den)));
    if (k >= 0)
        num <<= k;
    else
        den <<= -k;
    cpp_int rem;
    cpp_int q;
    divide_qr(num, den, q, rem);
    bool sticky = rem != 0;
    long bits = static_cast<long>(msb(q)) + 1;
    long exponent = bits - 1 - k;
    long drop = bits - 53;
    if (exponent < -1022)
        drop += -1022 - exponent;
    cpp_int mantissa = q >> drop;
    cpp_int rest = q - (mantissa << drop);
    cpp_int half = cpp_int(1) << (drop - 1);
    if (rest > half || (rest == half && (sticky || bit_test(mantissa, 0))))
        mantissa += 1;
    double out = std::ldexp(mantissa.convert_to<double>(), static_cast<int>(drop - k));
    return negative ? -out : out;
}

const Rational &Resolver::exact_scalar(const NodePtr &s)
{
    if (auto it = exact_.find(s.get()); it != exact_.end())
        return it->second;

    Rational value;
    switch (s->kind()) {
    case Kind::Num: {
        double v = s->value();
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument, "non-finite number " + format_number(v));
        value = Rational(v);
        break;
    }
    case Kind::Var:
        throw Error(ErrorCode::UnboundVariable, "unbound variable '" + s->key() + "'");
    default: {
        if (s->category() != Category::Scalar)
            throw Error(ErrorCode::CategoryViolation, "expected a scalar, got " + std::string(s->name()));
        auto children = s->children();
        std::vector<const Rational *> items;
        items.reserve(children.size());
        for (const auto &edge : children) {
            try {
                items.push_back(&exact_scalar(edge.node));
            } catch (Error &e) {
                e.prepend_path(edge.label);
                throw;
            }
        }
        switch (s->kind()) {
        case Kind::ScalarSum:
            for (auto *x : items)
                value += *x;
            break;
        case Kind::ScalarProduct:
            value = 1;
            for (auto *x : items)
                value *= *x;
            break;
        case Kind::ScalarSub:
            value = *items[0] - *items[1];
            break;
        case Kind::ScalarDiv:
            if (*items[1] == 0)
                throw Error(ErrorCode::DivisionByZero, "scalar division by zero");
            value = *items[0] / *items[1];
            break;
        case Kind::ScalarNeg:
            value = -*items[0];
            break;
        case Kind::ScalarMin:
            value = *items[0];
            for (auto *x : items)
                if (*x < value)
                    value = *x;
            break;
        case Kind::ScalarMax:
            value = *items[0];
            for (auto *x : items)
                if (*x > value)
                    value = *x;
            break;
        default:
            throw Error(ErrorCode::InvalidArgument, "cannot resolve " + std::string(s->name()));
        }
    }
    }
    return exact_.emplace(s.get(), std::move(value)).first->second;
}

double Resolver::scalar(const NodePtr &s)
{
    if (auto it = rounded_.find(s.get()); it != rounded_.end())
        return it->second;
    double v = to_double(exact_scalar(s));
    rounded_.emplace(s.get(), v);
    return v;
}

const std::optional<Rational> &Resolver::exact_duration(const NodePtr &w)
{
    if (auto it = durations_.find(w.get()); it != durations_.end())
        return it->second;
    Duration d = builder_.of(w);
    std::optional<Rational> value;
    if (!d.is_unbounded()) {
        try {
            value = exact_scalar(d.expr().node());
        } catch (Error &e) {
            e.prepend_path("duration");
            throw;
        }
    }
    return durations_.emplace(w.get(), std::move(value)).first->second;
}

double Resolver::duration(const NodePtr &w)
{
    if (auto it = duration_seconds_.find(w.get()); it != duration_seconds_.end())
        return it->second;
    const auto &exact = exact_duration(w);
    double v = exact ? to_double(*exact) : std::numeric_limits<double>::infinity();
    duration_seconds_.emplace(w.get(), v);
    return v;
}

const std::vector<double> &Resolver::item_offsets(const NodePtr &seq)
{
    if (auto it = offsets_.find(seq.get()); it != offsets_.end())
        return it->second;
    std::vector<double> offsets;
    Rational prefix = 0;
    bool bounded = true;
    for (const auto &edge : seq->children()) {
        offsets.push_back(bounded ? to_double(prefix) : std::numeric_limits<double>::infinity());
        const std::optional<Rational> *d = nullptr;
        try {
            d = &exact_duration(edge.node);
        } catch (Error &e) {
            e.prepend_path(edge.label);
            throw;
        }
        if (!*d)
            bounded = false;
        else if (bounded)
            prefix += **d;
    }
    return offsets_.emplace(seq.get(), std::move(offsets)).first->second;
}

void Resolver::pin(const NodePtr &root) { pinned_.insert(root); }

bool is_var_free(const NodePtr &node, std::unordered_map<const Node *, bool> &memo)
{
    if (auto it = memo.find(node.get()); it != memo.end())
        return it->second;
    bool free = node->kind() != Kind::Var;
    for (const auto &edge : node->children()) {
        if (!free)
            break;
        free = is_var_free(edge.node, memo);
    }
    memo.emplace(node.get(), free);
    return free;
}

} // namespace pulseir::detail
