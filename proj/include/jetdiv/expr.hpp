#ifndef JETDIV_EXPR_HPP
#define JETDIV_EXPR_HPP

#include <bit>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>

namespace jetdiv
{

enum class UnaryOp { neg, exp, ln, sin, cos, sqrt };
enum class BinaryOp { add, sub, mul, div, pow };

inline std::string_view unary_name(UnaryOp op)
{
    switch (op) {
        case UnaryOp::neg:
            return "-";
        case UnaryOp::exp:
            return "exp";
        case UnaryOp::ln:
            return "ln";
        case UnaryOp::sin:
            return "sin";
        case UnaryOp::cos:
            return "cos";
        case UnaryOp::sqrt:
            return "sqrt";
    }
    return "?";
}

inline std::optional<UnaryOp> function_from_name(std::string_view name)
{
    if (name == "exp") {
        return UnaryOp::exp;
    }
    if (name == "ln") {
        return UnaryOp::ln;
    }
    if (name == "sin") {
        return UnaryOp::sin;
    }
    if (name == "cos") {
        return UnaryOp::cos;
    }
    if (name == "sqrt") {
        return UnaryOp::sqrt;
    }
    return std::nullopt;
}

inline char binary_symbol(BinaryOp op)
{
    switch (op) {
        case BinaryOp::add:
            return '+';
        case BinaryOp::sub:
            return '-';
        case BinaryOp::mul:
            return '*';
        case BinaryOp::div:
            return '/';
        case BinaryOp::pow:
            return '^';
    }
    return '?';
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    struct Const {
        double value;
    };
    struct Var {
    };
    struct Unary {
        UnaryOp op;
        NodePtr child;
    };
    struct Binary {
        BinaryOp op;
        NodePtr lhs;
        NodePtr rhs;
    };

    std::variant<Const, Var, Unary, Binary> data;
    // Byte offset of the operator or literal in the source text, when the node
    // came from the parser.
    std::optional<std::size_t> position;
};

/// Immutable expression in one variable x. Copies share structure.
///
/// Exponents of ^ are always integer constants; general powers are written
/// exp(b*ln(a)).
class Expr
{
public:
    explicit Expr(NodePtr node) : node_(std::move(node))
    {
        if (!node_) {
            throw std::invalid_argument("null expression node");
        }
    }

    static Expr constant(double value, std::optional<std::size_t> pos = std::nullopt)
    {
        if (!std::isfinite(value)) {
            throw std::invalid_argument("expression constants must be finite");
        }
        return make(Node::Const{value}, pos);
    }

    static Expr variable(std::optional<std::size_t> pos = std::nullopt)
    {
        return make(Node::Var{}, pos);
    }

    static Expr unary(UnaryOp op, const Expr &child, std::optional<std::size_t> pos = std::nullopt)
    {
        return make(Node::Unary{op, child.node_}, pos);
    }

    static Expr binary(BinaryOp op, const Expr &lhs, const Expr &rhs, std::optional<std::size_t> pos = std::nullopt)
    {
        if (op == BinaryOp::pow) {
            const auto *k = std::get_if<Node::Const>(&rhs.node_->data);
            if (k == nullptr || std::trunc(k->value) != k->value) {
                throw std::invalid_argument("exponent of ^ must be an integer constant");
            }
        }
        return make(Node::Binary{op, lhs.node_, rhs.node_}, pos);
    }

    const Node &node() const noexcept
    {
        return *node_;
    }

    const NodePtr &ptr() const noexcept
    {
        return node_;
    }

    template <typename T>
    const T *as() const noexcept
    {
        return std::get_if<T>(&node_->data);
    }

private:
    template <typename Payload>
    static Expr make(Payload payload, std::optional<std::size_t> pos)
    {
        return Expr(std::make_shared<const Node>(Node{std::move(payload), pos}));
    }

    NodePtr node_;
};

// Equality of shape and constants; source positions are ignored.
inline bool structurally_equal(const Node &a, const Node &b)
{
    if (&a == &b) {
        return true;
    }
    if (a.data.index() != b.data.index()) {
        return false;
    }
    if (const auto *ca = std::get_if<Node::Const>(&a.data)) {
        return std::bit_cast<std::uint64_t>(ca->value)
               == std::bit_cast<std::uint64_t>(std::get<Node::Const>(b.data).value);
    }
    if (std::holds_alternative<Node::Var>(a.data)) {
        return true;
    }
    if (const auto *ua = std::get_if<Node::Unary>(&a.data)) {
        const auto &ub = std::get<Node::Unary>(b.data);
        return ua->op == ub.op && structurally_equal(*ua->child, *ub.child);
    }
    const auto &ba = std::get<Node::Binary>(a.data);
    const auto &bb = std::get<Node::Binary>(b.data);
    return ba.op == bb.op && structurally_equal(*ba.lhs, *bb.lhs) && structurally_equal(*ba.rhs, *bb.rhs);
}

inline bool structurally_equal(const Expr &a, const Expr &b)
{
    return structurally_equal(a.node(), b.node());
}

namespace detail
{

// Binding strength used by the printer; mirrors the parser's grammar.
enum Precedence : int { prec_sum = 1, prec_product = 2, prec_negation = 3, prec_power = 4, prec_atom = 5 };

inline int precedence(const Node &n)
{
    if (const auto *c = std::get_if<Node::Const>(&n.data)) {
        return std::signbit(c->value) ? prec_negation : prec_atom;
    }
    if (std::holds_alternative<Node::Var>(n.data)) {
        return prec_atom;
    }
    if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
        return u->op == UnaryOp::neg ? prec_negation : prec_atom;
    }
    switch (std::get<Node::Binary>(n.data).op) {
        case BinaryOp::add:
        case BinaryOp::sub:
            return prec_sum;
        case BinaryOp::mul:
        case BinaryOp::div:
            return prec_product;
        case BinaryOp::pow:
            return prec_power;
    }
    return prec_atom;
}

inline std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline void print(const Node &n, std::string &out);

inline void print_wrapped(const Node &n, bool wrap, std::string &out)
{
    if (wrap) {
        out += '(';
    }
    print(n, out);
    if (wrap) {
        out += ')';
    }
}

inline void print(const Node &n, std::string &out)
{
    if (const auto *c = std::get_if<Node::Const>(&n.data)) {
        out += format_number(c->value);
        return;
    }
    if (std::holds_alternative<Node::Var>(n.data)) {
        out += 'x';
        return;
    }
    if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
        if (u->op == UnaryOp::neg) {
            out += '-';
            print_wrapped(*u->child, precedence(*u->child) < prec_negation, out);
        } else {
            out += unary_name(u->op);
            print_wrapped(*u->child, true, out);
        }
        return;
    }
    const auto &b = std::get<Node::Binary>(n.data);
    const int p = precedence(n);
    if (b.op == BinaryOp::pow) {
        print_wrapped(*b.lhs, precedence(*b.lhs) <= prec_power, out);
        out += '^';
        out += format_number(std::get<Node::Const>(b.rhs->data).value);
        return;
    }
    // Left-associative: an equal-precedence right operand keeps its parentheses.
    print_wrapped(*b.lhs, precedence(*b.lhs) < p, out);
    if (p == prec_sum) {
        out += ' ';
        out += binary_symbol(b.op);
        out += ' ';
    } else {
        out += binary_symbol(b.op);
    }
    print_wrapped(*b.rhs, precedence(*b.rhs) <= p, out);
}

} // namespace detail

/// Text form of an expression, minimally parenthesised for the parser's grammar.
/// Numbers use the shortest decimal form that reads back to the same double.
inline std::string to_string(const Expr &e)
{
    std::string out;
    detail::print(e.node(), out);
    return out;
}

// Counts distinct nodes reachable from e (shared nodes once).
inline std::size_t dag_size(const Expr &e)
{
    std::unordered_map<const Node *, bool> seen;
    std::function<void(const Node &)> visit = [&](const Node &n) {
        if (!seen.emplace(&n, true).second) {
            return;
        }
        if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
            visit(*u->child);
        } else if (const auto *b = std::get_if<Node::Binary>(&n.data)) {
            visit(*b->lhs);
            visit(*b->rhs);
        }
    };
    visit(e.node());
    return seen.size();
}

/// Hash-consing factory: structurally equal nodes built through one builder
/// are the same object. Repeated symbolic differentiation relies on this to
/// keep the k-th derivative a compact DAG instead of an exponentially large
/// tree.
class ExprBuilder
{
public:
    Expr constant(double value)
    {
        return intern(Key{kind_const, 0, std::bit_cast<std::uint64_t>(value), nullptr, nullptr},
                      [&] { return Expr::constant(value); });
    }

    Expr variable()
    {
        return intern(Key{kind_var, 0, 0, nullptr, nullptr}, [] { return Expr::variable(); });
    }

    Expr unary(UnaryOp op, const Expr &child)
    {
        const Expr c = adopt(child);
        return intern(Key{kind_unary, static_cast<int>(op), 0, &c.node(), nullptr},
                      [&] { return Expr::unary(op, c); });
    }

    Expr binary(BinaryOp op, const Expr &lhs, const Expr &rhs)
    {
        const Expr l = adopt(lhs);
        const Expr r = adopt(rhs);
        return intern(Key{kind_binary, static_cast<int>(op), 0, &l.node(), &r.node()},
                      [&] { return Expr::binary(op, l, r); });
    }

    // Canonical copy of an expression built elsewhere (positions dropped).
    Expr adopt(const Expr &e)
    {
        if (const auto it = owned_.find(&e.node()); it != owned_.end()) {
            return e;
        }
        if (const auto it = adopted_.find(&e.node()); it != adopted_.end()) {
            return it->second.second;
        }
        Expr canonical = [&] {
            const Node &n = e.node();
            if (const auto *c = std::get_if<Node::Const>(&n.data)) {
                return constant(c->value);
            }
            if (std::holds_alternative<Node::Var>(n.data)) {
                return variable();
            }
            if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
                return unary(u->op, Expr(u->child));
            }
            const auto &b = std::get<Node::Binary>(n.data);
            return binary(b.op, Expr(b.lhs), Expr(b.rhs));
        }();
        adopted_.emplace(&e.node(), std::make_pair(e, canonical));
        return canonical;
    }

    std::size_t size() const noexcept
    {
        return table_.size();
    }

private:
    enum Kind : int { kind_const, kind_var, kind_unary, kind_binary };

    struct Key {
        int kind;
        int op;
        std::uint64_t bits;
        const Node *lhs;
        const Node *rhs;

        bool operator==(const Key &) const = default;
    };

    struct KeyHash {
        std::size_t operator()(const Key &k) const noexcept
        {
            std::size_t h = std::hash<std::uint64_t>{}(k.bits);
            const auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
            mix(static_cast<std::size_t>(k.kind));
            mix(static_cast<std::size_t>(k.op));
            mix(std::hash<const Node *>{}(k.lhs));
            mix(std::hash<const Node *>{}(k.rhs));
            return h;
        }
    };

    template <typename Make>
    Expr intern(const Key &key, Make &&make)
    {
        if (const auto it = table_.find(key); it != table_.end()) {
            return it->second;
        }
        Expr e = make();
        table_.emplace(key, e);
        owned_.emplace(&e.node(), true);
        return e;
    }

    std::unordered_map<Key, Expr, KeyHash> table_;
    std::unordered_map<const Node *, bool> owned_;
    // Keeps foreign nodes alive so their addresses stay valid as keys.
    std::unordered_map<const Node *, std::pair<Expr, Expr>> adopted_;
};

} // namespace jetdiv

#endif
