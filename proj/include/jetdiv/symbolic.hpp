#ifndef JETDIV_SYMBOLIC_HPP
#define JETDIV_SYMBOLIC_HPP

#include <optional>
#include <unordered_map>
#include <variant>

#include <jetdiv/expr.hpp>

namespace jetdiv
{

/// First-derivative rewriting with the textbook rules (quotient rule for ÷,
/// chain rule for functions). Simplification is limited to
/// 0*e -> 0, e*1 -> e, e+0 -> e, e-0 -> e, 0/e -> 0, e^1 -> e,
/// (e^a)^b -> e^(ab) and folding of constant operands. Quotients whose
/// denominator is already a power are differentiated without squaring it.
///
/// A Differentiator remembers every derivative it has produced, so applying
/// it k times costs time proportional to the size of the resulting DAG.
class Differentiator
{
public:
    Expr derivative(const Expr &e)
    {
        return d(b_.adopt(e));
    }

    ExprBuilder &builder() noexcept
    {
        return b_;
    }

    // Simplifying constructors.

    Expr add(const Expr &a, const Expr &b)
    {
        if (is_const(a, 0.0)) {
            return b;
        }
        if (is_const(b, 0.0)) {
            return a;
        }
        if (const auto ca = const_of(a), cb = const_of(b); ca && cb) {
            return b_.constant(*ca + *cb);
        }
        return b_.binary(BinaryOp::add, a, b);
    }

    Expr sub(const Expr &a, const Expr &b)
    {
        if (is_const(b, 0.0)) {
            return a;
        }
        if (is_const(a, 0.0)) {
            return neg(b);
        }
        if (const auto ca = const_of(a), cb = const_of(b); ca && cb) {
            return b_.constant(*ca - *cb);
        }
        return b_.binary(BinaryOp::sub, a, b);
    }

    Expr mul(const Expr &a, const Expr &b)
    {
        if (is_const(a, 0.0) || is_const(b, 0.0)) {
            return b_.constant(0.0);
        }
        if (is_const(a, 1.0)) {
            return b;
        }
        if (is_const(b, 1.0)) {
            return a;
        }
        if (const auto ca = const_of(a), cb = const_of(b); ca && cb) {
            return b_.constant(*ca * *cb);
        }
        return b_.binary(BinaryOp::mul, a, b);
    }

    Expr div(const Expr &a, const Expr &b)
    {
        if (is_const(a, 0.0)) {
            return b_.constant(0.0);
        }
        if (is_const(b, 1.0)) {
            return a;
        }
        return b_.binary(BinaryOp::div, a, b);
    }

    Expr neg(const Expr &a)
    {
        if (const auto c = const_of(a)) {
            return b_.constant(*c == 0.0 ? 0.0 : -*c);
        }
        if (const auto *u = a.as<Node::Unary>(); u != nullptr && u->op == UnaryOp::neg) {
            return Expr(u->child);
        }
        return b_.unary(UnaryOp::neg, a);
    }

    Expr pow(const Expr &a, double k)
    {
        if (k == 0.0) {
            return b_.constant(1.0);
        }
        if (k == 1.0) {
            return a;
        }
        if (const auto *p = a.as<Node::Binary>(); p != nullptr && p->op == BinaryOp::pow) {
            const double inner = std::get<Node::Const>(p->rhs->data).value;
            return pow(Expr(p->lhs), inner * k);
        }
        return b_.binary(BinaryOp::pow, a, b_.constant(k));
    }

    Expr fn(UnaryOp op, const Expr &a)
    {
        return b_.unary(op, a);
    }

private:
    static std::optional<double> const_of(const Expr &e)
    {
        if (const auto *c = e.as<Node::Const>()) {
            return c->value;
        }
        return std::nullopt;
    }

    static bool is_const(const Expr &e, double v)
    {
        const auto c = const_of(e);
        return c && *c == v;
    }

    // e must already be owned by the builder.
    Expr d(const Expr &e)
    {
        if (const auto it = memo_.find(&e.node()); it != memo_.end()) {
            return it->second;
        }
        Expr r = rule(e);
        memo_.emplace(&e.node(), r);
        return r;
    }

    Expr rule(const Expr &e)
    {
        const Node &n = e.node();
        if (std::holds_alternative<Node::Const>(n.data)) {
            return b_.constant(0.0);
        }
        if (std::holds_alternative<Node::Var>(n.data)) {
            return b_.constant(1.0);
        }
        if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
            const Expr a(u->child);
            const Expr da = d(a);
            switch (u->op) {
                case UnaryOp::neg:
                    return neg(da);
                case UnaryOp::exp:
                    return mul(e, da);
                case UnaryOp::ln:
                    return div(da, a);
                case UnaryOp::sin:
                    return mul(fn(UnaryOp::cos, a), da);
                case UnaryOp::cos:
                    return mul(neg(fn(UnaryOp::sin, a)), da);
                case UnaryOp::sqrt:
                    return div(da, mul(b_.constant(2.0), e));
            }
        }
        const auto &bin = std::get<Node::Binary>(n.data);
        const Expr l(bin.lhs);
        const Expr r(bin.rhs);
        switch (bin.op) {
            case BinaryOp::add:
                return add(d(l), d(r));
            case BinaryOp::sub:
                return sub(d(l), d(r));
            case BinaryOp::mul:
                return add(mul(d(l), r), mul(l, d(r)));
            case BinaryOp::div: {
                // (N/D^m)' = (N'D - mND')/D^(m+1)
                if (const auto *p = r.as<Node::Binary>(); p != nullptr && p->op == BinaryOp::pow) {
                    const double m = std::get<Node::Const>(p->rhs->data).value;
                    if (m > 0.0) {
                        const Expr base(p->lhs);
                        return div(sub(mul(d(l), base), mul(mul(b_.constant(m), l), d(base))), pow(base, m + 1.0));
                    }
                }
                return div(sub(mul(d(l), r), mul(l, d(r))), pow(r, 2.0));
            }
            case BinaryOp::pow: {
                const double k = std::get<Node::Const>(r.node().data).value;
                return mul(mul(b_.constant(k), pow(l, k - 1.0)), d(l));
            }
        }
        return b_.constant(0.0);
    }

    ExprBuilder b_;
    std::unordered_map<const Node *, Expr> memo_;
};

inline Expr symbolic_derivative(const Expr &e)
{
    Differentiator diff;
    return diff.derivative(e);
}

} // namespace jetdiv

#endif
