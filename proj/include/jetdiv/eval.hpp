#ifndef JETDIV_EVAL_HPP
#define JETDIV_EVAL_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <jetdiv/elementary.hpp>
#include <jetdiv/error.hpp>
#include <jetdiv/expr.hpp>
#include <jetdiv/jet.hpp>
#include <jetdiv/toeplitz.hpp>

namespace jetdiv
{

// How ÷ nodes (and negative powers) are turned into jets.
enum class QuotientMethod {
    recursion,  // jet div
    cramer,     // Cramer's rule on the quotient system
    reciprocal, // u * reciprocal(v)
};

inline std::string_view method_name(QuotientMethod m)
{
    switch (m) {
        case QuotientMethod::recursion:
            return "recursion";
        case QuotientMethod::cramer:
            return "cramer";
        case QuotientMethod::reciprocal:
            return "reciprocal";
    }
    return "?";
}

inline std::optional<QuotientMethod> quotient_method_from_name(std::string_view name)
{
    if (name == "recursion") {
        return QuotientMethod::recursion;
    }
    if (name == "cramer") {
        return QuotientMethod::cramer;
    }
    if (name == "reciprocal") {
        return QuotientMethod::reciprocal;
    }
    return std::nullopt;
}

// One quotient evaluated during eval_jet, for conditioning diagnostics.
struct QuotientNote {
    std::optional<std::size_t> position;
    double denominator;
};

struct EvalOptions {
    QuotientMethod method = QuotientMethod::recursion;
    Summation summation = Summation::naive;
    std::vector<QuotientNote> *notes = nullptr;
};

inline Jet quotient(const Jet &u, const Jet &v, QuotientMethod method, Summation mode = Summation::naive)
{
    switch (method) {
        case QuotientMethod::recursion:
            return div(u, v, mode);
        case QuotientMethod::cramer:
            return solve_quotient(u, v, SolveMethod::cramer);
        case QuotientMethod::reciprocal:
            return mul(u, reciprocal(v, mode), mode);
    }
    throw std::invalid_argument("unknown quotient method");
}

namespace detail
{

template <typename F>
auto annotate(const Node &n, F &&f) -> decltype(f())
{
    try {
        return f();
    } catch (Error &e) {
        if (!e.position() && n.position) {
            e.set_position(*n.position);
        }
        throw;
    }
}

class PointEvaluator
{
public:
    explicit PointEvaluator(double x) : x_(x) {}

    double eval(const Node &n)
    {
        if (const auto it = memo_.find(&n); it != memo_.end()) {
            return it->second;
        }
        const double v = annotate(n, [&] { return compute(n); });
        if (!std::isfinite(v)) {
            throw NonFiniteError("evaluation produced a non-finite value", n.position);
        }
        memo_.emplace(&n, v);
        return v;
    }

private:
    double compute(const Node &n)
    {
        if (const auto *c = std::get_if<Node::Const>(&n.data)) {
            return c->value;
        }
        if (std::holds_alternative<Node::Var>(n.data)) {
            return x_;
        }
        if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
            const double a = eval(*u->child);
            switch (u->op) {
                case UnaryOp::neg:
                    return -a;
                case UnaryOp::exp:
                    return std::exp(a);
                case UnaryOp::ln:
                    if (!(a > 0.0)) {
                        throw DomainError("ln of non-positive value " + format_number(a));
                    }
                    return std::log(a);
                case UnaryOp::sin:
                    return std::sin(a);
                case UnaryOp::cos:
                    return std::cos(a);
                case UnaryOp::sqrt:
                    if (a < 0.0) {
                        throw DomainError("sqrt of negative value " + format_number(a));
                    }
                    return std::sqrt(a);
            }
        }
        const auto &b = std::get<Node::Binary>(n.data);
        const double l = eval(*b.lhs);
        if (b.op == BinaryOp::pow) {
            const double k = std::get<Node::Const>(b.rhs->data).value;
            if (k < 0.0 && !(std::abs(l) > pole_threshold)) {
                throw PoleError("negative power of zero");
            }
            return std::pow(l, k);
        }
        const double r = eval(*b.rhs);
        switch (b.op) {
            case BinaryOp::add:
                return l + r;
            case BinaryOp::sub:
                return l - r;
            case BinaryOp::mul:
                return l * r;
            case BinaryOp::div:
                if (!(std::abs(r) > pole_threshold)) {
                    throw PoleError("division by zero");
                }
                return l / r;
            case BinaryOp::pow:
                break;
        }
        return 0.0;
    }

    double x_;
    std::unordered_map<const Node *, double> memo_;
};

class JetEvaluator
{
public:
    JetEvaluator(double x0, std::size_t order, const EvalOptions &opts) : x0_(x0), order_(order), opts_(opts) {}

    const Jet &eval(const Node &n)
    {
        if (const auto it = memo_.find(&n); it != memo_.end()) {
            return it->second;
        }
        Jet j = annotate(n, [&] { return compute(n); });
        return memo_.emplace(&n, std::move(j)).first->second;
    }

private:
    Jet divide(const Node &n, const Jet &u, const Jet &v)
    {
        if (opts_.notes != nullptr) {
            opts_.notes->push_back({n.position, v.value()});
        }
        return quotient(u, v, opts_.method, opts_.summation);
    }

    Jet compute(const Node &n)
    {
        const Summation mode = opts_.summation;
        if (const auto *c = std::get_if<Node::Const>(&n.data)) {
            return jet_const(c->value, x0_, order_);
        }
        if (std::holds_alternative<Node::Var>(n.data)) {
            return jet_var(x0_, order_);
        }
        if (const auto *u = std::get_if<Node::Unary>(&n.data)) {
            const Jet &a = eval(*u->child);
            switch (u->op) {
                case UnaryOp::neg:
                    return -a;
                case UnaryOp::exp:
                    return exp(a, mode);
                case UnaryOp::ln:
                    return ln(a, mode);
                case UnaryOp::sin:
                    return sin(a, mode);
                case UnaryOp::cos:
                    return cos(a, mode);
                case UnaryOp::sqrt:
                    return sqrt(a, mode);
            }
        }
        const auto &b = std::get<Node::Binary>(n.data);
        const Jet &l = eval(*b.lhs);
        if (b.op == BinaryOp::pow) {
            const auto k = static_cast<long>(std::get<Node::Const>(b.rhs->data).value);
            if (k >= 0) {
                return pow(l, k, mode);
            }
            return divide(n, jet_const(1.0, x0_, order_), pow(l, -k, mode));
        }
        const Jet &r = eval(*b.rhs);
        switch (b.op) {
            case BinaryOp::add:
                return l + r;
            case BinaryOp::sub:
                return l - r;
            case BinaryOp::mul:
                return mul(l, r, mode);
            case BinaryOp::div:
                return divide(n, l, r);
            case BinaryOp::pow:
                break;
        }
        throw std::logic_error("unreachable");
    }

    double x0_;
    std::size_t order_;
    const EvalOptions &opts_;
    std::unordered_map<const Node *, Jet> memo_;
};

} // namespace detail

inline double eval_point(const Expr &e, double x)
{
    return detail::PointEvaluator(x).eval(e.node());
}

/// Jet of e at x0 truncated at the given order. Quotient nodes go through the
/// method selected in opts; errors carry the source position of the node that
/// raised them.
inline Jet eval_jet(const Expr &e, double x0, std::size_t order, const EvalOptions &opts = {})
{
    return detail::JetEvaluator(x0, order, opts).eval(e.node());
}

} // namespace jetdiv

#endif
