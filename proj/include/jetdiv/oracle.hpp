#ifndef JETDIV_ORACLE_HPP
#define JETDIV_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <jetdiv/error.hpp>
#include <jetdiv/eval.hpp>
#include <jetdiv/expr.hpp>
#include <jetdiv/jet.hpp>
#include <jetdiv/parser.hpp>
#include <jetdiv/symbolic.hpp>

namespace jetdiv
{

// Highest order the symbolic oracle will produce.
inline constexpr int symbolic_max_order = 12;

// Highest order finite differences are trusted for.
inline constexpr int fd_max_order = 4;

// Below this magnitude an oracle value is compared absolutely.
inline constexpr double near_zero_threshold = 1e-8;
inline constexpr double near_zero_abs_tol = 1e-12;

// Agreement band for finite differences, relative with an absolute floor.
inline constexpr double fd_tolerance = 1e-4;

inline bool fd_agrees(double value, double reference)
{
    return std::abs(value - reference) <= std::max(fd_tolerance * std::abs(reference), fd_tolerance);
}

/// Successive symbolic derivatives e, e', e'', ... sharing one Differentiator,
/// so each new level reuses every subexpression built for earlier ones.
class DerivativeTower
{
public:
    explicit DerivativeTower(const Expr &e) : levels_{diff_.builder().adopt(e)} {}

    const Expr &at(int k)
    {
        if (k < 0) {
            throw std::invalid_argument("derivative order must be non-negative");
        }
        if (k > symbolic_max_order) {
            throw SwellLimitError("symbolic oracle is limited to order " + std::to_string(symbolic_max_order)
                                  + ", asked for " + std::to_string(k));
        }
        while (static_cast<int>(levels_.size()) <= k) {
            levels_.push_back(diff_.derivative(levels_.back()));
        }
        return levels_[static_cast<std::size_t>(k)];
    }

    // Values of the derivatives of order 0..kmax at x0.
    std::vector<double> values(int kmax, double x0)
    {
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(kmax) + 1);
        for (int k = 0; k <= kmax; ++k) {
            out.push_back(eval_point(at(k), x0));
        }
        return out;
    }

private:
    Differentiator diff_;
    std::vector<Expr> levels_;
};

inline double symbolic_nth(const Expr &e, int k, double x0)
{
    DerivativeTower tower(e);
    return eval_point(tower.at(k), x0);
}

inline double default_fd_step(int k)
{
    switch (k) {
        case 1:
            return 1e-5;
        case 2:
            return 1e-4;
        case 3:
            return 1e-3;
        case 4:
            return 1e-2;
        default:
            throw std::invalid_argument("finite differences support orders 1 to 4");
    }
}

namespace detail
{

// k-th central difference with spacing h: sum_i (-1)^i C(k,i) f(x0 + (k/2 - i) h) / h^k.
inline double central_difference(const Expr &e, int k, double x0, double h)
{
    double sum = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= k; ++i) {
        const double offset = (0.5 * k - i) * h;
        const double f = eval_point(e, x0 + offset);
        sum += ((i % 2 == 0) ? binom : -binom) * f;
        binom = binom * (k - i) / (i + 1);
    }
    return sum / std::pow(h, k);
}

} // namespace detail

/// Central-difference estimate of the k-th derivative (1 <= k <= 4) with one
/// Richardson step combining spacings h and h/2.
inline double finite_difference(const Expr &e, int k, double x0, double h)
{
    if (k < 1 || k > fd_max_order) {
        throw std::invalid_argument("finite differences support orders 1 to 4");
    }
    if (!(h > 0.0)) {
        throw std::invalid_argument("finite-difference step must be positive");
    }
    try {
        const double coarse = detail::central_difference(e, k, x0, h);
        const double fine = detail::central_difference(e, k, x0, 0.5 * h);
        return (4.0 * fine - coarse) / 3.0;
    } catch (const NumericError &err) {
        throw DomainError("finite-difference stencil leaves the domain: " + err.message());
    }
}

inline double finite_difference(const Expr &e, int k, double x0)
{
    return finite_difference(e, k, x0, default_fd_step(k));
}

struct CorpusCase {
    std::string expr_text;
    double x0 = 0.0;
    int order = 0;
    std::optional<std::vector<double>> expected;
    double rel_tol = 1e-9;
    // Source line in the corpus file; 0 for cases built in code.
    std::size_t id = 0;

    CorpusCase truncated(int m) const
    {
        CorpusCase c = *this;
        c.order = std::min(order, m);
        if (c.expected) {
            c.expected->resize(static_cast<std::size_t>(c.order) + 1);
        }
        return c;
    }
};

struct OrderVerdict {
    int k;
    double computed;
    double oracle;
    double abs_dev;
    double rel_dev;
    bool pass;
};

struct OracleVerdict {
    std::vector<OrderVerdict> orders;
    // Largest relative deviation over orders compared relatively.
    double worst_rel = 0.0;
    bool passed = false;
    // Set when the computation itself failed.
    std::optional<std::string> error;
};

// Relative comparison, or absolute near_zero_abs_tol when |oracle| is tiny.
inline bool within_tolerance(double computed, double oracle, double rel_tol)
{
    const double dev = std::abs(computed - oracle);
    if (std::abs(oracle) < near_zero_threshold) {
        return dev <= near_zero_abs_tol;
    }
    return dev <= rel_tol * std::abs(oracle);
}

inline OrderVerdict compare_order(int k, double computed, double oracle, double rel_tol)
{
    const double dev = std::abs(computed - oracle);
    const double rel = oracle != 0.0 ? dev / std::abs(oracle) : (dev == 0.0 ? 0.0 : HUGE_VAL);
    return {k, computed, oracle, dev, rel, within_tolerance(computed, oracle, rel_tol)};
}

inline OracleVerdict make_verdict(const std::vector<double> &computed, const std::vector<double> &oracle,
                                  double rel_tol)
{
    OracleVerdict v;
    v.passed = true;
    for (std::size_t k = 0; k < computed.size(); ++k) {
        auto ov = compare_order(static_cast<int>(k), computed[k], oracle[k], rel_tol);
        if (std::abs(ov.oracle) >= near_zero_threshold) {
            v.worst_rel = std::max(v.worst_rel, ov.rel_dev);
        }
        v.passed = v.passed && ov.pass;
        v.orders.push_back(ov);
    }
    return v;
}

inline std::vector<double> case_derivatives(const CorpusCase &c, QuotientMethod method,
                                            Summation mode = Summation::naive)
{
    const Expr e = parse(c.expr_text);
    EvalOptions opts;
    opts.method = method;
    opts.summation = mode;
    return derivatives(eval_jet(e, c.x0, static_cast<std::size_t>(c.order), opts));
}

/// Derivatives by the chosen quotient path, checked against the case's
/// expected values or, when it has none, the symbolic oracle. Any failure to
/// compute becomes a failed verdict with the error recorded.
inline OracleVerdict run_case(const CorpusCase &c, QuotientMethod method, Summation mode = Summation::naive)
{
    try {
        if (c.order < 0) {
            throw std::invalid_argument("negative order");
        }
        const auto computed = case_derivatives(c, method, mode);
        std::vector<double> oracle;
        if (c.expected) {
            if (c.expected->size() != computed.size()) {
                throw std::invalid_argument("expected values do not match the order");
            }
            oracle = *c.expected;
        } else {
            DerivativeTower tower(parse(c.expr_text));
            oracle = tower.values(c.order, c.x0);
        }
        return make_verdict(computed, oracle, c.rel_tol);
    } catch (const Error &e) {
        OracleVerdict v;
        v.error = std::string(e.kind()) + ": " + e.what();
        return v;
    } catch (const std::exception &e) {
        OracleVerdict v;
        v.error = std::string("error: ") + e.what();
        return v;
    }
}

} // namespace jetdiv

#endif
