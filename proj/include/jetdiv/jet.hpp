#ifndef JETDIV_JET_HPP
#define JETDIV_JET_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <jetdiv/error.hpp>

namespace jetdiv
{

// Denominators with |v(x0)| at or below this are treated as poles.
inline constexpr double pole_threshold = 1e-300;

// Below this the quotient is computed but flagged as ill-conditioned.
inline constexpr double conditioning_threshold = 1e-8;

enum class Summation { naive, compensated };

/// Truncated Taylor expansion of a univariate function around x0.
///
/// Coefficients are stored scaled, coeffs[j] = f^(j)(x0) / j!. A jet always
/// holds order()+1 finite coefficients; any operation that would produce NaN
/// or infinity throws NonFiniteError instead.
class Jet
{
public:
    Jet(double x0, std::vector<double> coeffs) : x0_(x0), coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw std::invalid_argument("a jet needs at least one coefficient");
        }
        if (!std::isfinite(x0_)) {
            throw NonFiniteError("expansion point is not finite");
        }
        for (std::size_t j = 0; j < coeffs_.size(); ++j) {
            if (!std::isfinite(coeffs_[j])) {
                throw NonFiniteError("coefficient " + std::to_string(j) + " is not finite");
            }
        }
    }

    double point() const noexcept
    {
        return x0_;
    }

    std::size_t order() const noexcept
    {
        return coeffs_.size() - 1;
    }

    double value() const noexcept
    {
        return coeffs_.front();
    }

    std::span<const double> coeffs() const noexcept
    {
        return coeffs_;
    }

    double operator[](std::size_t j) const
    {
        return coeffs_.at(j);
    }

    // Drop every coefficient above order m.
    Jet truncated(std::size_t m) const
    {
        if (m > order()) {
            throw std::invalid_argument("cannot truncate a jet to a higher order");
        }
        return Jet(x0_, std::vector<double>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(m + 1)));
    }

    friend bool operator==(const Jet &, const Jet &) = default;

private:
    double x0_;
    std::vector<double> coeffs_;
};

namespace detail
{

// Sum of products in a fixed order. The compensated mode carries the exact
// rounding error of every product (via fma) and every addition, which gives a
// result as accurate as if computed in doubled working precision.
class Accumulator
{
public:
    explicit Accumulator(Summation mode) noexcept : mode_(mode) {}

    void add_product(double a, double b) noexcept
    {
        if (mode_ == Summation::naive) {
            sum_ += a * b;
            return;
        }
        const double p = a * b;
        const double ep = std::fma(a, b, -p);
        add_exact(p, ep);
    }

    // Adds a*b + c*d. The result does not depend on which of the two products
    // comes first, which keeps the convolution symmetric in its operands.
    void add_product_pair(double a, double b, double c, double d) noexcept
    {
        if (mode_ == Summation::naive) {
            sum_ += a * b + c * d;
            return;
        }
        const double p1 = a * b;
        const double e1 = std::fma(a, b, -p1);
        const double p2 = c * d;
        const double e2 = std::fma(c, d, -p2);
        const auto [s, es] = two_sum(p1, p2);
        add_exact(s, es + (e1 + e2));
    }

    double value() const noexcept
    {
        return sum_ + carry_;
    }

private:
    static std::pair<double, double> two_sum(double a, double b) noexcept
    {
        const double s = a + b;
        const double bb = s - a;
        return {s, (a - (s - bb)) + (b - bb)};
    }

    void add_exact(double hi, double lo) noexcept
    {
        const auto [s, e] = two_sum(sum_, hi);
        sum_ = s;
        carry_ += e + lo;
    }

    Summation mode_;
    double sum_ = 0.0;
    double carry_ = 0.0;
};

inline void require_aligned(const Jet &a, const Jet &b)
{
    if (a.point() != b.point()) {
        throw AlignmentError("jets expanded at different points (" + format_number(a.point()) + " vs "
                             + format_number(b.point()) + ")");
    }
    if (a.order() != b.order()) {
        throw AlignmentError("jets truncated at different orders (" + std::to_string(a.order()) + " vs "
                             + std::to_string(b.order()) + ")");
    }
}

} // namespace detail

inline Jet jet_const(double c, double x0, std::size_t order)
{
    std::vector<double> coeffs(order + 1, 0.0);
    coeffs[0] = c;
    return Jet(x0, std::move(coeffs));
}

// Jet of the identity function f(x) = x.
inline Jet jet_var(double x0, std::size_t order)
{
    std::vector<double> coeffs(order + 1, 0.0);
    coeffs[0] = x0;
    if (order > 0) {
        coeffs[1] = 1.0;
    }
    return Jet(x0, std::move(coeffs));
}

// alpha*a + beta*b, coefficient by coefficient.
inline Jet linear_combine(const Jet &a, const Jet &b, double alpha, double beta)
{
    detail::require_aligned(a, b);
    std::vector<double> out(a.order() + 1);
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = alpha * a.coeffs()[j] + beta * b.coeffs()[j];
    }
    return Jet(a.point(), std::move(out));
}

inline Jet scale(const Jet &a, double alpha)
{
    std::vector<double> out(a.coeffs().begin(), a.coeffs().end());
    for (auto &c : out) {
        c *= alpha;
    }
    return Jet(a.point(), std::move(out));
}

/// Product of two jets: the Leibniz rule in scaled form,
///
///     (uv)[r] = sum_{j=0..r} u[j] * v[r-j].
///
/// The terms j and r-j are added as a pair before entering the accumulator,
/// walking j upwards from 0; mul(u, v) and mul(v, u) are bitwise identical.
inline Jet mul(const Jet &u, const Jet &v, Summation mode = Summation::naive)
{
    detail::require_aligned(u, v);
    const auto a = u.coeffs();
    const auto b = v.coeffs();
    std::vector<double> out(a.size());
    for (std::size_t r = 0; r < out.size(); ++r) {
        detail::Accumulator acc(mode);
        std::size_t j = 0;
        for (; j < r - j; ++j) {
            acc.add_product_pair(a[j], b[r - j], a[r - j], b[j]);
        }
        if (j == r - j) {
            acc.add_product(a[j], b[j]);
        }
        out[r] = acc.value();
    }
    return Jet(u.point(), std::move(out));
}

/// Quotient u/v by the forward recursion on the scaled coefficients:
///
///     y[r] = (u[r] - sum_{j=1..r} v[r+1-j] * y[j-1]) / v[0],   r = 0..n.
///
/// Each y[r] depends only on lower-order quotient coefficients, so the whole
/// jet costs (n+1)(n+2)/2 multiply-adds. Throws PoleError when
/// |v(x0)| <= pole_threshold.
inline Jet div(const Jet &u, const Jet &v, Summation mode = Summation::naive)
{
    detail::require_aligned(u, v);
    const auto num = u.coeffs();
    const auto den = v.coeffs();
    if (!(std::abs(den[0]) > pole_threshold)) {
        throw PoleError("denominator vanishes at x0 = " + format_number(v.point()));
    }
    std::vector<double> y(num.size());
    for (std::size_t r = 0; r < y.size(); ++r) {
        detail::Accumulator acc(mode);
        for (std::size_t j = 1; j <= r; ++j) {
            acc.add_product(den[r + 1 - j], y[j - 1]);
        }
        y[r] = (num[r] - acc.value()) / den[0];
        if (!std::isfinite(y[r])) {
            throw NonFiniteError("quotient coefficient " + std::to_string(r) + " overflowed");
        }
    }
    return Jet(u.point(), std::move(y));
}

inline Jet reciprocal(const Jet &v, Summation mode = Summation::naive)
{
    return div(jet_const(1.0, v.point(), v.order()), v, mode);
}

/// Raw derivatives f^(k)(x0) = k! * coeffs[k].
inline std::vector<double> derivatives(const Jet &j)
{
    const auto c = j.coeffs();
    std::vector<double> out(c.size());
    double factorial = 1.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (k > 1) {
            factorial *= static_cast<double>(k);
        }
        double value = 0.0;
        if (c[k] == 0.0) {
            value = 0.0;
        } else if (std::isfinite(factorial)) {
            value = factorial * c[k];
        } else {
            // k > 170: k! itself is not representable but the product may be.
            const double log_mag = std::log(std::abs(c[k])) + std::lgamma(static_cast<double>(k) + 1.0);
            value = std::copysign(std::exp(log_mag), c[k]);
        }
        if (!std::isfinite(value)) {
            throw OverflowError("derivative of order " + std::to_string(k) + " is not representable");
        }
        out[k] = value;
    }
    return out;
}

inline Jet operator+(const Jet &a, const Jet &b)
{
    return linear_combine(a, b, 1.0, 1.0);
}

inline Jet operator-(const Jet &a, const Jet &b)
{
    return linear_combine(a, b, 1.0, -1.0);
}

inline Jet operator-(const Jet &a)
{
    return scale(a, -1.0);
}

inline Jet operator*(const Jet &a, const Jet &b)
{
    return mul(a, b);
}

inline Jet operator/(const Jet &a, const Jet &b)
{
    return div(a, b);
}

} // namespace jetdiv

#endif
