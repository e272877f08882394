#ifndef JETDIV_ELEMENTARY_HPP
#define JETDIV_ELEMENTARY_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <jetdiv/jet.hpp>

namespace jetdiv
{

enum class Function { exp, ln, sin, cos, sqrt, pow_int };

inline std::string_view function_name(Function f)
{
    switch (f) {
        case Function::exp:
            return "exp";
        case Function::ln:
            return "ln";
        case Function::sin:
            return "sin";
        case Function::cos:
            return "cos";
        case Function::sqrt:
            return "sqrt";
        case Function::pow_int:
            return "pow";
    }
    return "?";
}

// The recurrences below all follow from differentiating f(v(x)) once and
// matching scaled coefficients; k*w[k] is the scaled coefficient of w'.

inline Jet exp(const Jet &v, Summation mode = Summation::naive)
{
    const auto a = v.coeffs();
    std::vector<double> e(a.size());
    e[0] = std::exp(a[0]);
    for (std::size_t k = 1; k < e.size(); ++k) {
        detail::Accumulator acc(mode);
        for (std::size_t j = 1; j <= k; ++j) {
            acc.add_product(static_cast<double>(j) * a[j], e[k - j]);
        }
        e[k] = acc.value() / static_cast<double>(k);
    }
    return Jet(v.point(), std::move(e));
}

inline Jet ln(const Jet &v, Summation mode = Summation::naive)
{
    const auto a = v.coeffs();
    if (!(a[0] > 0.0)) {
        throw DomainError("ln needs a positive argument, got " + format_number(a[0]));
    }
    std::vector<double> l(a.size());
    l[0] = std::log(a[0]);
    for (std::size_t k = 1; k < l.size(); ++k) {
        detail::Accumulator acc(mode);
        for (std::size_t j = 1; j < k; ++j) {
            acc.add_product(static_cast<double>(j) * l[j], a[k - j]);
        }
        l[k] = (a[k] - acc.value() / static_cast<double>(k)) / a[0];
    }
    return Jet(v.point(), std::move(l));
}

// sin and cos are coupled: each one's recurrence needs the other.
inline std::pair<Jet, Jet> sin_cos(const Jet &v, Summation mode = Summation::naive)
{
    const auto a = v.coeffs();
    std::vector<double> s(a.size());
    std::vector<double> c(a.size());
    s[0] = std::sin(a[0]);
    c[0] = std::cos(a[0]);
    for (std::size_t k = 1; k < s.size(); ++k) {
        detail::Accumulator sacc(mode);
        detail::Accumulator cacc(mode);
        for (std::size_t j = 1; j <= k; ++j) {
            const double ja = static_cast<double>(j) * a[j];
            sacc.add_product(ja, c[k - j]);
            cacc.add_product(ja, s[k - j]);
        }
        s[k] = sacc.value() / static_cast<double>(k);
        c[k] = -cacc.value() / static_cast<double>(k);
    }
    return {Jet(v.point(), std::move(s)), Jet(v.point(), std::move(c))};
}

inline Jet sin(const Jet &v, Summation mode = Summation::naive)
{
    return sin_cos(v, mode).first;
}

inline Jet cos(const Jet &v, Summation mode = Summation::naive)
{
    return sin_cos(v, mode).second;
}

inline Jet sqrt(const Jet &v, Summation mode = Summation::naive)
{
    const auto a = v.coeffs();
    if (!(a[0] > 0.0)) {
        throw DomainError("sqrt needs a positive argument for its derivatives, got " + format_number(a[0]));
    }
    std::vector<double> q(a.size());
    q[0] = std::sqrt(a[0]);
    for (std::size_t k = 1; k < q.size(); ++k) {
        detail::Accumulator acc(mode);
        for (std::size_t j = 1; j < k; ++j) {
            acc.add_product(q[j], q[k - j]);
        }
        q[k] = (a[k] - acc.value()) / (2.0 * q[0]);
    }
    return Jet(v.point(), std::move(q));
}

// v^k for integer k by binary exponentiation; negative k goes through the
// reciprocal of v^|k|.
inline Jet pow(const Jet &v, long exponent, Summation mode = Summation::naive)
{
    if (exponent < 0 && !(std::abs(v.value()) > pole_threshold)) {
        throw PoleError("negative power of a base that vanishes at x0 = " + std::to_string(v.point()));
    }
    auto magnitude = exponent < 0 ? 0UL - static_cast<unsigned long>(exponent) : static_cast<unsigned long>(exponent);
    Jet result = jet_const(1.0, v.point(), v.order());
    Jet base = v;
    while (magnitude != 0) {
        if (magnitude & 1U) {
            result = mul(result, base, mode);
        }
        magnitude >>= 1U;
        if (magnitude != 0) {
            base = mul(base, base, mode);
        }
    }
    return exponent < 0 ? reciprocal(result, mode) : result;
}

inline Jet lift_elementary(Function f, const Jet &v, long exponent = 0, Summation mode = Summation::naive)
{
    switch (f) {
        case Function::exp:
            return exp(v, mode);
        case Function::ln:
            return ln(v, mode);
        case Function::sin:
            return sin(v, mode);
        case Function::cos:
            return cos(v, mode);
        case Function::sqrt:
            return sqrt(v, mode);
        case Function::pow_int:
            return pow(v, exponent, mode);
    }
    throw std::invalid_argument("unknown elementary function");
}

} // namespace jetdiv

#endif
