#ifndef JETDIV_TOEPLITZ_HPP
#define JETDIV_TOEPLITZ_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <jetdiv/error.hpp>
#include <jetdiv/jet.hpp>

namespace jetdiv
{

// Largest truncation order the Cramer route accepts (systems up to 13x13).
inline constexpr std::size_t cramer_max_order = 12;

class DenseMatrix
{
public:
    explicit DenseMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static DenseMatrix identity(std::size_t n)
    {
        DenseMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t size() const noexcept
    {
        return n_;
    }

    double &operator()(std::size_t i, std::size_t j)
    {
        return data_[i * n_ + j];
    }

    double operator()(std::size_t i, std::size_t j) const
    {
        return data_[i * n_ + j];
    }

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Lower-triangular Toeplitz matrix held by its first column:
/// entry(i, j) = col[i - j] for i >= j, zero above the diagonal.
class LowerToeplitz
{
public:
    explicit LowerToeplitz(std::vector<double> first_column) : col_(std::move(first_column))
    {
        if (col_.empty()) {
            throw std::invalid_argument("a Toeplitz system needs at least one row");
        }
        for (double c : col_) {
            if (!std::isfinite(c)) {
                throw NonFiniteError("Toeplitz column entry is not finite");
            }
        }
    }

    std::size_t size() const noexcept
    {
        return col_.size();
    }

    std::span<const double> column() const noexcept
    {
        return col_;
    }

    double entry(std::size_t i, std::size_t j) const
    {
        return i >= j ? col_.at(i - j) : 0.0;
    }

    bool singular() const noexcept
    {
        return col_[0] == 0.0;
    }

    DenseMatrix dense() const
    {
        DenseMatrix m(size());
        for (std::size_t i = 0; i < size(); ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                m(i, j) = col_[i - j];
            }
        }
        return m;
    }

private:
    std::vector<double> col_;
};

enum class SolveMethod { back_substitution, cramer };

inline std::string_view method_name(SolveMethod m)
{
    return m == SolveMethod::back_substitution ? "back-substitution" : "cramer";
}

struct SolveResult {
    std::vector<double> solution;
    SolveMethod method;
    double residual_inf;
};

struct QuotientSystem {
    LowerToeplitz matrix;
    std::vector<double> rhs;
};

// The (n+1)x(n+1) system L y = u whose unknowns are the scaled coefficients
// of u/v: L carries the scaled coefficients of v down its first column.
inline QuotientSystem build_quotient_system(const Jet &u, const Jet &v)
{
    detail::require_aligned(u, v);
    return {LowerToeplitz(std::vector<double>(v.coeffs().begin(), v.coeffs().end())),
            std::vector<double>(u.coeffs().begin(), u.coeffs().end())};
}

namespace detail
{

inline void require_rhs(const LowerToeplitz &L, std::span<const double> b)
{
    if (b.size() != L.size()) {
        throw std::invalid_argument("right-hand side has " + std::to_string(b.size()) + " entries, system has "
                                    + std::to_string(L.size()));
    }
}

inline double residual_inf(const LowerToeplitz &L, std::span<const double> x, std::span<const double> b)
{
    const auto col = L.column();
    double worst = 0.0;
    for (std::size_t r = 0; r < L.size(); ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k <= r; ++k) {
            s += col[r - k] * x[k];
        }
        worst = std::max(worst, std::abs(s - b[r]));
    }
    if (!std::isfinite(worst)) {
        throw NonFiniteError("residual is not finite");
    }
    return worst;
}

} // namespace detail

/// Sequential solve in increasing row order,
///     x[r] = (b[r] - sum_{k<r} col[r-k] x[k]) / col[0].
/// Conventionally this is forward substitution; the recursion is the same one
/// jet division runs.
inline SolveResult back_substitute(const LowerToeplitz &L, std::span<const double> b)
{
    detail::require_rhs(L, b);
    if (L.singular()) {
        throw SingularError("triangular system has a zero diagonal");
    }
    const auto col = L.column();
    std::vector<double> x(L.size());
    for (std::size_t r = 0; r < x.size(); ++r) {
        double s = 0.0;
        for (std::size_t k = 0; k < r; ++k) {
            s += col[r - k] * x[k];
        }
        x[r] = (b[r] - s) / col[0];
        if (!std::isfinite(x[r])) {
            throw NonFiniteError("solution component " + std::to_string(r) + " overflowed");
        }
    }
    const double res = detail::residual_inf(L, x, b);
    return {std::move(x), SolveMethod::back_substitution, res};
}

/// Determinant by Gaussian elimination with partial pivoting. Returns 0 for a
/// singular matrix.
inline double determinant(DenseMatrix m)
{
    const std::size_t n = m.size();
    double det = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(m(r, c)) > std::abs(m(pivot, c))) {
                pivot = r;
            }
        }
        if (m(pivot, c) == 0.0) {
            return 0.0;
        }
        if (pivot != c) {
            for (std::size_t k = 0; k < n; ++k) {
                std::swap(m(c, k), m(pivot, k));
            }
            det = -det;
        }
        det *= m(c, c);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m(r, c) / m(c, c);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t k = c + 1; k < n; ++k) {
                m(r, k) -= f * m(c, k);
            }
        }
    }
    return det;
}

/// x[k] = det(L with column k replaced by b) / det(L). Quartic cost; kept as
/// an independent check on back_substitute, limited to order cramer_max_order.
inline SolveResult cramer_solve(const LowerToeplitz &L, std::span<const double> b)
{
    detail::require_rhs(L, b);
    if (L.size() > cramer_max_order + 1) {
        throw SizeLimitError("Cramer's rule is limited to order " + std::to_string(cramer_max_order) + ", got "
                             + std::to_string(L.size() - 1));
    }
    if (L.singular()) {
        throw SingularError("triangular system has a zero diagonal");
    }
    const DenseMatrix base = L.dense();
    const double det = determinant(base);
    if (det == 0.0) {
        throw SingularError("determinant underflowed to zero");
    }
    std::vector<double> x(L.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        DenseMatrix replaced = base;
        for (std::size_t i = 0; i < L.size(); ++i) {
            replaced(i, k) = b[i];
        }
        x[k] = determinant(std::move(replaced)) / det;
        if (!std::isfinite(x[k])) {
            throw NonFiniteError("solution component " + std::to_string(k) + " overflowed");
        }
    }
    const double res = detail::residual_inf(L, x, b);
    return {std::move(x), SolveMethod::cramer, res};
}

inline SolveResult solve(const LowerToeplitz &L, std::span<const double> b, SolveMethod method)
{
    return method == SolveMethod::cramer ? cramer_solve(L, b) : back_substitute(L, b);
}

// u/v as a jet, obtained by solving the quotient system with either route.
inline Jet solve_quotient(const Jet &u, const Jet &v, SolveMethod method)
{
    if (!(std::abs(v.value()) > pole_threshold)) {
        throw PoleError("denominator vanishes at x0 = " + format_number(v.point()));
    }
    const auto system = build_quotient_system(u, v);
    auto result = solve(system.matrix, system.rhs, method);
    return Jet(u.point(), std::move(result.solution));
}

} // namespace jetdiv

#endif
