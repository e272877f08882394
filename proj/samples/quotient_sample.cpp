// Derivatives of tan(x) = sin(x)/cos(x) at 0, three ways.
#include <cstdio>

#include <jetdiv/jetdiv.hpp>

int main()
{
    using namespace jetdiv;

    constexpr std::size_t order = 9;
    const Jet x = jet_var(0.0, order);
    const auto [s, c] = sin_cos(x);

    const auto by_recursion = derivatives(div(s, c));
    const auto by_reciprocal = derivatives(mul(s, reciprocal(c)));

    const auto system = build_quotient_system(s, c);
    const auto by_cramer = cramer_solve(system.matrix, system.rhs);

    std::printf("%3s %16s %16s %16s\n", "k", "recursion", "reciprocal", "cramer (scaled)");
    for (std::size_t k = 0; k <= order; ++k) {
        std::printf("%3zu %16.10g %16.10g %16.10g\n", k, by_recursion[k], by_reciprocal[k], by_cramer.solution[k]);
    }
    std::printf("cramer residual %.3g\n", by_cramer.residual_inf);
}
