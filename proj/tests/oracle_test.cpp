#include <gtest/gtest.h>

#include <fstream>

#include <jetdiv/corpus.hpp>
#include <jetdiv/oracle.hpp>
#include <jetdiv/parser.hpp>

namespace jetdiv
{
namespace
{

std::vector<CorpusCase> shipped()
{
    std::ifstream in(JETDIV_CORPUS);
    return load_corpus(in);
}

TEST(SymbolicNth, examples)
{
    EXPECT_EQ(symbolic_nth(parse("x^3"), 2, 1), 6.0);
    EXPECT_EQ(symbolic_nth(parse("sin(x)"), 4, 0), 0.0);
    EXPECT_NEAR(symbolic_nth(parse("sin(x)/cos(x)"), 5, 0), 16.0, 1e-12);
    EXPECT_THROW(symbolic_nth(parse("x"), symbolic_max_order + 1, 0), SwellLimitError);
}

TEST(FiniteDifference, examples)
{
    EXPECT_NEAR(finite_difference(parse("sin(x)"), 1, 0), 1.0, 1e-8);
    EXPECT_NEAR(finite_difference(parse("x^2"), 2, 3), 2.0, 1e-6);
    EXPECT_NEAR(finite_difference(parse("1/(1-x)"), 3, 0, 1e-2), 6.0, 1e-3);
    EXPECT_THROW(finite_difference(parse("x"), 5, 0), std::invalid_argument);
    EXPECT_THROW(finite_difference(parse("x"), 0, 0), std::invalid_argument);
    EXPECT_THROW(finite_difference(parse("sqrt(x)"), 1, 0), DomainError);
}

TEST(FiniteDifference, agrees_with_symbolic_over_corpus)
{
    for (const auto &c : shipped()) {
        const Expr e = parse(c.expr_text);
        DerivativeTower tower(e);
        for (int k = 1; k <= std::min(c.order, fd_max_order); ++k) {
            const double ref = eval_point(tower.at(k), c.x0);
            const double fd = finite_difference(e, k, c.x0);
            EXPECT_TRUE(fd_agrees(fd, ref)) << c.expr_text << " k=" << k << " fd=" << fd << " sym=" << ref;
        }
    }
}

TEST(Tolerance, near_zero_switches_to_absolute)
{
    EXPECT_TRUE(within_tolerance(1.0 + 1e-10, 1.0, 1e-9));
    EXPECT_FALSE(within_tolerance(1.0 + 1e-8, 1.0, 1e-9));
    EXPECT_TRUE(within_tolerance(5e-13, 0.0, 1e-9));
    EXPECT_FALSE(within_tolerance(5e-12, 0.0, 1e-9));
    EXPECT_TRUE(within_tolerance(1e-9 + 5e-13, 1e-9, 1e-9));
}

TEST(RunCase, every_method_passes_the_corpus)
{
    for (const auto &c : shipped()) {
        const auto rec = run_case(c, QuotientMethod::recursion);
        EXPECT_TRUE(rec.passed) << "line " << c.id << " " << rec.error.value_or("");
        const auto recip = run_case(c, QuotientMethod::reciprocal);
        EXPECT_TRUE(recip.passed) << "line " << c.id << " " << recip.error.value_or("");
        const auto cram = run_case(c, QuotientMethod::cramer);
        EXPECT_TRUE(cram.passed) << "line " << c.id << " " << cram.error.value_or("");
    }
}

TEST(RunCase, failures_become_verdicts)
{
    CorpusCase pole{"1/x", 0.0, 3, std::nullopt, 1e-9, 0};
    const auto v = run_case(pole, QuotientMethod::recursion);
    EXPECT_FALSE(v.passed);
    ASSERT_TRUE(v.error);
    EXPECT_EQ(v.error->rfind("pole error", 0), 0U) << *v.error;

    CorpusCase wrong{"x^2", 1.0, 2, std::vector<double>{1, 2, 2.5}, 1e-9, 0};
    const auto w = run_case(wrong, QuotientMethod::recursion);
    EXPECT_FALSE(w.passed);
    EXPECT_FALSE(w.error);
    EXPECT_TRUE(w.orders[1].pass);
    EXPECT_FALSE(w.orders[2].pass);
    EXPECT_DOUBLE_EQ(w.worst_rel, 0.2);
}

TEST(RunCase, deterministic)
{
    const auto cases = shipped();
    for (const auto &c : cases) {
        const auto a = case_derivatives(c, QuotientMethod::recursion);
        const auto b = case_derivatives(c, QuotientMethod::recursion);
        EXPECT_EQ(a, b) << c.expr_text;
    }
}

} // namespace
} // namespace jetdiv
