#include <gtest/gtest.h>

#include <random>
#include <vector>

#include <jetdiv/eval.hpp>
#include <jetdiv/parser.hpp>

#include "test_support.hpp"

namespace jetdiv
{
namespace
{

using testing::close;

std::vector<double> coeff_vector(const Jet &j)
{
    return {j.coeffs().begin(), j.coeffs().end()};
}

TEST(EvalJet, variable)
{
    EXPECT_EQ(coeff_vector(eval_jet(parse("x"), 3, 2)), (std::vector<double>{3, 1, 0}));
}

TEST(EvalJet, tangent_and_geometric_series)
{
    const auto tan = derivatives(eval_jet(parse("sin(x)/cos(x)"), 0, 5));
    const std::vector<double> tan_expected{0, 1, 0, 2, 0, 16};
    for (std::size_t k = 0; k < tan_expected.size(); ++k) {
        EXPECT_NEAR(tan[k], tan_expected[k], 1e-12) << k;
    }
    EXPECT_EQ(derivatives(eval_jet(parse("1/(1-x)"), 0, 4)), (std::vector<double>{1, 1, 2, 6, 24}));
    EXPECT_EQ(derivatives(eval_jet(parse("1/(1\xE2\x88\x92x)"), 0, 4)), (std::vector<double>{1, 1, 2, 6, 24}));
}

TEST(EvalJet, integer_powers)
{
    const auto d = derivatives(eval_jet(parse("x^3"), 2, 4));
    EXPECT_EQ(d, (std::vector<double>{8, 12, 12, 6, 0}));
    const auto inv = derivatives(eval_jet(parse("x^-1"), 2, 2));
    EXPECT_TRUE(close(inv[0], 0.5, 1e-15));
    EXPECT_TRUE(close(inv[1], -0.25, 1e-15));
    EXPECT_TRUE(close(inv[2], 0.25, 1e-15));
}

TEST(EvalJet, quotient_methods_agree)
{
    const Expr e = parse("(x/(1+x))/(2-x) + x^-2");
    const Jet a = eval_jet(e, 0.4, 8);
    EvalOptions cramer;
    cramer.method = QuotientMethod::cramer;
    EvalOptions recip;
    recip.method = QuotientMethod::reciprocal;
    const Jet b = eval_jet(e, 0.4, 8, cramer);
    const Jet c = eval_jet(e, 0.4, 8, recip);
    for (std::size_t k = 0; k <= 8; ++k) {
        EXPECT_TRUE(close(a[k], b[k], 1e-10)) << k;
        EXPECT_TRUE(close(a[k], c[k], 1e-10)) << k;
    }
    EXPECT_THROW(eval_jet(e, 0.4, cramer_max_order + 1, cramer), SizeLimitError);
}

TEST(EvalJet, errors_are_annotated_with_position)
{
    try {
        eval_jet(parse("1/x"), 0, 2);
        FAIL();
    } catch (const PoleError &e) {
        ASSERT_TRUE(e.position());
        EXPECT_EQ(*e.position(), 1U);
    }
    try {
        eval_jet(parse("2 + ln(x - 1)"), 0, 2);
        FAIL();
    } catch (const DomainError &e) {
        ASSERT_TRUE(e.position());
        EXPECT_EQ(*e.position(), 4U);
    }
    EXPECT_THROW(eval_jet(parse("x^-3"), 0, 1), PoleError);
    EXPECT_THROW(eval_jet(parse("sqrt(x)"), 0, 1), DomainError);
}

TEST(EvalJet, records_quotient_denominators)
{
    std::vector<QuotientNote> notes;
    EvalOptions opts;
    opts.notes = &notes;
    eval_jet(parse("1/(x - 1e-9) + x/2"), 0, 3, opts);
    ASSERT_EQ(notes.size(), 2U);
    EXPECT_TRUE(close(notes[0].denominator, -1e-9, 1e-15));
    EXPECT_EQ(notes[0].position, 1U);
    EXPECT_EQ(notes[1].denominator, 2.0);
}

TEST(EvalPoint, examples)
{
    EXPECT_EQ(eval_point(parse("x^3"), 2), 8.0);
    EXPECT_EQ(eval_point(parse("sin(x)"), 0), 0.0);
    EXPECT_EQ(eval_point(parse("1/(1-x)"), 0.5), 2.0);
    EXPECT_EQ(eval_point(parse("sqrt(x)"), 0), 0.0);
    EXPECT_THROW(eval_point(parse("1/(1-x)"), 1), PoleError);
    EXPECT_THROW(eval_point(parse("ln(x)"), 0), DomainError);
    EXPECT_THROW(eval_point(parse("sqrt(x)"), -1), DomainError);
    EXPECT_THROW(eval_point(parse("exp(x)"), 1000), NonFiniteError);
}

TEST(Properties, jet_value_matches_point_evaluation)
{
    const char *exprs[] = {
        "sin(x)/cos(x)", "x/sin(x)",        "(1+x^2)/(1-x)", "exp(x)/(1+x)",        "(x/(1+x))/(2-x)",
        "ln(1+x)/x",     "sqrt(x)/(1+x)",   "x^-2",          "exp(-x)/(2+sin(x))", "cos(x)/(1+x/(2+x))",
    };
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> point(0.1, 0.9);
    for (const char *text : exprs) {
        const Expr e = parse(text);
        for (int trial = 0; trial < 20; ++trial) {
            const double x0 = point(rng);
            EXPECT_NEAR(eval_jet(e, x0, 6).value(), eval_point(e, x0), 1e-12) << text << " at " << x0;
        }
    }
}

} // namespace
} // namespace jetdiv
