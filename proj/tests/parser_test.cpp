#include <gtest/gtest.h>

#include <random>
#include <string>

#include <jetdiv/parser.hpp>

namespace jetdiv
{
namespace
{

Expr x()
{
    return Expr::variable();
}

Expr c(double v)
{
    return Expr::constant(v);
}

Expr bin(BinaryOp op, const Expr &a, const Expr &b)
{
    return Expr::binary(op, a, b);
}

Expr un(UnaryOp op, const Expr &a)
{
    return Expr::unary(op, a);
}

TEST(Tokenize, counts_and_kinds)
{
    const auto t = tokenize("sin(x)/cos(x)");
    // sin ( x ) / cos ( x )
    ASSERT_EQ(t.size(), 9U);
    EXPECT_EQ(t[0].kind, TokenKind::identifier);
    EXPECT_EQ(t[1].kind, TokenKind::paren);
    EXPECT_EQ(t[4].kind, TokenKind::op);
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_TRUE(tokenize("  \t ").empty());
}

TEST(Tokenize, number_literals)
{
    const auto t = tokenize("1.5e2*x");
    ASSERT_EQ(t.size(), 3U);
    EXPECT_EQ(t[0].kind, TokenKind::number);
    EXPECT_EQ(t[0].number, 150.0);
    EXPECT_TRUE(t[1].is(TokenKind::op, "*"));
    EXPECT_TRUE(t[2].is(TokenKind::identifier, "x"));
    EXPECT_EQ(tokenize(".25")[0].number, 0.25);
    EXPECT_EQ(tokenize("3.")[0].number, 3.0);
    EXPECT_EQ(tokenize("2E-3")[0].number, 0.002);
}

TEST(Tokenize, positions_increase)
{
    const auto t = tokenize("  exp( x ) +  12.5");
    for (std::size_t i = 1; i < t.size(); ++i) {
        EXPECT_LT(t[i - 1].position, t[i].position);
    }
    EXPECT_EQ(t[0].position, 2U);
    EXPECT_EQ(t.back().position, 14U);
}

TEST(Tokenize, errors_carry_position)
{
    try {
        tokenize("x + $");
        FAIL();
    } catch (const LexError &e) {
        ASSERT_TRUE(e.position());
        EXPECT_EQ(*e.position(), 4U);
    }
    EXPECT_THROW(tokenize("1e"), LexError);
    EXPECT_THROW(tokenize("1e999"), LexError);
    EXPECT_THROW(tokenize("x\xC3\xA9"), LexError);
}

TEST(Tokenize, unicode_minus)
{
    const auto t = tokenize("1\xE2\x88\x92x");
    ASSERT_EQ(t.size(), 3U);
    EXPECT_TRUE(t[1].is(TokenKind::op, "-"));
    EXPECT_EQ(t[2].position, 4U);
}

TEST(Parse, left_associative_division)
{
    const Expr e = parse("x/x/x");
    EXPECT_TRUE(structurally_equal(e, bin(BinaryOp::div, bin(BinaryOp::div, x(), x()), x())));
}

TEST(Parse, unary_minus_binds_looser_than_power)
{
    EXPECT_TRUE(structurally_equal(parse("-x^2"), un(UnaryOp::neg, bin(BinaryOp::pow, x(), c(2)))));
    EXPECT_TRUE(structurally_equal(parse("\xE2\x88\x92x^2"), parse("-x^2")));
    EXPECT_TRUE(structurally_equal(parse("2*-x"), bin(BinaryOp::mul, c(2), un(UnaryOp::neg, x()))));
}

TEST(Parse, function_calls_and_grouping)
{
    const Expr e = parse("sin(x)/(1+cos(x))");
    EXPECT_TRUE(structurally_equal(
        e, bin(BinaryOp::div, un(UnaryOp::sin, x()), bin(BinaryOp::add, c(1), un(UnaryOp::cos, x())))));
    EXPECT_TRUE(structurally_equal(parse("1 - x - x"), bin(BinaryOp::sub, bin(BinaryOp::sub, c(1), x()), x())));
    EXPECT_TRUE(structurally_equal(parse("1 + 2*x"), bin(BinaryOp::add, c(1), bin(BinaryOp::mul, c(2), x()))));
}

TEST(Parse, integer_exponents)
{
    EXPECT_TRUE(structurally_equal(parse("x^-2"), bin(BinaryOp::pow, x(), c(-2))));
    EXPECT_TRUE(structurally_equal(parse("x^(3)"), bin(BinaryOp::pow, x(), c(3))));
    // Right-associative chain folds into one integer: 2^3 = 8.
    EXPECT_TRUE(structurally_equal(parse("x^2^3"), bin(BinaryOp::pow, x(), c(8))));
    EXPECT_TRUE(structurally_equal(parse("(x^2)^3"), bin(BinaryOp::pow, bin(BinaryOp::pow, x(), c(2)), c(3))));
    EXPECT_THROW(parse("x^1.5"), ParseError);
    EXPECT_THROW(parse("x^x"), ParseError);
    EXPECT_THROW(parse("x^2^-1"), ParseError);
    EXPECT_THROW(parse("x^1e12"), ParseError);
}

TEST(Parse, errors_report_position_and_expectation)
{
    const auto position_of = [](const char *text) -> std::size_t {
        try {
            parse(text);
        } catch (const ParseError &e) {
            return e.position().value_or(9999);
        }
        return 9999;
    };
    EXPECT_EQ(position_of("1/(x+"), 5U);
    EXPECT_EQ(position_of("sin x"), 4U);
    EXPECT_EQ(position_of("x x"), 2U);
    EXPECT_EQ(position_of("(x"), 2U);
    EXPECT_EQ(position_of("y+1"), 0U);
    EXPECT_EQ(position_of(""), 0U);
    EXPECT_EQ(position_of("x^1.5"), 2U);
    try {
        parse("(x");
    } catch (const ParseError &e) {
        EXPECT_NE(std::string(e.what()).find("expected ')'"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse(std::vector<Token>{}), ParseError);
}

TEST(Parse, from_token_sequence)
{
    const auto tokens = tokenize("exp(x)*2");
    EXPECT_TRUE(structurally_equal(parse(tokens), parse("exp(x)*2")));
}

TEST(Print, minimal_parentheses)
{
    EXPECT_EQ(to_string(parse("x/(x/x)")), "x/(x/x)");
    EXPECT_EQ(to_string(parse("(x/x)/x")), "x/x/x");
    EXPECT_EQ(to_string(parse("-(x^2)")), "-x^2");
    EXPECT_EQ(to_string(parse("(-x)^2")), "(-x)^2");
    EXPECT_EQ(to_string(parse("1-(x-2)")), "1 - (x - 2)");
    EXPECT_EQ(to_string(parse("sin(x)^-3")), "sin(x)^-3");
    EXPECT_EQ(to_string(parse("0.1*x")), "0.1*x");
}

// Random trees of depth <= 6 with non-negative constants (a negative literal
// prints as negation and reads back as Unary(neg), which is the normal form).
class TreeGenerator
{
public:
    explicit TreeGenerator(std::uint64_t seed) : rng_(seed) {}

    Expr tree(int depth)
    {
        const int pick = std::uniform_int_distribution<int>(0, depth <= 0 ? 1 : 9)(rng_);
        switch (pick) {
            case 0:
                return c(constant());
            case 1:
                return x();
            case 2:
            case 3: {
                static constexpr UnaryOp ops[] = {UnaryOp::neg, UnaryOp::exp, UnaryOp::ln,
                                                  UnaryOp::sin, UnaryOp::cos, UnaryOp::sqrt};
                return un(ops[std::uniform_int_distribution<int>(0, 5)(rng_)], tree(depth - 1));
            }
            case 4: {
                const int k = std::uniform_int_distribution<int>(-3, 4)(rng_);
                return bin(BinaryOp::pow, tree(depth - 1), c(k));
            }
            default: {
                static constexpr BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div};
                const BinaryOp op = ops[std::uniform_int_distribution<int>(0, 3)(rng_)];
                Expr l = tree(depth - 1);
                return bin(op, l, tree(depth - 1));
            }
        }
    }

private:
    double constant()
    {
        static constexpr double pool[] = {0, 1, 2, 3.25, 0.1, 1e-5, 12345.678, 7e22, 0.3333333333333333};
        return pool[std::uniform_int_distribution<int>(0, 8)(rng_)];
    }

    std::mt19937_64 rng_;
};

TEST(Properties, print_parse_round_trip)
{
    TreeGenerator gen(31337);
    for (int trial = 0; trial < 1000; ++trial) {
        const Expr e = gen.tree(6);
        const std::string text = to_string(e);
        const Expr back = parse(text);
        EXPECT_TRUE(structurally_equal(back, e)) << text << " -> " << to_string(back);
        EXPECT_EQ(to_string(back), text);
    }
}

TEST(Properties, negative_constants_reach_normal_form)
{
    const Expr e = bin(BinaryOp::mul, c(-2), bin(BinaryOp::pow, c(-0.5), c(2)));
    const Expr once = parse(to_string(e));
    EXPECT_TRUE(structurally_equal(parse(to_string(once)), once));
    EXPECT_EQ(to_string(e), "-2*(-0.5)^2");
}

} // namespace
} // namespace jetdiv
