#ifndef JETDIV_PARSER_HPP
#define JETDIV_PARSER_HPP

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <jetdiv/error.hpp>
#include <jetdiv/expr.hpp>

namespace jetdiv
{

enum class TokenKind { number, identifier, op, paren };

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;
    // Decoded literal; meaningful for numbers only.
    double number = 0.0;

    bool is(TokenKind k, std::string_view text) const noexcept
    {
        return kind == k && lexeme == text;
    }
};

/// Splits expression text into tokens. Whitespace is skipped; numbers are
/// decimal literals with optional fraction and exponent. The Unicode minus
/// sign U+2212 is accepted as '-'.
inline std::vector<Token> tokenize(std::string_view input)
{
    std::vector<Token> tokens;
    std::size_t i = 0;
    const auto digit = [&](std::size_t at) {
        return at < input.size() && std::isdigit(static_cast<unsigned char>(input[at])) != 0;
    };
    while (i < input.size()) {
        const char ch = input[i];
        const auto uch = static_cast<unsigned char>(ch);
        if (std::isspace(uch) != 0) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (digit(i) || (ch == '.' && digit(i + 1))) {
            while (digit(i)) {
                ++i;
            }
            if (i < input.size() && input[i] == '.') {
                ++i;
                while (digit(i)) {
                    ++i;
                }
            }
            if (i < input.size() && (input[i] == 'e' || input[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < input.size() && (input[j] == '+' || input[j] == '-')) {
                    ++j;
                }
                if (!digit(j)) {
                    throw LexError("malformed exponent in number literal", start);
                }
                i = j;
                while (digit(i)) {
                    ++i;
                }
            }
            const std::string_view text = input.substr(start, i - start);
            double value = 0.0;
            const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
            if (res.ec != std::errc{} || !std::isfinite(value)) {
                throw LexError("number literal out of range: " + std::string(text), start);
            }
            tokens.push_back({TokenKind::number, std::string(text), start, value});
            continue;
        }
        if (std::isalpha(uch) != 0 || ch == '_') {
            while (i < input.size()
                   && (std::isalnum(static_cast<unsigned char>(input[i])) != 0 || input[i] == '_')) {
                ++i;
            }
            tokens.push_back({TokenKind::identifier, std::string(input.substr(start, i - start)), start});
            continue;
        }
        switch (ch) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^':
                tokens.push_back({TokenKind::op, std::string(1, ch), start});
                ++i;
                continue;
            case '(':
            case ')':
                tokens.push_back({TokenKind::paren, std::string(1, ch), start});
                ++i;
                continue;
            default:
                break;
        }
        if (input.substr(i, 3) == "\xE2\x88\x92") {
            tokens.push_back({TokenKind::op, "-", start});
            i += 3;
            continue;
        }
        if (uch >= 0x80) {
            throw LexError("unexpected non-ASCII character", start);
        }
        throw LexError(std::string("unexpected character '") + ch + "'", start);
    }
    return tokens;
}

namespace detail
{

// Precedence climbing over the grammar
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   primary := number | 'x' | function '(' expr ')' | '(' expr ')'
//
// Unary minus binds looser than ^, so -x^2 is -(x^2).
class Parser
{
public:
    Parser(std::span<const Token> tokens, std::size_t end_position) : tokens_(tokens), end_(end_position) {}

    Expr parse_all()
    {
        Expr e = parse_expr();
        if (pos_ < tokens_.size()) {
            fail("unexpected '" + peek()->lexeme + "' after complete expression");
        }
        return e;
    }

private:
    const Token *peek() const noexcept
    {
        return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr;
    }

    bool accept(TokenKind k, std::string_view text)
    {
        if (const Token *t = peek(); t != nullptr && t->is(k, text)) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::size_t here() const noexcept
    {
        return pos_ < tokens_.size() ? tokens_[pos_].position : end_;
    }

    [[noreturn]] void fail(const std::string &message) const
    {
        throw ParseError(message, here());
    }

    std::string found() const
    {
        const Token *t = peek();
        return t == nullptr ? "end of input" : "'" + t->lexeme + "'";
    }

    void expect(TokenKind k, std::string_view text)
    {
        if (!accept(k, text)) {
            fail("expected '" + std::string(text) + "' but found " + found());
        }
    }

    Expr parse_expr()
    {
        Expr lhs = parse_term();
        for (;;) {
            const std::size_t at = here();
            if (accept(TokenKind::op, "+")) {
                lhs = Expr::binary(BinaryOp::add, lhs, parse_term(), at);
            } else if (accept(TokenKind::op, "-")) {
                lhs = Expr::binary(BinaryOp::sub, lhs, parse_term(), at);
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term()
    {
        Expr lhs = parse_unary();
        for (;;) {
            const std::size_t at = here();
            if (accept(TokenKind::op, "*")) {
                lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary(), at);
            } else if (accept(TokenKind::op, "/")) {
                lhs = Expr::binary(BinaryOp::div, lhs, parse_unary(), at);
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary()
    {
        const std::size_t at = here();
        if (accept(TokenKind::op, "-")) {
            return Expr::unary(UnaryOp::neg, parse_unary(), at);
        }
        return parse_power();
    }

    Expr parse_power()
    {
        Expr base = parse_primary();
        const std::size_t at = here();
        if (accept(TokenKind::op, "^")) {
            const long k = parse_exponent();
            return Expr::binary(BinaryOp::pow, base, Expr::constant(static_cast<double>(k)), at);
        }
        return base;
    }

    // exponent := ['-'] integer ('^' exponent)? | '(' exponent ')'
    // A chain a^b^c groups to the right and folds b^c to one integer.
    long parse_exponent()
    {
        long value = 0;
        if (accept(TokenKind::paren, "(")) {
            value = parse_exponent();
            expect(TokenKind::paren, ")");
        } else {
            const bool negative = accept(TokenKind::op, "-");
            const Token *t = peek();
            if (t == nullptr || t->kind != TokenKind::number) {
                fail("exponent must be an integer constant, found " + found());
            }
            if (std::trunc(t->number) != t->number) {
                fail("exponent must be an integer constant, found '" + t->lexeme + "'");
            }
            if (std::abs(t->number) > exponent_limit) {
                fail("exponent '" + t->lexeme + "' is out of range");
            }
            ++pos_;
            value = static_cast<long>(t->number);
            if (negative) {
                value = -value;
            }
        }
        if (peek() != nullptr && peek()->is(TokenKind::op, "^")) {
            const std::size_t at = here();
            ++pos_;
            const long outer = parse_exponent();
            value = fold_power(value, outer, at);
        }
        return value;
    }

    long fold_power(long base, long exponent, std::size_t at) const
    {
        if (exponent < 0) {
            if (base == 1 || base == -1) {
                return (exponent % 2 == 0) ? 1 : base;
            }
            throw ParseError("exponent must be an integer constant (" + std::to_string(base) + "^"
                                 + std::to_string(exponent) + " is not)",
                             at);
        }
        long result = 1;
        for (long i = 0; i < exponent; ++i) {
            result *= base;
            if (std::abs(result) > exponent_limit) {
                throw ParseError("folded exponent is out of range", at);
            }
            if (result == 0 || result == 1) {
                break;
            }
        }
        return result;
    }

    Expr parse_primary()
    {
        const Token *t = peek();
        if (t == nullptr) {
            fail("expected expression but found end of input");
        }
        const std::size_t at = t->position;
        if (t->kind == TokenKind::number) {
            ++pos_;
            return Expr::constant(t->number, at);
        }
        if (t->kind == TokenKind::identifier) {
            ++pos_;
            if (t->lexeme == "x") {
                return Expr::variable(at);
            }
            if (const auto fn = function_from_name(t->lexeme)) {
                expect(TokenKind::paren, "(");
                Expr arg = parse_expr();
                expect(TokenKind::paren, ")");
                return Expr::unary(*fn, arg, at);
            }
            throw ParseError("unknown identifier '" + t->lexeme + "' (variables: x; functions: exp, ln, sin, cos, sqrt)",
                             at);
        }
        if (accept(TokenKind::paren, "(")) {
            Expr inner = parse_expr();
            expect(TokenKind::paren, ")");
            return inner;
        }
        fail("expected expression but found " + found());
    }

    static constexpr double exponent_limit = 2147483647.0;

    std::span<const Token> tokens_;
    std::size_t end_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline Expr parse(std::span<const Token> tokens)
{
    std::size_t end = 0;
    if (!tokens.empty()) {
        end = tokens.back().position + tokens.back().lexeme.size();
    }
    return detail::Parser(tokens, end).parse_all();
}

inline Expr parse(std::string_view text)
{
    const auto tokens = tokenize(text);
    return detail::Parser(tokens, text.size()).parse_all();
}

} // namespace jetdiv

#endif
