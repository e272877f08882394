#ifndef JETDIV_ERROR_HPP
#define JETDIV_ERROR_HPP

#include <charconv>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace jetdiv
{

// Shortest round-trip decimal form of v, for messages.
inline std::string format_number(double v)
{
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Base of every error raised by the library. An optional byte offset into the
// source expression is attached when the failing operation can be traced back
// to a parsed node.
class Error : public std::runtime_error
{
public:
    explicit Error(std::string message, std::optional<std::size_t> position = std::nullopt)
        : std::runtime_error(message), message_(std::move(message)), position_(position)
    {
        rebuild();
    }

    const char *what() const noexcept override
    {
        return full_.c_str();
    }

    const std::string &message() const noexcept
    {
        return message_;
    }

    std::optional<std::size_t> position() const noexcept
    {
        return position_;
    }

    void set_position(std::size_t pos)
    {
        position_ = pos;
        rebuild();
    }

    virtual const char *kind() const noexcept
    {
        return "error";
    }

private:
    void rebuild()
    {
        full_ = message_;
        if (position_) {
            full_ += " (at position " + std::to_string(*position_) + ")";
        }
    }

    std::string message_;
    std::optional<std::size_t> position_;
    std::string full_;
};

#define JETDIV_DEFINE_ERROR(Name, Base, Kind)                                                                          \
    class Name : public Base                                                                                           \
    {                                                                                                                  \
    public:                                                                                                            \
        using Base::Base;                                                                                              \
        const char *kind() const noexcept override                                                                     \
        {                                                                                                              \
            return Kind;                                                                                               \
        }                                                                                                              \
    };

// Jets with different expansion points or orders were combined.
JETDIV_DEFINE_ERROR(AlignmentError, Error, "alignment error")

// Anything caused by the numbers themselves: poles, domains, overflow.
JETDIV_DEFINE_ERROR(NumericError, Error, "numeric error")
JETDIV_DEFINE_ERROR(PoleError, NumericError, "pole error")
JETDIV_DEFINE_ERROR(DomainError, NumericError, "domain error")
JETDIV_DEFINE_ERROR(OverflowError, NumericError, "overflow error")
JETDIV_DEFINE_ERROR(NonFiniteError, NumericError, "non-finite error")
JETDIV_DEFINE_ERROR(SingularError, NumericError, "singular error")
JETDIV_DEFINE_ERROR(SizeLimitError, NumericError, "size-limit error")
JETDIV_DEFINE_ERROR(SwellLimitError, NumericError, "swell-limit error")

// Malformed expression text. Position is always set.
JETDIV_DEFINE_ERROR(SyntaxError, Error, "syntax error")
JETDIV_DEFINE_ERROR(LexError, SyntaxError, "lex error")
JETDIV_DEFINE_ERROR(ParseError, SyntaxError, "parse error")

#undef JETDIV_DEFINE_ERROR

} // namespace jetdiv

#endif
