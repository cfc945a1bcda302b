#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace segq
{
    /// Base of every error raised by the library. Callers that only need a
    /// message can catch this; the CLI maps subclasses onto exit codes.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class ProfileError : public Error
    {
    public:
        enum class Kind
        {
            NotIncreasing,
            NonPositiveValue,
            TooFewClasses,
        };

        ProfileError(Kind kind, const std::string &what) : Error(what), m_kind(kind) {}

        Kind kind() const noexcept { return m_kind; }

    private:
        Kind m_kind;
    };

    class TraceParseError : public Error
    {
    public:
        enum class Kind
        {
            SyntaxError,
            BadClassIndex,
        };

        TraceParseError(Kind kind, std::size_t line, const std::string &what)
            : Error("line " + std::to_string(line) + ": " + what), m_kind(kind), m_line(line)
        {
        }

        Kind kind() const noexcept { return m_kind; }
        std::size_t line() const noexcept { return m_line; }

    private:
        Kind m_kind;
        std::size_t m_line;
    };

    // Malformed config text, bad rational literal, or inconsistent list lengths.
    class ConfigError : public Error
    {
    public:
        using Error::Error;
    };

    class ClassOutOfRange : public Error
    {
    public:
        ClassOutOfRange(std::size_t eventIndex, int cls)
            : Error("event " + std::to_string(eventIndex) + ": class index " + std::to_string(cls) + " out of range"),
              m_eventIndex(eventIndex), m_cls(cls)
        {
        }

        std::size_t event_index() const noexcept { return m_eventIndex; }
        int class_index() const noexcept { return m_cls; }

    private:
        std::size_t m_eventIndex;
        int m_cls;
    };

    class DiligenceViolation : public Error
    {
    public:
        // sendIndex is 1-based (s_1 is the first send of the trace).
        DiligenceViolation(std::size_t sendIndex, const std::string &what)
            : Error("send " + std::to_string(sendIndex) + ": " + what), m_sendIndex(sendIndex)
        {
        }

        std::size_t send_index() const noexcept { return m_sendIndex; }

    private:
        std::size_t m_sendIndex;
    };

    class StateSpaceExceeded : public Error
    {
    public:
        StateSpaceExceeded(std::uint64_t limit, std::uint64_t required)
            : Error("state space " + std::to_string(required) + " exceeds cap " + std::to_string(limit)),
              m_limit(limit)
        {
        }

        std::uint64_t limit() const noexcept { return m_limit; }

    private:
        std::uint64_t m_limit;
    };

    class BudgetExceeded : public Error
    {
    public:
        BudgetExceeded(std::uint64_t limit, const std::string &what) : Error(what), m_limit(limit) {}

        std::uint64_t limit() const noexcept { return m_limit; }

    private:
        std::uint64_t m_limit;
    };

    class LedgerMismatch : public Error
    {
    public:
        using Error::Error;
    };

    class MTooSmall : public Error
    {
    public:
        using Error::Error;
    };

    class NotDrained : public Error
    {
    public:
        using Error::Error;
    };
}
