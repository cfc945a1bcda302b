#pragma once

#include "segq/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

// Core vocabulary of the class-segregated multi-queue model.
//
// Class indices are 1-based throughout the public API (class 1 is the
// cheapest, class m the most valuable). Per-class vectors (counters,
// occupancies, capacities) are stored 0-based, so class h lives at [h - 1].

namespace segq
{
    using ClassIndex = int;
    using Count = std::int64_t;
    using Counts = std::vector<Count>;

    /// Strictly increasing positive class values v_1 < ... < v_m, m >= 2.
    class ValueProfile
    {
    public:
        /// Throws ProfileError (NotIncreasing, NonPositiveValue, TooFewClasses).
        static ValueProfile validate(std::vector<Rational> raw);

        std::size_t m() const noexcept { return m_values.size(); }

        /// v_i for i in [1, m]; v_0 = 0 by convention.
        const Rational &value(ClassIndex i) const;

        std::span<const Rational> values() const noexcept { return m_values; }

    private:
        explicit ValueProfile(std::vector<Rational> values) : m_values(std::move(values)) {}

        std::vector<Rational> m_values;
        Rational m_zero{0};
    };

    ValueProfile validate_profile(std::vector<Rational> raw);

    class QueueCapacities
    {
    public:
        /// Every B_i must be >= 1; throws ConfigError otherwise.
        static QueueCapacities make(Counts caps);

        std::size_t size() const noexcept { return m_caps.size(); }
        Count capacity(ClassIndex i) const { return m_caps.at(static_cast<std::size_t>(i - 1)); }
        const Counts &caps() const noexcept { return m_caps; }

    private:
        explicit QueueCapacities(Counts caps) : m_caps(std::move(caps)) {}

        Counts m_caps;
    };

    struct Event
    {
        enum class Kind : std::uint8_t
        {
            Arrive,
            Send,
        };

        Kind kind = Kind::Send;
        ClassIndex cls = 0; // meaningful for Arrive only

        static constexpr Event arrive(ClassIndex i) noexcept { return Event{Kind::Arrive, i}; }
        static constexpr Event send() noexcept { return Event{Kind::Send, 0}; }

        constexpr bool is_send() const noexcept { return kind == Kind::Send; }
        constexpr bool is_arrive() const noexcept { return kind == Kind::Arrive; }

        friend constexpr bool operator==(const Event &, const Event &) = default;
    };

    /// Ordered arrive/send events. Trace order is the total order of the
    /// model; absolute timestamps are not represented.
    class Trace
    {
    public:
        Trace() = default;
        explicit Trace(std::vector<Event> events);

        const std::vector<Event> &events() const noexcept { return m_events; }
        std::size_t size() const noexcept { return m_events.size(); }
        std::size_t arrival_count() const noexcept { return m_arrivals; }
        std::size_t send_count() const noexcept { return m_events.size() - m_arrivals; }

        /// True iff the trailing run of sends is at least as long as the
        /// number of arrivals, so every diligent policy ends empty.
        bool drained() const noexcept { return m_drained; }

        friend bool operator==(const Trace &a, const Trace &b) { return a.m_events == b.m_events; }

    private:
        std::vector<Event> m_events;
        std::size_t m_arrivals = 0;
        bool m_drained = true;
    };

    struct BoundReport
    {
        std::vector<Rational> c; // c_1 .. c_{m-1}
        Rational c_star;
        Rational upper;     // 1 + c_star
        Rational abs_lower; // 2 - v_m / (v_1 + ... + v_m)
    };

    /// Sum_{j=1}^{i-1} 2^{j-1} v_{i-j}; zero for i <= 1.
    Rational lower_class_weight(const ValueProfile &profile, int i);

    BoundReport compute_c(const ValueProfile &profile);

    /// Parses the line-based trace grammar (`A <class>`, `S`, `#` comments).
    /// When classCount is given, arrive indices above it are BadClassIndex.
    Trace parse_trace(std::string_view text, std::optional<std::size_t> classCount = std::nullopt);

    /// Inverse of parse_trace: one event per line, trailing newline.
    std::string format_trace(const Trace &trace);

    /// Appends one send per arrival.
    Trace append_drain(const Trace &trace);

    struct ProfileConfig
    {
        std::optional<std::vector<Rational>> values;
        std::optional<Counts> capacities;
    };

    /// `values: <rational>...` and `capacities: <int>...` lines. Lengths must
    /// agree when both are present. Throws ConfigError.
    ProfileConfig parse_config(std::string_view text);

    /// v_1 = 1, v_2 = 2, v_{i+1} = v_i + Sum_{j=1}^{i-1} 2^{j-1} v_{i-j}: 1, 2, 3, 7, 18, ...
    std::vector<Rational> additive_recurrence_values(std::size_t m);

    /// v_1 = 1, v_2 = 2, v_{i+1} = 2 v_i + Sum_{j=1}^{i-1} 2^{j-1} v_{i-j}: 1, 2, 5, 14, ...
    /// Every c_i equals 1/2 on these values.
    std::vector<Rational> doubling_recurrence_values(std::size_t m);

    /// True when m >= 3 and v_{i+1} = v_i + lower_class_weight(i) for every
    /// i in [2, m-1]. Such profiles look like they should give c* = 1/2 but
    /// direct evaluation does not.
    bool follows_additive_recurrence(const ValueProfile &profile);
}
