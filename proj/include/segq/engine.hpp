#pragma once

#include "segq/model.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace segq
{
    struct Action
    {
        enum class Kind : std::uint8_t
        {
            None, // the initial null entry e_0
            Accepted,
            Rejected,
            Transmitted,
            Idle,
        };

        Kind kind = Kind::None;
        ClassIndex cls = 0;

        friend bool operator==(const Action &, const Action &) = default;
    };

    /// Counters just after one event. Entry 0 is the null event e_0.
    struct LedgerEntry
    {
        std::size_t event_index = 0;
        Counts accepted;    // A_h(e_i), cumulative
        Counts transmitted; // delta_h(e_i), cumulative
        Counts occupancy;   // q_h(e_i)
        Action action;

        friend bool operator==(const LedgerEntry &, const LedgerEntry &) = default;
    };

    struct Ledger
    {
        std::vector<LedgerEntry> entries; // trace.size() + 1 entries
        Rational benefit_transmitted;
        Rational benefit_accepted;

        const LedgerEntry &final_entry() const { return entries.back(); }

        friend bool operator==(const Ledger &, const Ledger &) = default;
    };

    /// One choice per send event; nullopt is Idle.
    struct Schedule
    {
        std::vector<std::optional<ClassIndex>> choices;

        friend bool operator==(const Schedule &, const Schedule &) = default;
    };

    /// Comma-separated class indices, `-` for Idle.
    std::string format_schedule(const Schedule &schedule);
    Schedule parse_schedule(std::string_view text);

    struct GreedyRun
    {
        Ledger ledger;
        Schedule schedule;
    };

    /// Picks the class to transmit at a send given the occupancy just before
    /// it, or nullopt for Idle. sendIndex is 1-based.
    using SendPolicy = std::function<std::optional<ClassIndex>(std::size_t sendIndex, std::span<const Count> occupancy)>;

    /// Runs a diligent policy: admission accepts iff the destination queue has
    /// a vacancy; at each send `policy` decides. Throws ClassOutOfRange,
    /// ConfigError (capacity count != m), DiligenceViolation.
    GreedyRun run_diligent(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                           const SendPolicy &policy);

    /// Transmits from the highest-indexed nonempty queue.
    GreedyRun run_greedy(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile);

    /// Replays an arbitrary diligent schedule. The schedule length must equal
    /// the number of sends (ConfigError otherwise).
    Ledger replay_schedule(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                           const Schedule &schedule);

    /// Tab-separated dump, one line per entry:
    /// index, event, action, A vector, delta vector, q vector.
    std::string export_ledger(const Trace &trace, const Ledger &ledger);

    /// Positions (in ledger entry numbering, i.e. 1-based event indices) of
    /// the send events, with s_0 = 0 prepended.
    std::vector<std::size_t> send_positions(const Trace &trace);
}
