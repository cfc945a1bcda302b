#include "segq/engine.hpp"

#include "segq/error.hpp"

#include <algorithm>
#include <sstream>

namespace segq
{
    namespace
    {
        void check_shape(const QueueCapacities &caps, const ValueProfile &profile)
        {
            if (caps.size() != profile.m())
            {
                throw ConfigError("capacity count " + std::to_string(caps.size()) + " does not match class count " +
                                  std::to_string(profile.m()));
            }
        }

        Rational weighted_sum(const ValueProfile &profile, const Counts &counts)
        {
            Rational sum = 0;
            for (std::size_t h = 0; h < counts.size(); ++h)
            {
                sum += profile.values()[h] * counts[h];
            }
            return sum;
        }

        std::string join(const Counts &counts)
        {
            std::string out;
            for (std::size_t i = 0; i < counts.size(); ++i)
            {
                if (i > 0)
                {
                    out += ',';
                }
                out += std::to_string(counts[i]);
            }
            return out;
        }

        std::string describe(const Action &a)
        {
            switch (a.kind)
            {
            case Action::Kind::None:
                return "-";
            case Action::Kind::Accepted:
                return "accept " + std::to_string(a.cls);
            case Action::Kind::Rejected:
                return "reject " + std::to_string(a.cls);
            case Action::Kind::Transmitted:
                return "transmit " + std::to_string(a.cls);
            case Action::Kind::Idle:
                return "idle";
            }
            return "?";
        }
    }

    std::string format_schedule(const Schedule &schedule)
    {
        std::string out;
        for (std::size_t i = 0; i < schedule.choices.size(); ++i)
        {
            if (i > 0)
            {
                out += ',';
            }
            out += schedule.choices[i] ? std::to_string(*schedule.choices[i]) : std::string("-");
        }
        return out;
    }

    Schedule parse_schedule(std::string_view text)
    {
        Schedule schedule;
        if (text.empty())
        {
            return schedule;
        }
        std::size_t pos = 0;
        while (true)
        {
            const auto comma = text.find(',', pos);
            const std::string item(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
            if (item == "-")
            {
                schedule.choices.emplace_back(std::nullopt);
            }
            else
            {
                if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 9)
                {
                    throw ConfigError("malformed schedule item '" + item + "'");
                }
                schedule.choices.emplace_back(std::stoi(item));
            }
            if (comma == std::string_view::npos)
            {
                break;
            }
            pos = comma + 1;
        }
        return schedule;
    }

    GreedyRun run_diligent(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                           const SendPolicy &policy)
    {
        check_shape(caps, profile);
        const std::size_t m = profile.m();

        GreedyRun run;
        auto &entries = run.ledger.entries;
        entries.reserve(trace.size() + 1);

        LedgerEntry current;
        current.accepted.assign(m, 0);
        current.transmitted.assign(m, 0);
        current.occupancy.assign(m, 0);
        entries.push_back(current);

        std::size_t sendIndex = 0;
        for (std::size_t i = 0; i < trace.size(); ++i)
        {
            const Event &event = trace.events()[i];
            current.event_index = i + 1;
            if (event.is_arrive())
            {
                if (event.cls < 1 || static_cast<std::size_t>(event.cls) > m)
                {
                    throw ClassOutOfRange(i + 1, event.cls);
                }
                const auto h = static_cast<std::size_t>(event.cls - 1);
                if (current.occupancy[h] < caps.caps()[h])
                {
                    ++current.occupancy[h];
                    ++current.accepted[h];
                    current.action = Action{Action::Kind::Accepted, event.cls};
                }
                else
                {
                    current.action = Action{Action::Kind::Rejected, event.cls};
                }
            }
            else
            {
                ++sendIndex;
                const bool anyQueued = std::any_of(current.occupancy.begin(), current.occupancy.end(),
                                                   [](Count q) { return q > 0; });
                const std::optional<ClassIndex> choice = policy(sendIndex, current.occupancy);
                if (!choice)
                {
                    if (anyQueued)
                    {
                        throw DiligenceViolation(sendIndex, "idle while some queue is nonempty");
                    }
                    current.action = Action{Action::Kind::Idle, 0};
                }
                else
                {
                    if (*choice < 1 || static_cast<std::size_t>(*choice) > m)
                    {
                        throw DiligenceViolation(sendIndex, "scheduled class " + std::to_string(*choice) + " out of range");
                    }
                    const auto h = static_cast<std::size_t>(*choice - 1);
                    if (current.occupancy[h] == 0)
                    {
                        throw DiligenceViolation(sendIndex, "scheduled class " + std::to_string(*choice) + " is empty");
                    }
                    --current.occupancy[h];
                    ++current.transmitted[h];
                    current.action = Action{Action::Kind::Transmitted, *choice};
                }
                run.schedule.choices.push_back(choice);
            }
            entries.push_back(current);
        }

        run.ledger.benefit_transmitted = weighted_sum(profile, current.transmitted);
        run.ledger.benefit_accepted = weighted_sum(profile, current.accepted);
        return run;
    }

    GreedyRun run_greedy(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile)
    {
        return run_diligent(trace, caps, profile,
                            [](std::size_t, std::span<const Count> q) -> std::optional<ClassIndex> {
                                for (std::size_t h = q.size(); h > 0; --h)
                                {
                                    if (q[h - 1] > 0)
                                    {
                                        return static_cast<ClassIndex>(h);
                                    }
                                }
                                return std::nullopt;
                            });
    }

    Ledger replay_schedule(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                           const Schedule &schedule)
    {
        if (schedule.choices.size() != trace.send_count())
        {
            throw ConfigError("schedule has " + std::to_string(schedule.choices.size()) + " choices for " +
                              std::to_string(trace.send_count()) + " sends");
        }
        return run_diligent(trace, caps, profile,
                            [&schedule](std::size_t sendIndex, std::span<const Count>) {
                                return schedule.choices[sendIndex - 1];
                            })
            .ledger;
    }

    std::string export_ledger(const Trace &trace, const Ledger &ledger)
    {
        std::ostringstream out;
        for (const auto &entry : ledger.entries)
        {
            std::string event = "init";
            if (entry.event_index > 0)
            {
                const Event &e = trace.events().at(entry.event_index - 1);
                event = e.is_send() ? std::string("S") : "A " + std::to_string(e.cls);
            }
            out << entry.event_index << '\t' << event << '\t' << describe(entry.action) << '\t' << join(entry.accepted)
                << '\t' << join(entry.transmitted) << '\t' << join(entry.occupancy) << '\n';
        }
        return out.str();
    }

    std::vector<std::size_t> send_positions(const Trace &trace)
    {
        std::vector<std::size_t> positions{0};
        for (std::size_t i = 0; i < trace.size(); ++i)
        {
            if (trace.events()[i].is_send())
            {
                positions.push_back(i + 1);
            }
        }
        return positions;
    }
}
