#include "segq/offline_opt.hpp"

#include "segq/error.hpp"

#include <algorithm>
#include <limits>

namespace segq
{
    namespace
    {
        void check_inputs(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile)
        {
            if (caps.size() != profile.m())
            {
                throw ConfigError("capacity count " + std::to_string(caps.size()) + " does not match class count " +
                                  std::to_string(profile.m()));
            }
            for (std::size_t i = 0; i < trace.size(); ++i)
            {
                const Event &e = trace.events()[i];
                if (e.is_arrive() && (e.cls < 1 || static_cast<std::size_t>(e.cls) > profile.m()))
                {
                    throw ClassOutOfRange(i + 1, e.cls);
                }
            }
        }

        std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
        {
            if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
            {
                return std::numeric_limits<std::uint64_t>::max();
            }
            return a * b;
        }

        // Mixed-radix code of an occupancy vector, radix B_h + 1 per class.
        class OccupancyCodec
        {
        public:
            explicit OccupancyCodec(const Counts &caps)
            {
                std::uint64_t stride = 1;
                for (Count b : caps)
                {
                    m_strides.push_back(stride);
                    m_radix.push_back(static_cast<std::uint64_t>(b) + 1);
                    stride = saturating_mul(stride, static_cast<std::uint64_t>(b) + 1);
                }
                m_count = stride;
            }

            std::uint64_t count() const noexcept { return m_count; }

            std::uint64_t encode(const Counts &q) const
            {
                std::uint64_t code = 0;
                for (std::size_t h = 0; h < q.size(); ++h)
                {
                    code += static_cast<std::uint64_t>(q[h]) * m_strides[h];
                }
                return code;
            }

            void decode(std::uint64_t code, Counts &q) const
            {
                for (std::size_t h = 0; h < m_radix.size(); ++h)
                {
                    q[h] = static_cast<Count>(code % m_radix[h]);
                    code /= m_radix[h];
                }
            }

            std::uint64_t stride(std::size_t h) const { return m_strides[h]; }

        private:
            std::vector<std::uint64_t> m_strides;
            std::vector<std::uint64_t> m_radix;
            std::uint64_t m_count = 1;
        };

        // Arrivals between consecutive sends, as 0-based class slots.
        struct Segment
        {
            std::vector<std::size_t> arrivals;
        };
    }

    OptResult opt_search(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                         const OptOptions &options)
    {
        check_inputs(trace, caps, profile);
        const std::size_t m = profile.m();
        if (m > 255)
        {
            throw ConfigError("opt_search supports at most 255 classes");
        }
        const OccupancyCodec codec(caps.caps());

        const std::uint64_t required = saturating_mul(codec.count(), static_cast<std::uint64_t>(trace.size()) + 1);
        if (required > options.state_cap)
        {
            throw StateSpaceExceeded(options.state_cap, required);
        }

        // segments[k] holds the arrivals before send k (0-based); arrivals
        // after the final send cannot be transmitted and are dropped.
        std::vector<Segment> segments(1);
        for (const Event &e : trace.events())
        {
            if (e.is_send())
            {
                segments.emplace_back();
            }
            else
            {
                segments.back().arrivals.push_back(static_cast<std::size_t>(e.cls - 1));
            }
        }
        segments.pop_back();
        const std::size_t sends = segments.size();
        const std::uint64_t states = codec.count();

        // next[x] / cur[x]: best benefit from send k onward given occupancy x
        // just after send k-1. choice[k * states + x]: 0 = Idle, else the class
        // transmitted at send k.
        std::vector<Rational> next(states, Rational(0));
        std::vector<Rational> cur(states);
        std::vector<std::uint8_t> choice(static_cast<std::size_t>(sends * states), 0);

        Counts q(m, 0);
        for (std::size_t k = sends; k-- > 0;)
        {
            for (std::uint64_t x = 0; x < states; ++x)
            {
                codec.decode(x, q);
                for (std::size_t h : segments[k].arrivals)
                {
                    if (q[h] < caps.caps()[h])
                    {
                        ++q[h];
                    }
                }
                const std::uint64_t y = codec.encode(q);

                bool found = false;
                Rational &best = cur[x];
                std::uint8_t bestChoice = 0;
                for (std::size_t h = m; h-- > 0;)
                {
                    if (q[h] == 0)
                    {
                        continue;
                    }
                    Rational candidate = profile.values()[h] + next[y - codec.stride(h)];
                    if (!found || candidate > best)
                    {
                        best = std::move(candidate);
                        bestChoice = static_cast<std::uint8_t>(h + 1);
                        found = true;
                    }
                }
                if (!found)
                {
                    best = next[y];
                }
                choice[k * states + x] = bestChoice;
            }
            std::swap(cur, next);
        }

        OptResult result;
        result.benefit = next[0];
        result.states_explored = sends * states;

        std::fill(q.begin(), q.end(), 0);
        for (std::size_t k = 0; k < sends; ++k)
        {
            const std::uint64_t x = codec.encode(q);
            for (std::size_t h : segments[k].arrivals)
            {
                if (q[h] < caps.caps()[h])
                {
                    ++q[h];
                }
            }
            const std::uint8_t c = choice[k * states + x];
            if (c == 0)
            {
                result.schedule.choices.emplace_back(std::nullopt);
            }
            else
            {
                --q[c - 1];
                result.schedule.choices.emplace_back(static_cast<ClassIndex>(c));
            }
        }
        return result;
    }

    namespace
    {
        Rational brute_from(const std::vector<Event> &events, std::size_t pos, std::vector<Count> queues,
                            const Counts &caps, std::span<const Rational> values)
        {
            for (; pos < events.size(); ++pos)
            {
                const Event &e = events[pos];
                if (e.is_arrive())
                {
                    auto &slot = queues[static_cast<std::size_t>(e.cls - 1)];
                    if (slot < caps[static_cast<std::size_t>(e.cls - 1)])
                    {
                        ++slot;
                    }
                    continue;
                }

                Rational best = 0;
                bool any = false;
                for (std::size_t c = 0; c < queues.size(); ++c)
                {
                    if (queues[c] == 0)
                    {
                        continue;
                    }
                    std::vector<Count> after = queues;
                    --after[c];
                    Rational total = values[c] + brute_from(events, pos + 1, std::move(after), caps, values);
                    if (!any || total > best)
                    {
                        best = total;
                    }
                    any = true;
                }
                if (any)
                {
                    return best;
                }
                // all queues empty: the send idles and the walk continues
            }
            return 0;
        }
    }

    Rational opt_bruteforce(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile)
    {
        check_inputs(trace, caps, profile);
        return brute_from(trace.events(), 0, std::vector<Count>(profile.m(), 0), caps.caps(), profile.values());
    }
}
