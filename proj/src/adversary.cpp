#include "segq/adversary.hpp"

#include "segq/engine.hpp"

#include <array>
#include <exception>
#include <limits>
#include <random>
#include <thread>

namespace segq
{
    BoundFalsified::BoundFalsified(Trace trace, Rational ratio, Rational bound)
        : Error("ratio " + format_rational(ratio) + " exceeds bound " + format_rational(bound)), m_trace(std::move(trace)),
          m_ratio(std::move(ratio))
    {
    }

    std::optional<Rational> drained_ratio(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                          const Rational &bound, const OptOptions &options)
    {
        const Trace drained = append_drain(trace);
        const Rational greedy = run_greedy(drained, caps, profile).ledger.benefit_transmitted;
        if (greedy == 0)
        {
            return std::nullopt;
        }
        Rational ratio = opt_search(drained, caps, profile, options).benefit / greedy;
        ratio.canonicalize();
        if (ratio > bound)
        {
            throw BoundFalsified(drained, ratio, bound);
        }
        return ratio;
    }

    namespace
    {
        // Best ratio seen by one worker, keyed by the candidate's global rank
        // so that the reduction is independent of how work was split.
        struct Partial
        {
            std::optional<Rational> ratio;
            std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();
            Trace trace;
            std::uint64_t evaluated = 0;
            std::exception_ptr error;
            std::uint64_t errorRank = std::numeric_limits<std::uint64_t>::max();
        };

        void offer(Partial &p, const Rational &ratio, std::uint64_t rank, const Trace &trace)
        {
            if (!p.ratio || ratio > *p.ratio || (ratio == *p.ratio && rank < p.rank))
            {
                p.ratio = ratio;
                p.rank = rank;
                p.trace = trace;
            }
        }

        // Runs fn(worker, jobs, partial) on `jobs` threads (inline when jobs <= 1)
        // and folds the partials. Rethrows the lowest-ranked error.
        template <typename Fn>
        SearchResult run_partitioned(unsigned jobs, Fn fn)
        {
            jobs = std::max(1u, jobs);
            std::vector<Partial> partials(jobs);
            if (jobs == 1)
            {
                fn(0u, 1u, partials[0]);
            }
            else
            {
                std::vector<std::thread> threads;
                threads.reserve(jobs);
                for (unsigned w = 0; w < jobs; ++w)
                {
                    threads.emplace_back([&, w] { fn(w, jobs, partials[w]); });
                }
                for (auto &t : threads)
                {
                    t.join();
                }
            }

            const Partial *firstError = nullptr;
            for (const auto &p : partials)
            {
                if (p.error && (!firstError || p.errorRank < firstError->errorRank))
                {
                    firstError = &p;
                }
            }
            if (firstError)
            {
                std::rethrow_exception(firstError->error);
            }

            SearchResult result;
            Partial best;
            for (const auto &p : partials)
            {
                result.traces_evaluated += p.evaluated;
                if (p.ratio)
                {
                    offer(best, *p.ratio, p.rank, p.trace);
                }
            }
            if (best.ratio)
            {
                result.worst_ratio = *best.ratio;
                result.worst_trace = best.trace;
            }
            return result;
        }

        template <typename Body>
        void guarded(Partial &p, std::uint64_t rank, Body body)
        {
            try
            {
                body();
            }
            catch (...)
            {
                p.error = std::current_exception();
                p.errorRank = rank;
            }
        }

        std::uint64_t checked_pow(std::uint64_t base, std::size_t exp, std::uint64_t limit)
        {
            std::uint64_t r = 1;
            for (std::size_t i = 0; i < exp; ++i)
            {
                if (r > limit / base)
                {
                    return limit + 1;
                }
                r *= base;
            }
            return r;
        }

        Event symbol_event(std::size_t symbol, std::size_t m)
        {
            return symbol == m ? Event::send() : Event::arrive(static_cast<ClassIndex>(symbol + 1));
        }

        std::uint64_t sample_seed(std::uint64_t seed, std::uint64_t index)
        {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
            std::array<std::uint32_t, 2> out{};
            seq.generate(out.begin(), out.end());
            return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
        }

        Trace random_raw_trace(std::size_t m, std::size_t len, std::uint64_t seed, double arriveProbability)
        {
            std::mt19937_64 rng(seed);
            std::bernoulli_distribution isArrival(arriveProbability);
            std::uniform_int_distribution<int> cls(1, static_cast<int>(m));
            std::vector<Event> events;
            events.reserve(len);
            for (std::size_t i = 0; i < len; ++i)
            {
                events.push_back(isArrival(rng) ? Event::arrive(cls(rng)) : Event::send());
            }
            return Trace(std::move(events));
        }
    }

    SearchResult exhaustive_worst(const ValueProfile &profile, const QueueCapacities &caps, std::size_t maxLen,
                                  const SearchOptions &options)
    {
        const std::size_t m = profile.m();
        const std::uint64_t alphabet = m + 1;
        const std::uint64_t raw = checked_pow(alphabet, maxLen, options.budget);
        if (raw > options.budget)
        {
            throw BudgetExceeded(options.budget, "(m+1)^max_len exceeds the search budget of " + std::to_string(options.budget));
        }
        const Rational bound = compute_c(profile).upper;

        auto work = [&](unsigned worker, unsigned jobs, Partial &partial) {
            std::uint64_t rankBase = 0;
            std::vector<Event> events;
            for (std::size_t len = 1; len <= maxLen; ++len)
            {
                // Canonical strings: arrival, (len-2) free symbols, arrival.
                const std::uint64_t middle = len >= 2 ? checked_pow(alphabet, len - 2, options.budget) : 1;
                const std::uint64_t lastChoices = len >= 2 ? m : 1;
                const std::uint64_t count = m * middle * lastChoices;
                for (std::uint64_t r = worker; r < count; r += jobs)
                {
                    const std::uint64_t rank = rankBase + r;
                    std::uint64_t rest = r / lastChoices;
                    events.assign(len, Event::send());
                    const std::uint64_t first = rest / middle;
                    std::uint64_t mid = rest % middle;
                    events[0] = symbol_event(first, m);
                    for (std::size_t pos = len - 1; len >= 2 && pos-- > 1;)
                    {
                        events[pos] = symbol_event(mid % alphabet, m);
                        mid /= alphabet;
                    }
                    if (len >= 2)
                    {
                        events[len - 1] = symbol_event(r % lastChoices, m);
                    }

                    guarded(partial, rank, [&] {
                        const Trace trace(events);
                        ++partial.evaluated;
                        if (auto ratio = drained_ratio(trace, caps, profile, bound, options.opt))
                        {
                            offer(partial, *ratio, rank, append_drain(trace));
                        }
                    });
                    if (partial.error)
                    {
                        return;
                    }
                }
                rankBase += count;
            }
        };
        return run_partitioned(options.jobs, work);
    }

    SearchResult random_worst(const ValueProfile &profile, const QueueCapacities &caps, std::size_t len,
                              std::uint64_t samples, std::uint64_t seed, double arriveProbability,
                              const SearchOptions &options)
    {
        const std::size_t m = profile.m();
        const Rational bound = compute_c(profile).upper;
        auto work = [&](unsigned worker, unsigned jobs, Partial &partial) {
            for (std::uint64_t i = worker; i < samples; i += jobs)
            {
                guarded(partial, i, [&] {
                    const Trace trace = random_raw_trace(m, len, sample_seed(seed, i), arriveProbability);
                    ++partial.evaluated;
                    if (auto ratio = drained_ratio(trace, caps, profile, bound, options.opt))
                    {
                        offer(partial, *ratio, i, append_drain(trace));
                    }
                });
                if (partial.error)
                {
                    return;
                }
            }
        };
        SearchResult result = run_partitioned(options.jobs, work);
        result.seed = seed;
        return result;
    }

    Trace random_drained_trace(std::size_t m, std::size_t len, std::uint64_t seed, double arriveProbability)
    {
        return append_drain(random_raw_trace(m, len, seed, arriveProbability));
    }
}
