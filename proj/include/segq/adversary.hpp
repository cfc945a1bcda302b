#pragma once

#include "segq/error.hpp"
#include "segq/model.hpp"
#include "segq/offline_opt.hpp"

#include <cstdint>
#include <optional>

namespace segq
{
    struct SearchResult
    {
        Trace worst_trace; // drained; empty when nothing carried a ratio
        Rational worst_ratio{1};
        std::uint64_t traces_evaluated = 0;
        std::optional<std::uint64_t> seed;
    };

    struct SearchOptions
    {
        /// Cap on raw event strings (m+1)^max_len for exhaustive mode.
        std::uint64_t budget = 100'000'000;
        unsigned jobs = 1;
        OptOptions opt;
    };

    /// Raised when some trace beats 1 + c*.
    class BoundFalsified : public Error
    {
    public:
        BoundFalsified(Trace trace, Rational ratio, Rational bound);

        const Trace &trace() const noexcept { return m_trace; }
        const Rational &ratio() const noexcept { return m_ratio; }

    private:
        Trace m_trace;
        Rational m_ratio;
    };

    /// Opt/Greedy on append_drain(trace) (always drained, even if already drained), or nullopt when Greedy earns 0.
    /// Throws BoundFalsified when the ratio exceeds `bound`.
    std::optional<Rational> drained_ratio(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                          const Rational &bound, const OptOptions &options = {});

    /// Every event string over {A 1..A m, S} of length <= maxLen, drained.
    /// Strings that start or end with a send are skipped: a leading send idles
    /// for every policy and a trailing one is absorbed by the drain, so each
    /// is equivalent to a shorter string already enumerated. Among equal
    /// ratios the first string in (length, lexicographic) order wins.
    /// Throws BudgetExceeded.
    SearchResult exhaustive_worst(const ValueProfile &profile, const QueueCapacities &caps, std::size_t maxLen,
                                  const SearchOptions &options = {});

    /// `samples` i.i.d. strings of length `len`: each event is an arrival with
    /// probability arriveProbability (class uniform) and a send otherwise.
    /// Deterministic in seed; independent of options.jobs.
    SearchResult random_worst(const ValueProfile &profile, const QueueCapacities &caps, std::size_t len,
                              std::uint64_t samples, std::uint64_t seed, double arriveProbability = 0.5,
                              const SearchOptions &options = {});

    /// Random drained trace used by the lemma sweeps; same generator as random_worst.
    Trace random_drained_trace(std::size_t m, std::size_t len, std::uint64_t seed, double arriveProbability = 0.5);
}
