#pragma once

#include "segq/engine.hpp"
#include "segq/model.hpp"

#include <cstdint>

namespace segq
{
    struct OptOptions
    {
        /// Upper bound on prod(B_i + 1) * |events|; exceeding it is an error.
        std::uint64_t state_cap = 10'000'000;
    };

    struct OptResult
    {
        Rational benefit;
        Schedule schedule;
        std::uint64_t states_explored = 0;
    };

    /// Exact offline optimum over diligent schedules, memoized on
    /// (event index, occupancy). Among benefit-equal choices at a send the
    /// highest class wins. Maximizes transmitted benefit; on drained traces
    /// that is the accepted benefit as well.
    /// Throws StateSpaceExceeded, ClassOutOfRange, ConfigError.
    OptResult opt_search(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                         const OptOptions &options = {});

    /// Plain exhaustive recursion over every diligent send choice, no
    /// memoization and no shared code with opt_search. Exponential; keep the
    /// number of contested sends small.
    Rational opt_bruteforce(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile);
}
