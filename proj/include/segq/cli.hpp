#pragma once

#include "segq/engine.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace segq::cli
{
    enum ExitCode : int
    {
        Ok = 0,
        VerdictFailed = 1,
        InputError = 2,
        OracleBudget = 3,
        BoundFalsifiedExit = 4,
    };

    struct Hooks
    {
        /// Called by `verify` after both ledgers are built and before any
        /// check runs. Test-only.
        std::function<void(Ledger &greedy, Ledger &opt)> tamper_ledgers;
    };

    /// Runs one command line (without the program name). stdout content is
    /// deterministic for fixed arguments.
    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Hooks &hooks = {});
}
