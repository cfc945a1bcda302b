#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace segq
{
    // Every value, benefit and bound is exact.
    using Rational = mpq_class;

    /// Parses `p` or `p/q` with an optional leading sign. The result is
    /// canonical. Throws ConfigError on anything else, including q = 0.
    Rational parse_rational(std::string_view text);

    /// `p/q`, or `p` when the denominator is 1.
    std::string format_rational(const Rational &r);
}
