#pragma once

#include "segq/model.hpp"

#include <catch_amalgamated.hpp>

#include <initializer_list>
#include <string>

namespace segq::test
{
    inline ValueProfile profile(std::initializer_list<long> values)
    {
        std::vector<Rational> raw;
        for (long v : values)
        {
            raw.emplace_back(v);
        }
        return validate_profile(std::move(raw));
    }

    inline QueueCapacities caps(std::initializer_list<Count> values) { return QueueCapacities::make(Counts(values)); }

    // "A1 A2 S" style, one token per event.
    inline Trace trace(const std::string &compact)
    {
        std::string text;
        for (std::size_t i = 0; i < compact.size(); ++i)
        {
            const char c = compact[i];
            if (c == 'S')
            {
                text += "S\n";
            }
            else if (c == 'A')
            {
                text += "A ";
                while (i + 1 < compact.size() && compact[i + 1] != ' ')
                {
                    text += compact[++i];
                }
                text += '\n';
            }
        }
        return parse_trace(text);
    }

    inline Rational q(const char *text) { return parse_rational(text); }
}
