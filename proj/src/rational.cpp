#include "segq/rational.hpp"

#include "segq/error.hpp"

#include <algorithm>
#include <cctype>

namespace segq
{
    namespace
    {
        bool is_integer_literal(std::string_view s)
        {
            if (!s.empty() && (s.front() == '-' || s.front() == '+'))
            {
                s.remove_prefix(1);
            }
            return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
        }

        bool is_unsigned_literal(std::string_view s)
        {
            return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
        }
    }

    Rational parse_rational(std::string_view text)
    {
        const auto slash = text.find('/');
        const std::string_view num = text.substr(0, slash);
        const std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);

        if (!is_integer_literal(num) || !is_unsigned_literal(den))
        {
            throw ConfigError("malformed rational '" + std::string(text) + "'");
        }

        std::string numStr(num);
        if (numStr.front() == '+')
        {
            numStr.erase(0, 1);
        }
        const mpz_class n(numStr, 10);
        const mpz_class d(std::string(den), 10);
        if (d == 0)
        {
            throw ConfigError("zero denominator in '" + std::string(text) + "'");
        }
        Rational r(n, d);
        r.canonicalize();
        return r;
    }

    std::string format_rational(const Rational &r)
    {
        Rational c = r;
        c.canonicalize();
        return c.get_str(10);
    }
}
