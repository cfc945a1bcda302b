#include "segq/model.hpp"

#include "segq/error.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace segq
{
    namespace
    {
        std::string_view trim(std::string_view s)
        {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            {
                s.remove_prefix(1);
            }
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            {
                s.remove_suffix(1);
            }
            return s;
        }

        std::vector<std::string_view> split_ws(std::string_view s)
        {
            std::vector<std::string_view> out;
            std::size_t i = 0;
            while (i < s.size())
            {
                while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
                {
                    ++i;
                }
                const std::size_t start = i;
                while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
                {
                    ++i;
                }
                if (i > start)
                {
                    out.push_back(s.substr(start, i - start));
                }
            }
            return out;
        }

        std::string_view strip_comment(std::string_view line)
        {
            const auto hash = line.find('#');
            return hash == std::string_view::npos ? line : line.substr(0, hash);
        }

        bool all_digits(std::string_view s)
        {
            return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c) != 0; });
        }
    }

    ValueProfile ValueProfile::validate(std::vector<Rational> raw)
    {
        if (raw.size() < 2)
        {
            throw ProfileError(ProfileError::Kind::TooFewClasses, "at least two classes are required");
        }
        for (std::size_t i = 0; i < raw.size(); ++i)
        {
            raw[i].canonicalize();
            if (raw[i] <= 0)
            {
                throw ProfileError(ProfileError::Kind::NonPositiveValue,
                                   "value v_" + std::to_string(i + 1) + " = " + format_rational(raw[i]) + " is not positive");
            }
        }
        for (std::size_t i = 1; i < raw.size(); ++i)
        {
            if (!(raw[i - 1] < raw[i]))
            {
                throw ProfileError(ProfileError::Kind::NotIncreasing,
                                   "values must be strictly increasing (v_" + std::to_string(i) + " >= v_" + std::to_string(i + 1) + ")");
            }
        }
        return ValueProfile(std::move(raw));
    }

    const Rational &ValueProfile::value(ClassIndex i) const
    {
        if (i == 0)
        {
            return m_zero;
        }
        return m_values.at(static_cast<std::size_t>(i - 1));
    }

    ValueProfile validate_profile(std::vector<Rational> raw) { return ValueProfile::validate(std::move(raw)); }

    QueueCapacities QueueCapacities::make(Counts caps)
    {
        for (std::size_t i = 0; i < caps.size(); ++i)
        {
            if (caps[i] < 1)
            {
                throw ConfigError("capacity B_" + std::to_string(i + 1) + " must be at least 1");
            }
        }
        return QueueCapacities(std::move(caps));
    }

    Trace::Trace(std::vector<Event> events) : m_events(std::move(events))
    {
        m_arrivals = static_cast<std::size_t>(
            std::count_if(m_events.begin(), m_events.end(), [](const Event &e) { return e.is_arrive(); }));
        std::size_t trailing = 0;
        for (auto it = m_events.rbegin(); it != m_events.rend() && it->is_send(); ++it)
        {
            ++trailing;
        }
        m_drained = trailing >= m_arrivals;
    }

    Rational lower_class_weight(const ValueProfile &profile, int i)
    {
        Rational sum = 0;
        mpz_class weight = 1;
        for (int j = 1; j <= i - 1; ++j)
        {
            sum += Rational(weight) * profile.value(i - j);
            weight *= 2;
        }
        return sum;
    }

    BoundReport compute_c(const ValueProfile &profile)
    {
        BoundReport report;
        const int m = static_cast<int>(profile.m());
        for (int i = 1; i <= m - 1; ++i)
        {
            const Rational tail = lower_class_weight(profile, i);
            Rational ci = (profile.value(i) + tail) / (profile.value(i + 1) + tail);
            ci.canonicalize();
            report.c.push_back(ci);
        }
        report.c_star = *std::max_element(report.c.begin(), report.c.end());
        report.upper = 1 + report.c_star;

        Rational total = 0;
        for (const auto &v : profile.values())
        {
            total += v;
        }
        report.abs_lower = 2 - profile.value(m) / total;
        report.abs_lower.canonicalize();
        return report;
    }

    Trace parse_trace(std::string_view text, std::optional<std::size_t> classCount)
    {
        using Kind = TraceParseError::Kind;
        std::vector<Event> events;
        std::size_t lineNo = 0;
        std::size_t pos = 0;
        while (pos <= text.size())
        {
            const auto nl = text.find('\n', pos);
            const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
            ++lineNo;
            pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

            const auto tokens = split_ws(strip_comment(raw));
            if (tokens.empty())
            {
                continue;
            }
            if (tokens[0] == "S")
            {
                if (tokens.size() != 1)
                {
                    throw TraceParseError(Kind::SyntaxError, lineNo, "send takes no argument");
                }
                events.push_back(Event::send());
            }
            else if (tokens[0] == "A")
            {
                if (tokens.size() != 2)
                {
                    throw TraceParseError(Kind::SyntaxError, lineNo, "arrive expects exactly one class index");
                }
                if (!all_digits(tokens[1]))
                {
                    throw TraceParseError(Kind::SyntaxError, lineNo, "class index '" + std::string(tokens[1]) + "' is not a decimal integer");
                }
                if (tokens[1].size() > 9)
                {
                    throw TraceParseError(Kind::BadClassIndex, lineNo, "class index too large");
                }
                const int cls = std::stoi(std::string(tokens[1]));
                if (cls < 1 || (classCount && static_cast<std::size_t>(cls) > *classCount))
                {
                    throw TraceParseError(Kind::BadClassIndex, lineNo, "class index " + std::to_string(cls) + " out of range");
                }
                events.push_back(Event::arrive(cls));
            }
            else
            {
                throw TraceParseError(Kind::SyntaxError, lineNo, "unknown event '" + std::string(tokens[0]) + "'");
            }
        }
        return Trace(std::move(events));
    }

    std::string format_trace(const Trace &trace)
    {
        std::string out;
        for (const auto &e : trace.events())
        {
            if (e.is_send())
            {
                out += "S\n";
            }
            else
            {
                out += "A " + std::to_string(e.cls) + "\n";
            }
        }
        return out;
    }

    Trace append_drain(const Trace &trace)
    {
        std::vector<Event> events = trace.events();
        events.insert(events.end(), trace.arrival_count(), Event::send());
        return Trace(std::move(events));
    }

    ProfileConfig parse_config(std::string_view text)
    {
        ProfileConfig config;
        std::istringstream in{std::string(text)};
        std::string line;
        std::size_t lineNo = 0;
        while (std::getline(in, line))
        {
            ++lineNo;
            const std::string_view body = trim(strip_comment(line));
            if (body.empty())
            {
                continue;
            }
            const auto colon = body.find(':');
            if (colon == std::string_view::npos)
            {
                throw ConfigError("config line " + std::to_string(lineNo) + ": expected 'key: values'");
            }
            const std::string_view key = trim(body.substr(0, colon));
            const auto items = split_ws(body.substr(colon + 1));
            if (items.empty())
            {
                throw ConfigError("config line " + std::to_string(lineNo) + ": empty list for '" + std::string(key) + "'");
            }
            if (key == "values")
            {
                std::vector<Rational> values;
                for (auto item : items)
                {
                    values.push_back(parse_rational(item));
                }
                config.values = std::move(values);
            }
            else if (key == "capacities")
            {
                Counts caps;
                for (auto item : items)
                {
                    if (!all_digits(item) || item.size() > 18)
                    {
                        throw ConfigError("config line " + std::to_string(lineNo) + ": bad capacity '" + std::string(item) + "'");
                    }
                    caps.push_back(std::stoll(std::string(item)));
                }
                config.capacities = std::move(caps);
            }
            else
            {
                throw ConfigError("config line " + std::to_string(lineNo) + ": unknown key '" + std::string(key) + "'");
            }
        }
        if (config.values && config.capacities && config.values->size() != config.capacities->size())
        {
            throw ConfigError("values and capacities must have the same length");
        }
        return config;
    }

    namespace
    {
        std::vector<Rational> recurrence_values(std::size_t m, int leadFactor)
        {
            std::vector<Rational> v{Rational(1), Rational(2)};
            v.resize(std::max<std::size_t>(m, 2));
            for (std::size_t i = 2; i < m; ++i)
            {
                // v_{i+1} from v_i and the doubling-weighted tail over v_{i-1} .. v_1.
                Rational tail = 0;
                mpz_class weight = 1;
                for (std::size_t j = 1; j <= i - 1; ++j)
                {
                    tail += Rational(weight) * v[i - j - 1];
                    weight *= 2;
                }
                v[i] = leadFactor * v[i - 1] + tail;
            }
            v.resize(m);
            return v;
        }
    }

    std::vector<Rational> additive_recurrence_values(std::size_t m) { return recurrence_values(m, 1); }

    std::vector<Rational> doubling_recurrence_values(std::size_t m) { return recurrence_values(m, 2); }

    bool follows_additive_recurrence(const ValueProfile &profile)
    {
        const int m = static_cast<int>(profile.m());
        if (m < 3)
        {
            return false;
        }
        for (int i = 2; i <= m - 1; ++i)
        {
            if (profile.value(i + 1) != profile.value(i) + lower_class_weight(profile, i))
            {
                return false;
            }
        }
        return true;
    }
}
