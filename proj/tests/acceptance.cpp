// One line per acceptance criterion; exit status is the number of failures.
#include "segq/adversary.hpp"
#include "segq/analysis.hpp"
#include "segq/cli.hpp"
#include "segq/engine.hpp"
#include "segq/error.hpp"
#include "segq/offline_opt.hpp"

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace segq;

namespace
{
    struct Outcome
    {
        bool ok;
        std::string detail;
    };

    int failures = 0;

    void criterion(int id, const std::string &title, const std::function<Outcome()> &body)
    {
        const auto start = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try
        {
            o = body();
        }
        catch (const std::exception &e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        while (o.detail.size() >= 2 && o.detail.compare(o.detail.size() - 2, 2, "; ") == 0)
        {
            o.detail.resize(o.detail.size() - 2);
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.ok ? 0 : 1;
        std::ostringstream t;
        t.setf(std::ios::fixed);
        t.precision(2);
        t << secs;
        std::cout << (o.ok ? "[PASS] " : "[FAIL] ") << id << " " << title << ": " << o.detail << " (" << t.str() << "s)"
                  << std::endl;
    }

    ValueProfile ints(std::initializer_list<long> v)
    {
        std::vector<Rational> raw;
        for (long x : v)
        {
            raw.emplace_back(x);
        }
        return validate_profile(std::move(raw));
    }

    std::string cli_out(std::vector<std::string> args, int &code)
    {
        std::ostringstream out, err;
        code = cli::run(args, out, err);
        return out.str();
    }

    // Every event string over {A 1..A m, S} of length exactly len, in rank order.
    void for_each_string(std::size_t m, std::size_t len, const std::function<void(const Trace &)> &fn)
    {
        std::vector<std::size_t> digits(len, 0);
        while (true)
        {
            std::vector<Event> events;
            for (auto d : digits)
            {
                events.push_back(d == m ? Event::send() : Event::arrive(static_cast<ClassIndex>(d + 1)));
            }
            fn(Trace(std::move(events)));
            std::size_t i = 0;
            while (i < len && ++digits[i] == m + 1)
            {
                digits[i++] = 0;
            }
            if (i == len)
            {
                return;
            }
        }
    }

    struct Config
    {
        ValueProfile profile;
        QueueCapacities caps;
        std::string label;
    };
}

int main()
{
    criterion(1, "two-valued bound is exact", [] {
        int code = 0;
        const std::string out = cli_out({"bound", "--values", "1", "2"}, code);
        const BoundReport b = compute_c(ints({1, 2}));
        const bool ok = code == 0 && out.find("c*=1/2 upper=3/2 lower=4/3\n") != std::string::npos &&
                        b.c_star == Rational(1, 2) && b.upper == Rational(3, 2) && b.abs_lower == Rational(4, 3);
        return Outcome{ok, "c*=" + format_rational(b.c_star) + " upper=" + format_rational(b.upper) +
                               " abs_lower=" + format_rational(b.abs_lower)};
    });

    criterion(2, "exhaustive ratio check, values (1,2) caps (1,1), length <= 10", [] {
        const SearchResult r = exhaustive_worst(ints({1, 2}), QueueCapacities::make({1, 1}), 10);
        const bool ok = r.worst_ratio <= Rational(3, 2) && r.worst_ratio >= Rational(4, 3);
        return Outcome{ok, "traces=" + std::to_string(r.traces_evaluated) + " max=" + format_rational(r.worst_ratio) +
                               " (want within [4/3, 3/2])"};
    });

    criterion(3, "exhaustive ratio check, values (1,2,5) caps (1,1,1), length <= 8", [] {
        const SearchResult r = exhaustive_worst(ints({1, 2, 5}), QueueCapacities::make({1, 1, 1}), 8);
        const bool ok = r.worst_ratio <= Rational(3, 2);
        return Outcome{ok, "traces=" + std::to_string(r.traces_evaluated) + " max=" + format_rational(r.worst_ratio) +
                               " (bound 3/2)"};
    });

    const std::vector<Config> configs{
        {ints({1, 2}), QueueCapacities::make({1, 1}), "(1,2)/(1,1)"},
        {ints({1, 2, 5}), QueueCapacities::make({1, 1, 1}), "(1,2,5)/(1,1,1)"},
        {ints({1, 3, 4, 10}), QueueCapacities::make({2, 1, 2, 1}), "(1,3,4,10)/(2,1,2,1)"},
    };

    criterion(4, "lemma suite on 10^4 seeded random drained traces per configuration", [&] {
        constexpr std::uint64_t samples = 10'000;
        std::ostringstream detail;
        bool ok = true;
        for (const auto &cfg : configs)
        {
            std::uint64_t failed = 0;
            std::uint64_t checks = 0;
            std::string first;
            for (std::uint64_t seed = 1; seed <= samples; ++seed)
            {
                const Trace t = random_drained_trace(cfg.profile.m(), 4 * cfg.profile.m() + 4, seed);
                const ComparativeReport r = verify_all(t, cfg.caps, cfg.profile);
                bool traceOk = true;
                for (const auto &v : r.verdicts)
                {
                    ++checks;
                    if (!v.ok && traceOk)
                    {
                        traceOk = false;
                        if (first.empty())
                        {
                            first = " first=" + format_verdict(v) + " seed=" + std::to_string(seed);
                        }
                    }
                }
                failed += traceOk ? 0 : 1;
            }
            ok = ok && failed == 0;
            detail << cfg.label << " " << samples - failed << "/" << samples << " traces, " << checks << " verdicts"
                   << first << "; ";
        }
        return Outcome{ok, detail.str()};
    });

    criterion(5, "memoized optimum equals plain recursion on every string of length <= 7", [&] {
        std::ostringstream detail;
        bool ok = true;
        for (std::size_t k = 0; k < 2; ++k)
        {
            const Config &cfg = configs[k];
            std::uint64_t compared = 0;
            std::uint64_t mismatched = 0;
            for (std::size_t len = 0; len <= 7; ++len)
            {
                for_each_string(cfg.profile.m(), len, [&](const Trace &raw) {
                    for (const Trace &t : {raw, append_drain(raw)})
                    {
                        ++compared;
                        if (opt_search(t, cfg.caps, cfg.profile).benefit != opt_bruteforce(t, cfg.caps, cfg.profile))
                        {
                            ++mismatched;
                        }
                    }
                });
            }
            ok = ok && mismatched == 0;
            detail << cfg.label << " " << compared - mismatched << "/" << compared << " equal; ";
        }
        return Outcome{ok, detail.str()};
    });

    criterion(6, "U recursion equals explicit bounds on [0,3]^m, m in [2,6], and m=5 lists", [] {
        std::uint64_t vectors = 0;
        std::uint64_t mismatched = 0;
        for (std::size_t m = 2; m <= 6; ++m)
        {
            Counts A(m, 0);
            while (true)
            {
                ++vectors;
                mismatched += u_recursion(A) == u_explicit(A) ? 0 : 1;
                std::size_t i = 0;
                while (i < m && ++A[i] == 4)
                {
                    A[i++] = 0;
                }
                if (i == m)
                {
                    break;
                }
            }
        }
        const std::vector<std::vector<std::string>> expected{
            {"S_2+S_2", "S_2+S_3+S_3", "S_2+S_3+S_4+S_5", "S_1"},
            {"S_3+S_3", "S_3+S_4+S_5", "S_2"},
            {"S_4+S_5", "S_3"},
            {"S_5"},
        };
        bool listsOk = true;
        std::string lists;
        for (int h = 1; h <= 4; ++h)
        {
            std::vector<std::string> got;
            for (const auto &terms : u_candidate_terms(5, h))
            {
                got.push_back(format_candidate(terms));
            }
            listsOk = listsOk && got == expected[static_cast<std::size_t>(h - 1)];
            lists += " h=" + std::to_string(h) + ":" + std::to_string(got.size());
        }
        return Outcome{mismatched == 0 && listsOk, std::to_string(vectors - mismatched) + "/" + std::to_string(vectors) +
                                                       " vectors equal; m=5 list sizes" + lists +
                                                       (listsOk ? " verbatim" : " MISMATCH")};
    });

    criterion(7, "search output is byte-identical across runs and worker counts", [] {
        const std::vector<std::string> random{"search", "--values", "1", "3", "4", "10", "--caps", "2", "1", "2", "1",
                                              "--samples", "10000", "--seed", "42"};
        const std::vector<std::string> exhaustive{"search", "--values", "1", "2", "5", "--caps", "1", "1", "1",
                                                  "--max-len", "7"};
        bool ok = true;
        std::string detail;
        for (const auto *base : {&random, &exhaustive})
        {
            auto one = *base;
            one.insert(one.end(), {"--jobs", "1"});
            auto eight = *base;
            eight.insert(eight.end(), {"--jobs", "8"});
            int c1 = 0, c2 = 0, c3 = 0;
            const std::string a = cli_out(one, c1);
            const std::string b = cli_out(one, c2);
            const std::string c = cli_out(eight, c3);
            const bool same = c1 == 0 && c2 == 0 && c3 == 0 && a == b && a == c;
            ok = ok && same;
            detail += std::string(base == &random ? "random seed 42" : "exhaustive") + (same ? " identical" : " DIFFERENT") +
                      " (" + std::to_string(a.size()) + " bytes); ";
        }
        return Outcome{ok, detail};
    });

    criterion(8, "additive recurrence profile reports c*=3/4 with a note", [] {
        bool ok = true;
        std::string detail;
        for (std::size_t m = 3; m <= 8; ++m)
        {
            const auto values = additive_recurrence_values(m);
            std::vector<std::string> args{"bound", "--values"};
            for (const auto &v : values)
            {
                args.push_back(format_rational(v));
            }
            int code = 0;
            const std::string out = cli_out(args, code);
            const Rational cs = compute_c(validate_profile(values)).c_star;
            const bool here = code == 0 && cs == Rational(3, 4) && out.find("c*=3/4 ") != std::string::npos &&
                              out.find("\nnote: ") != std::string::npos;
            ok = ok && here;
            detail += "m=" + std::to_string(m) + " c*=" + format_rational(cs) + (here ? "" : " (missing note)") + "; ";
        }
        return Outcome{ok, detail};
    });

    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
