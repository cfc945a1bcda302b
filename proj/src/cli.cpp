#include "segq/cli.hpp"

#include "segq/adversary.hpp"
#include "segq/analysis.hpp"
#include "segq/error.hpp"
#include "segq/model.hpp"
#include "segq/offline_opt.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace segq::cli
{
    namespace
    {
        struct Options
        {
            std::vector<std::string> values;
            std::vector<std::string> caps;
            std::string configPath;
            std::string tracePath;
            std::uint64_t stateCap = OptOptions{}.state_cap;
            unsigned jobs = 1;
            bool dumpLedger = false;

            std::optional<std::size_t> maxLen;
            std::optional<std::uint64_t> samples;
            std::optional<std::uint64_t> seed;
            std::size_t len = 12;
            std::string arriveProb = "1/2";
            std::uint64_t budget = SearchOptions{}.budget;
        };

        std::vector<std::string> split_list(const std::vector<std::string> &raw)
        {
            std::vector<std::string> out;
            for (const auto &item : raw)
            {
                std::string token;
                for (char c : item)
                {
                    if (c == ',' || std::isspace(static_cast<unsigned char>(c)))
                    {
                        if (!token.empty())
                        {
                            out.push_back(token);
                        }
                        token.clear();
                    }
                    else
                    {
                        token += c;
                    }
                }
                if (!token.empty())
                {
                    out.push_back(token);
                }
            }
            return out;
        }

        std::string read_file(const std::string &path)
        {
            if (path == "-")
            {
                std::ostringstream ss;
                ss << std::cin.rdbuf();
                return ss.str();
            }
            std::ifstream in(path, std::ios::binary);
            if (!in)
            {
                throw ConfigError("cannot open '" + path + "'");
            }
            std::ostringstream ss;
            ss << in.rdbuf();
            return ss.str();
        }

        struct Setup
        {
            ValueProfile profile;
            std::optional<QueueCapacities> caps;
        };

        Setup load_setup(const Options &opts, bool needCaps)
        {
            ProfileConfig config;
            if (!opts.configPath.empty())
            {
                config = parse_config(read_file(opts.configPath));
            }
            if (!opts.values.empty())
            {
                std::vector<Rational> values;
                for (const auto &tok : split_list(opts.values))
                {
                    values.push_back(parse_rational(tok));
                }
                config.values = std::move(values);
            }
            if (!opts.caps.empty())
            {
                Counts caps;
                for (const auto &tok : split_list(opts.caps))
                {
                    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 18)
                    {
                        throw ConfigError("bad capacity '" + tok + "'");
                    }
                    caps.push_back(std::stoll(tok));
                }
                config.capacities = std::move(caps);
            }
            if (!config.values)
            {
                throw ConfigError("no class values given (use --values or --config)");
            }
            Setup setup{validate_profile(*config.values), std::nullopt};
            if (config.capacities)
            {
                if (config.capacities->size() != setup.profile.m())
                {
                    throw ConfigError("values and capacities must have the same length");
                }
                setup.caps = QueueCapacities::make(*config.capacities);
            }
            else if (needCaps)
            {
                throw ConfigError("no capacities given (use --caps or --config)");
            }
            return setup;
        }

        Trace load_trace(const Options &opts, const ValueProfile &profile)
        {
            if (opts.tracePath.empty())
            {
                throw ConfigError("no trace given (use --trace FILE, or - for stdin)");
            }
            return parse_trace(read_file(opts.tracePath), profile.m());
        }

        std::string join(const Counts &v)
        {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                s += (i ? " " : "") + std::to_string(v[i]);
            }
            return s;
        }

        std::string ratio_text(const Rational &opt, const Rational &greedy)
        {
            if (greedy > 0)
            {
                Rational r = opt / greedy;
                r.canonicalize();
                return format_rational(r);
            }
            return opt == 0 ? std::string("1") : std::string("undefined");
        }

        int cmd_simulate(const Options &opts, std::ostream &out, std::ostream &err)
        {
            const Setup setup = load_setup(opts, true);
            const Trace trace = load_trace(opts, setup.profile);
            if (!trace.drained())
            {
                err << "note: trace is not drained; benefits count transmitted packets only\n";
            }
            const GreedyRun greedy = run_greedy(trace, *setup.caps, setup.profile);
            const OptResult opt = opt_search(trace, *setup.caps, setup.profile, OptOptions{opts.stateCap});

            const auto &fin = greedy.ledger.final_entry();
            const auto rejected = std::count_if(greedy.ledger.entries.begin(), greedy.ledger.entries.end(),
                                                [](const LedgerEntry &e) { return e.action.kind == Action::Kind::Rejected; });

            out << "greedy=" << format_rational(greedy.ledger.benefit_transmitted)
                << " opt=" << format_rational(opt.benefit)
                << " ratio=" << ratio_text(opt.benefit, greedy.ledger.benefit_transmitted) << '\n';
            out << "events=" << trace.size() << " arrivals=" << trace.arrival_count() << " sends=" << trace.send_count()
                << " drained=" << (trace.drained() ? "true" : "false") << '\n';
            out << "greedy_accepted=" << join(fin.accepted) << " greedy_transmitted=" << join(fin.transmitted)
                << " greedy_queued=" << join(fin.occupancy) << " greedy_rejected=" << rejected << '\n';
            out << "greedy_benefit_accepted=" << format_rational(greedy.ledger.benefit_accepted) << '\n';
            out << "greedy_schedule=" << format_schedule(greedy.schedule) << '\n';
            out << "opt_schedule=" << format_schedule(opt.schedule) << '\n';
            if (opts.dumpLedger)
            {
                out << "# greedy ledger: index event action A delta q\n" << export_ledger(trace, greedy.ledger);
                const Ledger optLedger = replay_schedule(trace, *setup.caps, setup.profile, opt.schedule);
                out << "# opt ledger: index event action A delta q\n" << export_ledger(trace, optLedger);
            }
            return Ok;
        }

        int cmd_verify(const Options &opts, std::ostream &out, std::ostream &err, const Hooks &hooks)
        {
            const Setup setup = load_setup(opts, true);
            Trace trace = load_trace(opts, setup.profile);
            if (!trace.drained())
            {
                err << "note: appended " << trace.arrival_count() << " drain sends\n";
                trace = append_drain(trace);
            }
            GreedyRun greedy = run_greedy(trace, *setup.caps, setup.profile);
            const OptResult opt = opt_search(trace, *setup.caps, setup.profile, OptOptions{opts.stateCap});
            Ledger optLedger = replay_schedule(trace, *setup.caps, setup.profile, opt.schedule);
            if (hooks.tamper_ledgers)
            {
                hooks.tamper_ledgers(greedy.ledger, optLedger);
            }
            const ComparativeReport report = verify_ledgers(trace, *setup.caps, setup.profile, greedy, optLedger, opt.schedule);
            out << format_report(report);
            if (opts.dumpLedger)
            {
                out << "# greedy ledger\n" << export_ledger(trace, greedy.ledger);
                out << "# opt ledger\n" << export_ledger(trace, optLedger);
            }
            for (const auto &v : report.verdicts)
            {
                if (!v.ok)
                {
                    err << "failed: " << v.name << ": " << v.detail << '\n';
                }
            }
            return report.all_ok() ? Ok : VerdictFailed;
        }

        int cmd_bound(const Options &opts, std::ostream &out)
        {
            const Setup setup = load_setup(opts, false);
            const BoundReport bound = compute_c(setup.profile);
            out << "c=";
            for (std::size_t i = 0; i < bound.c.size(); ++i)
            {
                out << (i ? " " : "") << format_rational(bound.c[i]);
            }
            out << '\n';
            out << "c*=" << format_rational(bound.c_star) << " upper=" << format_rational(bound.upper)
                << " lower=" << format_rational(bound.abs_lower) << '\n';
            if (follows_additive_recurrence(setup.profile))
            {
                out << "note: values satisfy v_{i+1} = v_i + sum_{j=1}^{i-1} 2^{j-1} v_{i-j}; "
                       "direct evaluation gives c*="
                    << format_rational(bound.c_star)
                    << ", not 1/2 (all c_i = 1/2 needs v_{i+1} = 2 v_i + sum_{j=1}^{i-1} 2^{j-1} v_{i-j})\n";
            }
            return Ok;
        }

        int cmd_search(const Options &opts, std::ostream &out)
        {
            const Setup setup = load_setup(opts, true);
            if (opts.maxLen.has_value() == opts.samples.has_value())
            {
                throw ConfigError("search needs exactly one of --max-len (exhaustive) or --samples (random)");
            }
            SearchOptions search;
            search.budget = opts.budget;
            search.jobs = opts.jobs;
            search.opt.state_cap = opts.stateCap;

            SearchResult result;
            if (opts.maxLen)
            {
                result = exhaustive_worst(setup.profile, *setup.caps, *opts.maxLen, search);
                out << "# mode=exhaustive max_len=" << *opts.maxLen << '\n';
            }
            else
            {
                if (!opts.seed)
                {
                    throw ConfigError("random search needs --seed");
                }
                const Rational p = parse_rational(opts.arriveProb);
                if (p < 0 || p > 1)
                {
                    throw ConfigError("--arrive-prob must lie in [0, 1]");
                }
                result = random_worst(setup.profile, *setup.caps, opts.len, *opts.samples, *opts.seed, p.get_d(), search);
                out << "# mode=random len=" << opts.len << " samples=" << *opts.samples << " seed=" << *opts.seed
                    << " arrive_prob=" << format_rational(p) << '\n';
            }
            const BoundReport bound = compute_c(setup.profile);
            out << "# traces_evaluated=" << result.traces_evaluated << '\n';
            out << "# worst_ratio=" << format_rational(result.worst_ratio) << '\n';
            out << "# upper=" << format_rational(bound.upper) << " lower=" << format_rational(bound.abs_lower) << '\n';
            out << "# worst trace (drained):\n" << format_trace(result.worst_trace);
            return Ok;
        }

        void add_profile_options(CLI::App &sub, Options &opts)
        {
            sub.add_option("--values", opts.values, "Class values v_1 < ... < v_m (p or p/q)")->expected(1, -1);
            sub.add_option("--caps", opts.caps, "Queue capacities B_1 .. B_m")->expected(1, -1);
            sub.add_option("--config", opts.configPath, "Config file with values:/capacities: lines");
        }
    }

    int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err, const Hooks &hooks)
    {
        Options opts;
        CLI::App app{"Greedy vs offline-optimal verifier for class-segregated multi-queue buffers", "segq"};
        app.require_subcommand(1);

        auto *simulate = app.add_subcommand("simulate", "Run Greedy and the offline optimum on one trace");
        add_profile_options(*simulate, opts);
        simulate->add_option("--trace", opts.tracePath, "Trace file, - for stdin");
        simulate->add_option("--state-cap", opts.stateCap, "Offline search state cap");
        simulate->add_flag("--dump-ledger", opts.dumpLedger, "Append tab-separated ledgers");

        auto *verify = app.add_subcommand("verify", "Check every counter identity and inequality on one trace");
        add_profile_options(*verify, opts);
        verify->add_option("--trace", opts.tracePath, "Trace file, - for stdin");
        verify->add_option("--state-cap", opts.stateCap, "Offline search state cap");
        verify->add_flag("--dump-ledger", opts.dumpLedger, "Append tab-separated ledgers");

        auto *bound = app.add_subcommand("bound", "Print c_i, c*, 1 + c* and the general lower bound");
        add_profile_options(*bound, opts);

        auto *search = app.add_subcommand("search", "Search for the worst Opt/Greedy ratio");
        add_profile_options(*search, opts);
        search->add_option("--max-len", opts.maxLen, "Exhaustive search up to this length");
        search->add_option("--samples", opts.samples, "Random search sample count");
        search->add_option("--seed", opts.seed, "Random search seed");
        search->add_option("--len", opts.len, "Random trace length before draining");
        search->add_option("--arrive-prob", opts.arriveProb, "Arrival probability per event (rational)");
        search->add_option("--budget", opts.budget, "Cap on (m+1)^max_len");
        search->add_option("--state-cap", opts.stateCap, "Offline search state cap");
        search->add_option("--jobs", opts.jobs, "Worker threads")->check(CLI::PositiveNumber);

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &e)
        {
            return app.exit(e, out, err);
        }
        catch (const CLI::ParseError &e)
        {
            app.exit(e, out, err);
            return InputError;
        }

        try
        {
            if (simulate->parsed())
            {
                return cmd_simulate(opts, out, err);
            }
            if (verify->parsed())
            {
                return cmd_verify(opts, out, err, hooks);
            }
            if (bound->parsed())
            {
                return cmd_bound(opts, out);
            }
            return cmd_search(opts, out);
        }
        catch (const BoundFalsified &e)
        {
            err << "FALSIFIED: " << e.what() << '\n' << format_trace(e.trace());
            return BoundFalsifiedExit;
        }
        catch (const StateSpaceExceeded &e)
        {
            err << "error: " << e.what() << '\n';
            return OracleBudget;
        }
        catch (const BudgetExceeded &e)
        {
            err << "error: " << e.what() << '\n';
            return OracleBudget;
        }
        catch (const Error &e)
        {
            err << "error: " << e.what() << '\n';
            return InputError;
        }
    }
}
