#include "segq/analysis.hpp"

#include "segq/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace segq
{
    namespace
    {
        void check_same_trace(const Ledger &greedy, const Ledger &opt)
        {
            if (greedy.entries.size() != opt.entries.size())
            {
                throw LedgerMismatch("ledgers have " + std::to_string(greedy.entries.size()) + " and " +
                                     std::to_string(opt.entries.size()) + " entries");
            }
            if (!greedy.entries.empty() && greedy.entries.front().accepted.size() != opt.entries.front().accepted.size())
            {
                throw LedgerMismatch("ledgers have different class counts");
            }
        }

        std::size_t class_count(const Ledger &ledger)
        {
            return ledger.entries.empty() ? 0 : ledger.entries.front().accepted.size();
        }

        Count sum_from(const Counts &v, int h)
        {
            Count s = 0;
            for (std::size_t i = static_cast<std::size_t>(h - 1); i < v.size(); ++i)
            {
                s += v[i];
            }
            return s;
        }

        // S_h with S_{m+1} = 0.
        Count s_at(const Counts &S, int h) { return static_cast<std::size_t>(h) > S.size() ? 0 : S[static_cast<std::size_t>(h - 1)]; }

        Verdict nonneg(const ClassEventMatrix &mat, std::string name)
        {
            Verdict v{std::move(name)};
            for (int h = 1; h <= static_cast<int>(mat.classes()); ++h)
            {
                for (std::size_t e = 0; e < mat.events(); ++e)
                {
                    if (mat.at(h, e) < 0)
                    {
                        v.ok = false;
                        v.h = h;
                        v.e = e;
                        v.detail = "value " + std::to_string(mat.at(h, e));
                        return v;
                    }
                }
            }
            return v;
        }

        Verdict fail(Verdict v, std::optional<int> h, std::optional<std::size_t> e, std::string detail)
        {
            v.ok = false;
            v.h = h;
            v.e = e;
            v.detail = std::move(detail);
            return v;
        }

        Rational weighted(const ValueProfile &profile, const Counts &counts)
        {
            Rational s = 0;
            for (std::size_t i = 0; i < counts.size(); ++i)
            {
                s += profile.values()[i] * counts[i];
            }
            return s;
        }
    }

    std::string format_verdict(const Verdict &v)
    {
        std::string line = "verdict " + v.name + (v.ok ? " true" : " false");
        if (v.h)
        {
            line += " h=" + std::to_string(*v.h);
        }
        if (v.e)
        {
            line += " e=" + std::to_string(*v.e);
        }
        return line;
    }

    ClassEventMatrix compute_xi(const Ledger &greedy, const Ledger &opt)
    {
        check_same_trace(greedy, opt);
        const std::size_t m = class_count(greedy);
        ClassEventMatrix xi(m == 0 ? 0 : m - 1, greedy.entries.size());
        for (std::size_t e = 0; e < greedy.entries.size(); ++e)
        {
            const auto &g = greedy.entries[e].transmitted;
            const auto &o = opt.entries[e].transmitted;
            for (int h = 1; h <= static_cast<int>(m) - 1; ++h)
            {
                xi.at(h, e) = sum_from(g, h) - o[static_cast<std::size_t>(h - 1)];
            }
        }
        return xi;
    }

    ClassEventMatrix compute_phi(const Ledger &greedy, const Ledger &opt)
    {
        check_same_trace(greedy, opt);
        const std::size_t m = class_count(greedy);
        ClassEventMatrix phi(m == 0 ? 0 : m - 1, greedy.entries.size());
        for (std::size_t e = 0; e < greedy.entries.size(); ++e)
        {
            const auto &g = greedy.entries[e].accepted;
            const auto &o = opt.entries[e].accepted;
            for (int h = 1; h <= static_cast<int>(m) - 1; ++h)
            {
                phi.at(h, e) = sum_from(g, h) - o[static_cast<std::size_t>(h - 1)];
            }
        }
        return phi;
    }

    Verdict check_xi_nonneg(const ClassEventMatrix &xi) { return nonneg(xi, "xi_nonneg"); }

    Verdict check_phi_nonneg(const ClassEventMatrix &phi) { return nonneg(phi, "phi_nonneg"); }

    Verdict check_ledger_identity(const Ledger &ledger, const QueueCapacities &caps, std::string name)
    {
        Verdict v{std::move(name)};
        const LedgerEntry *prev = nullptr;
        for (std::size_t e = 0; e < ledger.entries.size(); ++e)
        {
            const auto &entry = ledger.entries[e];
            const std::size_t m = entry.accepted.size();
            if (entry.transmitted.size() != m || entry.occupancy.size() != m || caps.size() != m)
            {
                return fail(v, std::nullopt, e, "vector length mismatch");
            }
            for (std::size_t h = 0; h < m; ++h)
            {
                const int cls = static_cast<int>(h + 1);
                if (entry.accepted[h] != entry.transmitted[h] + entry.occupancy[h])
                {
                    return fail(v, cls, e, "A != delta + q");
                }
                if (entry.occupancy[h] < 0 || entry.occupancy[h] > caps.caps()[h])
                {
                    return fail(v, cls, e, "occupancy outside [0, B]");
                }
                if (prev && (entry.accepted[h] < prev->accepted[h] || entry.transmitted[h] < prev->transmitted[h]))
                {
                    return fail(v, cls, e, "cumulative counter decreased");
                }
            }
            if (prev)
            {
                const Count da = std::accumulate(entry.accepted.begin(), entry.accepted.end(), Count{0}) -
                                 std::accumulate(prev->accepted.begin(), prev->accepted.end(), Count{0});
                const Count dt = std::accumulate(entry.transmitted.begin(), entry.transmitted.end(), Count{0}) -
                                 std::accumulate(prev->transmitted.begin(), prev->transmitted.end(), Count{0});
                if (da > 1 || dt > 1)
                {
                    return fail(v, std::nullopt, e, "more than one packet moved in one event");
                }
            }
            prev = &entry;
        }
        return v;
    }

    std::vector<Verdict> check_xi_claims(const Trace &trace, const Ledger &greedy, const Ledger &opt,
                                         const ClassEventMatrix &xi)
    {
        Verdict busyStep{"xi_step_busy"};
        Verdict emptyStep{"xi_step_opt_empty"};
        const auto sends = send_positions(trace);
        const int m = static_cast<int>(class_count(greedy));
        for (std::size_t j = 1; j < sends.size(); ++j)
        {
            const std::size_t before = sends[j - 1];
            const std::size_t after = sends[j];
            for (int h = 1; h <= m - 1; ++h)
            {
                const bool stepOk = xi.at(h, after) >= xi.at(h, before);
                if (j >= 2 && busyStep.ok && sum_from(greedy.entries[before].occupancy, h) > 0 && !stepOk)
                {
                    busyStep = fail(busyStep, h, after, "xi decreased while Greedy held a class >= h packet");
                }
                if (emptyStep.ok && opt.entries[before].occupancy[static_cast<std::size_t>(h - 1)] == 0 && !stepOk)
                {
                    emptyStep = fail(emptyStep, h, after, "xi decreased while Opt's class-h queue was empty");
                }
            }
        }
        return {busyStep, emptyStep};
    }

    Verdict check_abs_lemma(const Ledger &greedy, const Ledger &opt)
    {
        check_same_trace(greedy, opt);
        Verdict v{"aggregate_acceptance"};
        const auto &a = greedy.final_entry().accepted;
        const auto &aStar = opt.final_entry().accepted;
        for (int h = 1; h <= static_cast<int>(a.size()); ++h)
        {
            const Count lhs = sum_from(aStar, h) - sum_from(a, h);
            if (lhs > sum_from(a, h))
            {
                return fail(v, h, std::nullopt, std::to_string(lhs) + " > " + std::to_string(sum_from(a, h)));
            }
        }
        return v;
    }

    Counts tail_sums(const Counts &accepted)
    {
        Counts S(accepted.size(), 0);
        Count running = 0;
        for (std::size_t i = accepted.size(); i-- > 0;)
        {
            running += accepted[i];
            S[i] = running;
        }
        return S;
    }

    std::vector<Verdict> check_D_bounds(const Counts &D, const Counts &S)
    {
        Verdict dBound{"d_bound"};
        Verdict dTail{"d_tail_bound"};
        const int m = static_cast<int>(D.size());
        for (int h = 1; h <= m - 1 && dBound.ok; ++h)
        {
            if (D[static_cast<std::size_t>(h - 1)] > s_at(S, h + 1))
            {
                dBound = fail(dBound, h, std::nullopt,
                              "D=" + std::to_string(D[static_cast<std::size_t>(h - 1)]) + " > S=" + std::to_string(s_at(S, h + 1)));
            }
        }
        for (int h = 1; h <= m - 2 && dTail.ok; ++h)
        {
            Count tail = 0;
            for (int l = h; l <= m - 1; ++l)
            {
                tail += D[static_cast<std::size_t>(l - 1)];
            }
            if (tail > s_at(S, h))
            {
                dTail = fail(dTail, h, std::nullopt, std::to_string(tail) + " > S=" + std::to_string(s_at(S, h)));
            }
        }
        return {dBound, dTail};
    }

    Counts u_recursion(const Counts &accepted)
    {
        const std::size_t m = accepted.size();
        if (m < 2)
        {
            throw MTooSmall("U is defined for m >= 2");
        }
        const Counts S = tail_sums(accepted);
        Counts U(m - 1, 0);
        U[m - 2] = accepted[m - 1];
        for (std::size_t h = m - 2; h-- > 0;)
        {
            // 0-based: U[h] is U_{h+1}, S[h + 1] is S_{h+2}.
            U[h] = std::min(accepted[h], U[h + 1]) + S[h + 1];
        }
        return U;
    }

    std::vector<std::vector<int>> u_candidate_terms(std::size_t m, int h)
    {
        const int mm = static_cast<int>(m);
        std::vector<std::vector<int>> candidates;
        // Per-class bound on D_h..D_j, aggregate bound on the rest.
        for (int j = h; j <= mm - 3; ++j)
        {
            std::vector<int> terms;
            for (int k = h + 1; k <= j + 1; ++k)
            {
                terms.push_back(k);
            }
            terms.push_back(j + 1);
            candidates.push_back(std::move(terms));
        }
        std::vector<int> full;
        for (int k = h + 1; k <= mm; ++k)
        {
            full.push_back(k);
        }
        candidates.push_back(std::move(full));
        if (h <= mm - 2)
        {
            candidates.push_back({h});
        }
        return candidates;
    }

    std::string format_candidate(const std::vector<int> &terms)
    {
        std::string out;
        for (std::size_t i = 0; i < terms.size(); ++i)
        {
            if (i > 0)
            {
                out += '+';
            }
            out += "S_" + std::to_string(terms[i]);
        }
        return out;
    }

    Counts u_explicit(const Counts &accepted)
    {
        const std::size_t m = accepted.size();
        if (m < 2)
        {
            throw MTooSmall("U is defined for m >= 2");
        }
        const Counts S = tail_sums(accepted);
        Counts U;
        for (int h = 1; h <= static_cast<int>(m) - 1; ++h)
        {
            std::optional<Count> best;
            for (const auto &terms : u_candidate_terms(m, h))
            {
                Count value = 0;
                for (int k : terms)
                {
                    value += s_at(S, k);
                }
                if (!best || value < *best)
                {
                    best = value;
                }
            }
            U.push_back(*best);
        }
        return U;
    }

    std::vector<Rational> compute_delta(const ValueProfile &profile, const Rational &cStar, const Counts &U,
                                        const Counts &S)
    {
        const int m = static_cast<int>(profile.m());
        if (m < 3)
        {
            throw MTooSmall("Delta is defined only for m >= 3");
        }
        std::vector<Rational> delta;
        for (int h = 1; h <= m - 2; ++h)
        {
            const Rational tail = lower_class_weight(profile, h - 1);
            const Rational uCoeff = (profile.value(h) + tail) - cStar * (profile.value(h - 1) + tail);
            const Rational sCoeff = (profile.value(h - 1) + tail) - cStar * tail;
            Rational d = uCoeff * U[static_cast<std::size_t>(h - 1)] + sCoeff * s_at(S, h);
            for (int k = h + 1; k <= m - 1; ++k)
            {
                d += (profile.value(k) - profile.value(k - 1)) * U[static_cast<std::size_t>(k - 1)];
            }
            d.canonicalize();
            delta.push_back(d);
        }
        return delta;
    }

    std::vector<Verdict> check_delta_chain(const ValueProfile &profile, const ComparativeReport &report)
    {
        const int m = static_cast<int>(profile.m());
        const Rational &cStar = report.bound.c_star;
        std::vector<Verdict> out;

        Verdict cSign{"c_sign"};
        for (int i = 1; i <= m - 1; ++i)
        {
            const Rational tail = lower_class_weight(profile, i);
            const Rational lhs = (profile.value(i) + tail) - cStar * (profile.value(i + 1) + tail);
            if (lhs > 0)
            {
                cSign = fail(cSign, i, std::nullopt, "positive: " + format_rational(lhs));
                break;
            }
        }
        out.push_back(cSign);

        Verdict uTail{"u_tail_bound"};
        for (int h = 1; h <= m - 1; ++h)
        {
            Count tail = 0;
            for (int l = h; l <= m - 1; ++l)
            {
                tail += report.D[static_cast<std::size_t>(l - 1)];
            }
            if (tail > report.U[static_cast<std::size_t>(h - 1)])
            {
                uTail = fail(uTail, h, std::nullopt, std::to_string(tail) + " > U=" + std::to_string(report.U[static_cast<std::size_t>(h - 1)]));
                break;
            }
        }
        out.push_back(uTail);

        Rational weightedDeficit = 0;
        for (int h = 1; h <= m - 1; ++h)
        {
            weightedDeficit += profile.value(h) * report.D[static_cast<std::size_t>(h - 1)];
        }
        const Rational scaledBenefit = cStar * weighted(profile, report.A);

        if (m >= 3)
        {
            const auto &delta = report.delta;
            Verdict deltaStep{"delta_step"};
            for (int h = 1; h <= m - 3; ++h)
            {
                const Rational rhs = cStar * profile.value(h) * report.A[static_cast<std::size_t>(h - 1)] +
                                     delta[static_cast<std::size_t>(h)];
                if (delta[static_cast<std::size_t>(h - 1)] > rhs)
                {
                    deltaStep = fail(deltaStep, h, std::nullopt,
                                  format_rational(delta[static_cast<std::size_t>(h - 1)]) + " > " + format_rational(rhs));
                    break;
                }
            }
            out.push_back(deltaStep);

            Verdict deltaTail{"delta_tail"};
            Rational rhs = 0;
            for (int h = m - 2; h <= m; ++h)
            {
                rhs += cStar * profile.value(h) * report.A[static_cast<std::size_t>(h - 1)];
            }
            if (delta.back() > rhs)
            {
                deltaTail = fail(deltaTail, m - 2, std::nullopt, format_rational(delta.back()) + " > " + format_rational(rhs));
            }
            out.push_back(deltaTail);

            Verdict entry{"delta_entry"};
            if (weightedDeficit > delta.front())
            {
                entry = fail(entry, std::nullopt, std::nullopt,
                             format_rational(weightedDeficit) + " > Delta_1=" + format_rational(delta.front()));
            }
            out.push_back(entry);
        }
        else
        {
            // v_1 D_1 <= v_1 A_2 = c_1 v_2 A_2 <= c* (v_1 A_1 + v_2 A_2)
            Verdict chain{"m2_chain"};
            const Rational mid = profile.value(1) * report.A[1];
            if (weightedDeficit > mid || mid != report.bound.c[0] * profile.value(2) * report.A[1] || mid > scaledBenefit)
            {
                chain = fail(chain, std::nullopt, std::nullopt, "two-class chain broken");
            }
            out.push_back(chain);
        }

        Verdict closing{"theorem_chain"};
        if (weightedDeficit > scaledBenefit)
        {
            closing = fail(closing, std::nullopt, std::nullopt,
                           format_rational(weightedDeficit) + " > " + format_rational(scaledBenefit));
        }
        out.push_back(closing);
        return out;
    }

    bool ComparativeReport::all_ok() const
    {
        return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict &v) { return v.ok; });
    }

    const Verdict *ComparativeReport::find(std::string_view name) const
    {
        for (const auto &v : verdicts)
        {
            if (v.name == name)
            {
                return &v;
            }
        }
        return nullptr;
    }

    ComparativeReport verify_ledgers(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                     const GreedyRun &greedy, const Ledger &optLedger, const Schedule &optSchedule)
    {
        check_same_trace(greedy.ledger, optLedger);
        const std::size_t m = profile.m();

        ComparativeReport r;
        r.m = m;
        r.greedy_benefit = greedy.ledger.benefit_transmitted;
        r.opt_benefit = optLedger.benefit_transmitted;
        r.greedy_schedule = greedy.schedule;
        r.opt_schedule = optSchedule;
        r.bound = compute_c(profile);

        r.verdicts.push_back(check_ledger_identity(greedy.ledger, caps, "greedy_ledger_identity"));
        r.verdicts.push_back(check_ledger_identity(optLedger, caps, "opt_ledger_identity"));

        Verdict drained{"drained_end_state"};
        for (const Ledger *l : {&greedy.ledger, &optLedger})
        {
            const auto &fin = l->final_entry();
            if (fin.accepted != fin.transmitted ||
                std::any_of(fin.occupancy.begin(), fin.occupancy.end(), [](Count q) { return q != 0; }))
            {
                drained = fail(drained, std::nullopt, fin.event_index, "queues not empty at end");
            }
        }
        r.verdicts.push_back(drained);

        r.xi = compute_xi(greedy.ledger, optLedger);
        r.phi = compute_phi(greedy.ledger, optLedger);
        r.verdicts.push_back(check_xi_nonneg(r.xi));
        for (auto &v : check_xi_claims(trace, greedy.ledger, optLedger, r.xi))
        {
            r.verdicts.push_back(std::move(v));
        }
        r.verdicts.push_back(check_phi_nonneg(r.phi));
        r.verdicts.push_back(check_abs_lemma(greedy.ledger, optLedger));

        r.A = greedy.ledger.final_entry().accepted;
        r.A_star = optLedger.final_entry().accepted;
        r.D.resize(m);
        for (std::size_t h = 0; h < m; ++h)
        {
            r.D[h] = r.A_star[h] - r.A[h];
        }
        r.S = tail_sums(r.A);

        Verdict topClass{"top_class_equal"};
        if (r.A_star[m - 1] != r.A[m - 1])
        {
            topClass = fail(topClass, static_cast<int>(m), std::nullopt,
                          "A*_m=" + std::to_string(r.A_star[m - 1]) + " A_m=" + std::to_string(r.A[m - 1]));
        }
        r.verdicts.push_back(topClass);
        for (auto &v : check_D_bounds(r.D, r.S))
        {
            r.verdicts.push_back(std::move(v));
        }

        r.U = u_recursion(r.A);
        Verdict uEq{"u_recursion_explicit"};
        if (r.U != u_explicit(r.A))
        {
            uEq = fail(uEq, std::nullopt, std::nullopt, "recursive and explicit U differ");
        }
        r.verdicts.push_back(uEq);

        if (m >= 3)
        {
            r.delta = compute_delta(profile, r.bound.c_star, r.U, r.S);
        }
        for (auto &v : check_delta_chain(profile, r))
        {
            r.verdicts.push_back(std::move(v));
        }

        Verdict theorem{"theorem_ratio"};
        if (r.greedy_benefit > 0)
        {
            Rational ratio = r.opt_benefit / r.greedy_benefit;
            ratio.canonicalize();
            r.ratio = ratio;
        }
        else if (r.opt_benefit == 0)
        {
            r.ratio = Rational(1);
        }
        if (!r.ratio)
        {
            theorem = fail(theorem, std::nullopt, std::nullopt, "Greedy benefit is zero while Opt's is positive");
        }
        else if (*r.ratio > r.bound.upper)
        {
            theorem = fail(theorem, std::nullopt, std::nullopt,
                           "ratio " + format_rational(*r.ratio) + " > " + format_rational(r.bound.upper));
        }
        r.verdicts.push_back(theorem);
        return r;
    }

    ComparativeReport verify_all(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                 const OptOptions &options)
    {
        if (!trace.drained())
        {
            throw NotDrained("verify_all requires a drained trace");
        }
        GreedyRun greedy = run_greedy(trace, caps, profile);
        OptResult opt = opt_search(trace, caps, profile, options);
        const Ledger optLedger = replay_schedule(trace, caps, profile, opt.schedule);
        return verify_ledgers(trace, caps, profile, greedy, optLedger, opt.schedule);
    }

    TheoremCheck verify_theorem(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                const OptOptions &options)
    {
        if (!trace.drained())
        {
            throw NotDrained("verify_theorem requires a drained trace");
        }
        TheoremCheck check;
        check.greedy_benefit = run_greedy(trace, caps, profile).ledger.benefit_transmitted;
        check.opt_benefit = opt_search(trace, caps, profile, options).benefit;
        check.bound = compute_c(profile).upper;
        if (check.greedy_benefit > 0)
        {
            check.ratio = check.opt_benefit / check.greedy_benefit;
            check.ratio.canonicalize();
            check.holds = check.ratio <= check.bound;
        }
        else
        {
            check.ratio = 1;
            check.holds = check.opt_benefit == 0;
        }
        return check;
    }

    std::string format_report(const ComparativeReport &r)
    {
        auto join = [](const Counts &v) {
            std::string s;
            for (std::size_t i = 0; i < v.size(); ++i)
            {
                s += (i ? " " : "") + std::to_string(v[i]);
            }
            return s;
        };
        std::ostringstream out;
        out << "greedy=" << format_rational(r.greedy_benefit) << " opt=" << format_rational(r.opt_benefit)
            << " ratio=" << (r.ratio ? format_rational(*r.ratio) : std::string("undefined")) << '\n';
        out << "bound=" << format_rational(r.bound.upper) << " c*=" << format_rational(r.bound.c_star) << '\n';
        out << "greedy_schedule=" << format_schedule(r.greedy_schedule) << '\n';
        out << "opt_schedule=" << format_schedule(r.opt_schedule) << '\n';
        out << "A=" << join(r.A) << '\n';
        out << "A*=" << join(r.A_star) << '\n';
        out << "D=" << join(r.D) << '\n';
        out << "S=" << join(r.S) << '\n';
        out << "U=" << join(r.U) << '\n';
        if (!r.delta.empty())
        {
            out << "Delta=";
            for (std::size_t i = 0; i < r.delta.size(); ++i)
            {
                out << (i ? " " : "") << format_rational(r.delta[i]);
            }
            out << '\n';
        }
        for (const auto &v : r.verdicts)
        {
            out << format_verdict(v) << '\n';
        }
        return out.str();
    }
}
