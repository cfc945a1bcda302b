#pragma once

#include "segq/engine.hpp"
#include "segq/model.hpp"
#include "segq/offline_opt.hpp"

#include <optional>
#include <string>
#include <vector>

// Greedy-vs-Opt quantities and the inequalities that relate them.
//
// U, S and Delta are indexed like classes: U[h - 1] is U_h, S[h - 1] is S_h,
// delta[h - 1] is Delta_h.

namespace segq
{
    struct Verdict
    {
        std::string name;
        bool ok = true;
        std::optional<int> h;         // first failing class, when applicable
        std::optional<std::size_t> e; // first failing event index, when applicable
        std::string detail;
    };

    /// `verdict <name> <true|false> [h=.. e=..]`
    std::string format_verdict(const Verdict &v);

    /// Integer matrix over classes h in [1, m-1] and ledger entries e_0..e_N.
    class ClassEventMatrix
    {
    public:
        ClassEventMatrix() = default;
        ClassEventMatrix(std::size_t classes, std::size_t events) : m_classes(classes), m_events(events), m_data(classes * events, 0) {}

        std::size_t classes() const noexcept { return m_classes; }
        std::size_t events() const noexcept { return m_events; }

        Count &at(int h, std::size_t e) { return m_data.at(static_cast<std::size_t>(h - 1) * m_events + e); }
        Count at(int h, std::size_t e) const { return m_data.at(static_cast<std::size_t>(h - 1) * m_events + e); }

    private:
        std::size_t m_classes = 0;
        std::size_t m_events = 0;
        std::vector<Count> m_data;
    };

    /// xi_h(e_i) = delta_h + ... + delta_m - delta*_h. Throws LedgerMismatch.
    ClassEventMatrix compute_xi(const Ledger &greedy, const Ledger &opt);

    /// phi_h(e_i) = A_h + ... + A_m - A*_h. Throws LedgerMismatch.
    ClassEventMatrix compute_phi(const Ledger &greedy, const Ledger &opt);

    Verdict check_xi_nonneg(const ClassEventMatrix &xi);
    Verdict check_phi_nonneg(const ClassEventMatrix &phi);

    /// A = delta + q at every entry, 0 <= q <= B, counters nondecreasing and
    /// at most one unit of total change per event.
    Verdict check_ledger_identity(const Ledger &ledger, const QueueCapacities &caps, std::string name);

    /// Per-send monotonicity of xi under the two sufficient conditions used in
    /// the nonnegativity induction (Greedy holds a packet of class >= h; Opt's
    /// class-h queue is empty). Returns {busy step, opt-empty step}.
    std::vector<Verdict> check_xi_claims(const Trace &trace, const Ledger &greedy, const Ledger &opt,
                                         const ClassEventMatrix &xi);

    /// Sum_{l>=h} (A*_l - A_l) <= Sum_{l>=h} A_l for every h in [1, m].
    Verdict check_abs_lemma(const Ledger &greedy, const Ledger &opt);

    /// S_h = A_h + ... + A_m, h in [1, m].
    Counts tail_sums(const Counts &accepted);

    /// {D_h <= S_{h+1} for h in [1, m-1]; Sum_{l=h}^{m-1} D_l <= S_h for h in [1, m-2]}.
    std::vector<Verdict> check_D_bounds(const Counts &D, const Counts &S);

    /// U_{m-1} = A_m, U_h = min(A_h, U_{h+1}) + S_{h+1}.
    Counts u_recursion(const Counts &accepted);

    /// The m - h candidate bounds on D_h + ... + D_{m-1}, each a list of S
    /// indices to be summed (e.g. {2, 3, 3} is S_2 + S_3 + S_3), in the order
    /// chained-then-full-then-aggregate.
    std::vector<std::vector<int>> u_candidate_terms(std::size_t m, int h);

    /// `S_2+S_3+S_3`
    std::string format_candidate(const std::vector<int> &terms);

    /// U_h as the minimum over u_candidate_terms.
    Counts u_explicit(const Counts &accepted);

    /// Delta_h for h in [1, m-2] with v_0 = 0. Throws MTooSmall when m < 3.
    std::vector<Rational> compute_delta(const ValueProfile &profile, const Rational &cStar, const Counts &U,
                                        const Counts &S);

    struct ComparativeReport
    {
        std::size_t m = 0;
        Rational greedy_benefit;
        Rational opt_benefit;
        Schedule greedy_schedule;
        Schedule opt_schedule;
        ClassEventMatrix xi;
        ClassEventMatrix phi;
        Counts A;      // Greedy acceptances at end of trace
        Counts A_star; // Opt acceptances at end of trace
        Counts D;      // A*_h - A_h
        Counts S;
        Counts U;
        std::vector<Rational> delta; // empty when m = 2
        std::optional<Rational> ratio;
        BoundReport bound;
        std::vector<Verdict> verdicts;

        bool all_ok() const;
        const Verdict *find(std::string_view name) const;
    };

    /// Sign condition on every c_i, the Delta descent (m >= 3) or the direct
    /// two-class chain (m = 2), and the weighted-deficit bounds that close the
    /// ratio argument. Reads A, D, U, S, delta and bound from the report.
    std::vector<Verdict> check_delta_chain(const ValueProfile &profile, const ComparativeReport &report);

    /// Builds the full report from already-computed ledgers. verify_all uses
    /// this; tests use it to feed tampered ledgers.
    ComparativeReport verify_ledgers(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                     const GreedyRun &greedy, const Ledger &optLedger, const Schedule &optSchedule);

    /// Greedy, Opt and every check on one drained trace. Throws NotDrained,
    /// ConfigError, StateSpaceExceeded.
    ComparativeReport verify_all(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                 const OptOptions &options = {});

    struct TheoremCheck
    {
        Rational greedy_benefit;
        Rational opt_benefit;
        Rational ratio; // 1 when both benefits are zero
        Rational bound; // 1 + c*
        bool holds = true;
    };

    TheoremCheck verify_theorem(const Trace &trace, const QueueCapacities &caps, const ValueProfile &profile,
                                const OptOptions &options = {});

    /// Human-readable summary followed by one verdict line per check.
    std::string format_report(const ComparativeReport &report);
}
