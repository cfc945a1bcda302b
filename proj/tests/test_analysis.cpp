#include "support.hpp"

#include "segq/adversary.hpp"
#include "segq/analysis.hpp"
#include "segq/engine.hpp"
#include "segq/error.hpp"
#include "segq/offline_opt.hpp"

using namespace segq;
using segq::test::caps;
using segq::test::profile;
using segq::test::q;
using segq::test::trace;

namespace
{
    struct Pair
    {
        Trace t;
        Ledger greedy;
        Ledger opt;
    };

    Pair witness()
    {
        const Trace t = trace("A1 A2 S A1 S S");
        const ValueProfile p = profile({1, 2});
        const QueueCapacities c = caps({1, 1});
        return {t, run_greedy(t, c, p).ledger, replay_schedule(t, c, p, parse_schedule("1,2,1"))};
    }

    std::vector<std::string> candidate_strings(std::size_t m, int h)
    {
        std::vector<std::string> out;
        for (const auto &terms : u_candidate_terms(m, h))
        {
            out.push_back(format_candidate(terms));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<std::string> sorted(std::vector<std::string> v)
    {
        std::sort(v.begin(), v.end());
        return v;
    }
}

TEST_CASE("xi on the witness")
{
    const Pair w = witness();
    const ClassEventMatrix xi = compute_xi(w.greedy, w.opt);
    REQUIRE(xi.classes() == 1);
    REQUIRE(xi.events() == 7);
    CHECK(xi.at(1, 0) == 0);
    // after s_1, s_2, s_3 (events 3, 5, 6)
    CHECK(xi.at(1, 3) == 0);
    CHECK(xi.at(1, 5) == 1);
    CHECK(xi.at(1, 6) == 0);
    // arrivals leave xi unchanged
    CHECK(xi.at(1, 1) == xi.at(1, 0));
    CHECK(xi.at(1, 4) == xi.at(1, 3));
    CHECK(check_xi_nonneg(xi).ok);
}

TEST_CASE("phi on the witness")
{
    const Pair w = witness();
    const ClassEventMatrix phi = compute_phi(w.greedy, w.opt);
    CHECK(phi.at(1, 0) == 0);
    CHECK(phi.at(1, 6) == 0); // A_1 + A_2 - A*_1 = 1 + 1 - 2
    CHECK(check_phi_nonneg(phi).ok);
}

TEST_CASE("nonnegativity checkers report the first negative entry")
{
    ClassEventMatrix mat(2, 4);
    CHECK(check_xi_nonneg(mat).ok);
    mat.at(2, 3) = -1;
    const Verdict v = check_xi_nonneg(mat);
    CHECK_FALSE(v.ok);
    CHECK(v.h == 2);
    CHECK(v.e == 3u);
    CHECK(format_verdict(v) == "verdict xi_nonneg false h=2 e=3");
    CHECK(check_xi_nonneg(ClassEventMatrix(1, 1)).ok);
}

TEST_CASE("ledgers of different lengths")
{
    const Pair w = witness();
    const Ledger shorter = run_greedy(trace("A1 S"), caps({1, 1}), profile({1, 2})).ledger;
    CHECK_THROWS_AS(compute_xi(w.greedy, shorter), LedgerMismatch);
    CHECK_THROWS_AS(compute_phi(shorter, w.opt), LedgerMismatch);
}

TEST_CASE("aggregate acceptance bound")
{
    const Pair w = witness();
    CHECK(check_abs_lemma(w.greedy, w.opt).ok);
    const Ledger empty = run_greedy(Trace{}, caps({1, 1}), profile({1, 2})).ledger;
    CHECK(check_abs_lemma(empty, empty).ok);
}

TEST_CASE("deficit bounds")
{
    const Counts S = tail_sums({1, 1});
    CHECK(S == Counts{2, 1});
    const auto v = check_D_bounds({1, 0}, S);
    REQUIRE(v.size() == 2);
    CHECK(v[0].ok);
    CHECK(v[1].ok);
    CHECK_FALSE(check_D_bounds({2, 0}, S)[0].ok);
    CHECK(check_D_bounds({0, 0, 0}, {0, 0, 0})[0].ok);
    // D_1 + D_2 = 3 > S_1 = 2 at m = 3 violates only the tail bound
    const auto tail = check_D_bounds({2, 1, 0}, tail_sums({0, 1, 1}));
    CHECK(tail[0].ok);
    CHECK_FALSE(tail[1].ok);
}

TEST_CASE("U recursion examples")
{
    CHECK(u_recursion({2, 1, 1}) == Counts{3, 1});
    CHECK(u_recursion({5, 4}) == Counts{4});
    CHECK(u_recursion({0, 0, 0, 0}) == Counts{0, 0, 0});
    CHECK(u_explicit({2, 1, 1}) == Counts{3, 1});
    CHECK(candidate_strings(3, 1) == sorted({"S_2+S_3", "S_1"}));
}

TEST_CASE("explicit candidate lists at m = 5")
{
    CHECK(candidate_strings(5, 1) == sorted({"S_2+S_2", "S_2+S_3+S_3", "S_2+S_3+S_4+S_5", "S_1"}));
    CHECK(candidate_strings(5, 2) == sorted({"S_3+S_3", "S_3+S_4+S_5", "S_2"}));
    CHECK(candidate_strings(5, 3) == sorted({"S_4+S_5", "S_3"}));
    CHECK(candidate_strings(5, 4) == sorted({"S_5"}));
    for (int h = 1; h <= 4; ++h)
    {
        CHECK(u_candidate_terms(5, h).size() == static_cast<std::size_t>(5 - h));
    }
}

TEST_CASE("U recursion equals the explicit minimum on [0,3]^m")
{
    for (std::size_t m = 2; m <= 6; ++m)
    {
        Counts A(m, 0);
        while (true)
        {
            REQUIRE(u_recursion(A) == u_explicit(A));
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
}

TEST_CASE("Delta at m = 3")
{
    const ValueProfile p = profile({1, 2, 5});
    const Counts A{2, 1, 1};
    const auto delta = compute_delta(p, q("1/2"), u_recursion(A), tail_sums(A));
    REQUIRE(delta.size() == 1);
    CHECK(delta[0] == 4);
    CHECK(compute_delta(p, q("1/2"), {0, 0}, {0, 0, 0}) == std::vector<Rational>{0});
    CHECK_THROWS_AS(compute_delta(profile({1, 2}), q("1/2"), {1}, {1, 1}), MTooSmall);
}

TEST_CASE("Delta at m = 4 matches the symbolic instantiation")
{
    const ValueProfile p = profile({1, 3, 4, 10});
    const Rational cs = compute_c(p).c_star;
    const Counts A{3, 1, 2, 1};
    const Counts U = u_recursion(A);
    const Counts S = tail_sums(A);
    const auto delta = compute_delta(p, cs, U, S);
    REQUIRE(delta.size() == 2);
    // h = 2: (v_2 - c* v_1) U_2 + v_1 S_2 + (v_3 - v_2) U_3
    CHECK(delta[1] == (Rational(3) - cs * 1) * U[1] + Rational(1) * S[1] + Rational(4 - 3) * U[2]);
    // h = 1: v_1 U_1 + (v_2 - v_1) U_2 + (v_3 - v_2) U_3
    CHECK(delta[0] == Rational(1) * U[0] + Rational(2) * U[1] + Rational(1) * U[2]);
}

TEST_CASE("Delta chain on a hand example")
{
    const ValueProfile p = profile({1, 2, 5});
    ComparativeReport r;
    r.m = 3;
    r.A = {2, 1, 1};
    r.A_star = {2, 1, 1};
    r.D = {0, 0, 0};
    r.S = tail_sums(r.A);
    r.U = u_recursion(r.A);
    r.bound = compute_c(p);
    r.delta = compute_delta(p, r.bound.c_star, r.U, r.S);
    for (const auto &v : check_delta_chain(p, r))
    {
        INFO(v.name << " " << v.detail);
        CHECK(v.ok);
    }
}

TEST_CASE("full report on the witness")
{
    const ComparativeReport r = verify_all(append_drain(trace("A1 A2 S A1")), caps({1, 1}), profile({1, 2}));
    CHECK(r.greedy_benefit == 3);
    CHECK(r.opt_benefit == 4);
    REQUIRE(r.ratio);
    CHECK(*r.ratio == q("4/3"));
    CHECK(r.D == Counts{1, 0});
    CHECK(r.S == Counts{2, 1});
    CHECK(r.U == Counts{1});
    CHECK(r.delta.empty());
    CHECK(r.all_ok());
    REQUIRE(r.find("m2_chain"));
    CHECK(r.find("m2_chain")->ok);
    CHECK(r.find("delta_step") == nullptr);
}

TEST_CASE("empty and non-drained traces")
{
    const ComparativeReport r = verify_all(Trace{}, caps({1, 1}), profile({1, 2}));
    REQUIRE(r.ratio);
    CHECK(*r.ratio == 1);
    CHECK(r.all_ok());
    CHECK_THROWS_AS(verify_all(trace("A1"), caps({1, 1}), profile({1, 2})), NotDrained);
    CHECK_THROWS_AS(verify_all(Trace{}, caps({1, 1, 1}), profile({1, 2})), ConfigError);
}

TEST_CASE("theorem check")
{
    const TheoremCheck t = verify_theorem(trace("A1 A2 S A1 S S S"), caps({1, 1}), profile({1, 2}));
    CHECK(t.ratio == q("4/3"));
    CHECK(t.bound == q("3/2"));
    CHECK(t.holds);
    const TheoremCheck e = verify_theorem(Trace{}, caps({1, 1}), profile({1, 2}));
    CHECK(e.ratio == 1);
    CHECK(e.holds);
}

TEST_CASE("tampered ledgers fail the identity check")
{
    const Trace t = trace("A1 S");
    Ledger l = run_greedy(t, caps({1, 1}), profile({1, 2})).ledger;
    CHECK(check_ledger_identity(l, caps({1, 1}), "greedy_ledger_identity").ok);
    l.entries[1].occupancy[0] = 0;
    const Verdict v = check_ledger_identity(l, caps({1, 1}), "greedy_ledger_identity");
    CHECK_FALSE(v.ok);
    CHECK(v.e == 1u);
}

TEST_CASE("every verdict holds on seeded random traces")
{
    struct Config
    {
        ValueProfile p;
        QueueCapacities c;
    };
    const std::vector<Config> configs{
        {profile({1, 2}), caps({1, 1})},
        {profile({1, 2, 5}), caps({1, 1, 1})},
        {profile({1, 3, 4, 10}), caps({2, 1, 2, 1})},
        {profile({1, 2, 3, 7, 18}), caps({1, 2, 1, 1, 2})},
    };
    for (const auto &cfg : configs)
    {
        for (std::uint64_t seed = 1; seed <= 300; ++seed)
        {
            const Trace t = random_drained_trace(cfg.p.m(), 12, seed);
            const ComparativeReport r = verify_all(t, cfg.c, cfg.p);
            for (const auto &v : r.verdicts)
            {
                INFO("m=" << cfg.p.m() << " seed=" << seed << " " << format_verdict(v) << " " << v.detail);
                REQUIRE(v.ok);
            }
        }
    }
}
