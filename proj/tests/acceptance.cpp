// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <boost/multiprecision/cpp_dec_float.hpp>

#include "conerisk/consistency.hpp"
#include "conerisk/corpus.hpp"
#include "conerisk/lp.hpp"
#include "conerisk/stability.hpp"

using namespace conerisk;
using R = Rational;

namespace {

/** Collects failed checks; the first few are printed with the verdict line. */
struct Tally
{
    std::vector<std::string> failures;
    std::size_t checks = 0;

    void expect(bool ok, const std::string& what)
    {
        ++checks;
        if (!ok) failures.push_back(what);
    }
};

R r(long long p, long long q = 1) { return R(p) / R(q); }

Vec<R> v4(R a, R b, R c, R d)
{
    Vec<R> x(4);
    x << a, b, c, d;
    return x;
}

Vec<R> random_claim(std::mt19937_64& g, Index n)
{
    std::uniform_int_distribution<int> num(-9, 9), den(1, 3);
    Vec<R> x(n);
    for (Index a = 0; a < n; ++a) x(a) = R(num(g)) / R(den(g));
    return x;
}

// ---- criterion 1

void avar_values(Tally& k)
{
    auto s = build_avar4("unit");
    auto rm = s.risk_measure();
    const Vec<R> x0 = v4(1, -1, -1, -1);
    k.expect(rho(rm, 0, x0) == v4(0, 0, 0, 0), "rho_0(X0) = 0");
    k.expect(rho(rm, 1, x0) == v4(1, 1, -1, -1), "rho_1(X0) = (1,1,-1,-1)");
    k.expect(rho(rm, 0, rho(rm, 1, x0)) == v4(1, 1, 1, 1), "rho_0(rho_1(X0)) = 1");
    k.expect(cone_equal(acceptance_cone(rm, 1), PolyCone<R>::neg_orthant(4)).equal, "A_1 = L-infinity_-");
    Mat<R> g(5, 4);
    g << 1, -1, -1, -1,
        -1, 0, 0, 0,
         0, -1, 0, 0,
         0, 0, -1, 0,
         0, 0, 0, -1;
    k.expect(cone_equal(acceptance_cone(rm, 0), PolyCone<R>::from_generators(4, g)).equal, "A_0 = cone{X0} + L-infinity_-");
}

// ---- criterion 2

void avar_triple(Tally& k)
{
    auto unit = build_avar4("unit");
    auto rm = unit.risk_measure();
    auto rep = theorem_main_report(rm, unit.numeraires);
    k.expect(rep.time_consistent == false && rep.representable == false && rep.dual_stable == false, "V=1 gives (false,false,false)");
    auto w = vstability_witness_search(rm, unit.numeraires);
    k.expect(w && w->pasted == v4(1, 0, 0, 0), "V=1 pasting certificate (1,0,0,0)");
    k.expect(w && !oracle_member(unit.q, w->pasted), "(1,0,0,0) is outside Q");

    auto paper = build_avar4("paper");
    auto rp = theorem_main_report(paper.risk_measure(), paper.numeraires);
    k.expect(rp.time_consistent == true && rp.representable == true && rp.dual_stable == true, "V=(1,v1) gives (true,true,true)");
    k.expect(!vstability_witness_search(paper.risk_measure(), paper.numeraires), "V=(1,v1) has no pasting witness");
}

// ---- criterion 3

template <typename F>
void identities(Tally& k, const std::string& name, const RiskMeasure<F>& rm, const NumeraireVec<F>& v)
{
    const auto& space = rm.space();
    const Index w = v.width();
    const Vec<F> weights = space.pairing_weights(w);
    for (int t = 0; t <= space.horizon(); ++t)
        k.expect(sackv_check(acceptance_cone(rm, t), v, space.probs()).equal, name + " sackV at t=" + std::to_string(t));
    for (int t = 0; t < space.horizon(); ++t)
        k.expect(crucial_claim_check(rm, v, t).equal, name + " crucial claim at t=" + std::to_string(t));

    // the stable hull is an intersection of preimages; its dual is the sum of theirs
    PolyCone<F> d = lifted_dual(rm, v);
    std::vector<PolyCone<F>> pre, pre_duals;
    for (int t = 0; t < space.horizon(); ++t) {
        pre.push_back(predictable_preimage(space, d, w, t));
        pre_duals.push_back(dual_cone(pre.back(), weights));
    }
    k.expect(cone_equal(dual_cone(intersect(pre), weights), minkowski_sum(pre_duals)).equal, name + " coneflip");

    PolyCone<F> a0v = portfolio_cone(acceptance_cone(rm, 0), v);
    k.expect(cone_equal(dual_cone(dual_cone(a0v, weights), weights), a0v).equal, name + " bipolar on A_0(V)");
    k.expect(cone_equal(dual_cone(dual_cone(d, weights), weights), d).equal, name + " bipolar on A_0(V)*");

    k.expect(theorem_main_report(rm, v).agreement, name + " agreement");
}

void haezendonck_parts(Tally& k)
{
    for (const char* variant : {"unit", "paper"}) {
        auto s = build_haezendonck4(variant);
        const auto& v = s.numeraires;
        const Index w = v.width();
        const Vec<Quad2> weights = s.space.pairing_weights(w);
        const std::string name = std::string("haezendonck4-") + variant;
        auto neg = PolyCone<Quad2>::neg_orthant(4);
        k.expect(sackv_check(neg, v, s.space.probs()).equal, name + " sackV on L-infinity_-");
        auto nv = portfolio_cone(neg, v);
        k.expect(cone_equal(dual_cone(dual_cone(nv, weights), weights), nv).equal, name + " bipolar");
        std::vector<PolyCone<Quad2>> cones{nv, measurable_subspace(s.space, 1, w), portfolio_cone(PolyCone<Quad2>::orthant(4), v)};
        std::vector<PolyCone<Quad2>> duals;
        for (const auto& c : cones) duals.push_back(dual_cone(c, weights));
        k.expect(cone_equal(dual_cone(intersect(cones), weights), minkowski_sum(duals)).equal, name + " coneflip");
    }
}

void theorem_identities(Tally& k)
{
    for (const char* variant : {"unit", "paper"}) {
        auto s = build_avar4(variant);
        identities(k, s.name, s.risk_measure(), s.numeraires);
    }
    haezendonck_parts(k);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto s = random_scenario(seed);
        k.expect(s.space.atoms() <= 8, "seed " + std::to_string(seed) + " has at most 8 atoms");
        identities(k, "seed " + std::to_string(seed), s.risk_measure(), s.numeraires);
    }
}

// ---- criterion 4

void haezendonck_witness(Tally& k)
{
    auto s = build_haezendonck4("unit");
    auto w = vstability_witness_search(s.risk_measure(), s.numeraires);
    k.expect(w.has_value(), "witness found under V=1");
    if (w) {
        k.expect(w->tau == StoppingTime{1, 1, 1, 1}, "tau = 1");
        Vec<Quad2> density = w->pasted.cwiseQuotient(s.space.probs());
        Vec<Quad2> four = Vec<Quad2>::Zero(4);
        four(0) = Quad2(4);
        k.expect(density == four, "pasted density 4 * 1_1");
        k.expect(quad_mass(w->pasted) == Quad2(1), "sum q^2 = 1");
        k.expect(w->violated.find("1 > 1/2") != std::string::npos, "violation 1 > 1/2");
        k.expect(!oracle_member(s.q, w->pasted), "pasted measure outside Q");
    }
    auto paper = build_haezendonck4("paper");
    k.expect(!vstability_witness_search(paper.risk_measure(), paper.numeraires), "no witness under the sqrt2 numeraires");
}

// ---- criterion 5

void txcost_values(Tally& k)
{
    const R lambda = r(1, 10), up = 1 + lambda;
    const R limit_gap = up * up / (1 - lambda) - up;
    for (int n : {4, 8, 16}) {
        const std::string name = "txcost" + std::to_string(n);
        auto s = build_txcost(n, lambda, R(3));
        auto rm = s.risk_measure();
        Vec<R> v1 = s.numeraires.column(1);
        k.expect(rho(rm, 0, v1)(0) == up, name + " rho_0(v1) = 1 + lambda");
        R gap = rho(rm, 0, rho(rm, 1, v1))(0) - up;
        k.expect(gap > 0, name + " strict gap");
        if (n == 16)
            k.expect(abs(gap - limit_gap) <= limit_gap / 20,
                     name + " gap " + to_decimal(gap, 8) + " within 5% of " + to_decimal(limit_gap, 8));
        k.expect(theorem_main_report(rm, s.numeraires).dual_stable == true, name + " V-m-stable");
    }
}

// ---- criterion 6

/** rho = eps on every claim and t exactly when the scenario is V-time-consistent. */
void cross_validate(Tally& k, const Scenario<R>& s, std::mt19937_64& g)
{
    auto rm = s.risk_measure();
    bool verdict = false;
    std::vector<Vec<R>> claims;
    for (int i = 0; i < 20; ++i) claims.push_back(random_claim(g, s.space.atoms()));
    if (rm.has_vertices()) {
        auto tc = is_v_time_consistent(rm, s.numeraires);
        verdict = tc.holds;
        if (tc.claim) claims.push_back(*tc.claim);
    } else {
        auto rep = theorem_main_report(rm, s.numeraires);
        if (!rep.time_consistent) {
            k.expect(false, s.name + " has no consistency verdict");
            return;
        }
        verdict = *rep.time_consistent;
    }
    bool all_equal = true;
    for (const auto& x : claims)
        for (int t = 0; t < s.space.horizon(); ++t) {
            Vec<R> e = epsilon(rm, s.numeraires, t, x), rh = rho(rm, t, x);
            for (Index a = 0; a < e.size(); ++a)
                if (rh(a) > e(a)) k.expect(false, s.name + " rho_t > eps_t");
            all_equal = all_equal && e == rh;
        }
    k.expect(all_equal == verdict, s.name + " eps/rho agreement with the verdict");
}

void decompositions(Tally& k, const Scenario<R>& s, std::mt19937_64& g)
{
    auto rm = s.risk_measure();
    for (int i = 0; i < 20; ++i) {
        Vec<R> x = random_claim(g, s.space.atoms());
        try {
            auto pis = decompose(rm, s.numeraires, x);
            Vec<R> sum = Vec<R>::Zero(s.space.atoms());
            for (const auto& pi : pis) sum += portfolio_value(pi, s.numeraires);
            k.expect(!validate_decomposition(rm, s.numeraires, x, pis) && sum == x - rho(rm, 0, x), s.name + " decomposition");
        } catch (const Refusal& e) {
            k.expect(false, s.name + " refused: " + e.what());
        }
    }
}

struct RandomD
{
    FilteredSpace<R> space;
    Index width;
    PolyCone<R> d;
};

RandomD random_d(std::uint64_t seed, std::mt19937_64& g)
{
    auto s = random_scenario(seed);
    const Index n = s.space.atoms();
    const Index w = n <= 4 ? 2 : 1;
    const Index dim = n * w;
    const Index count = 2 + static_cast<Index>(g() % 3);
    Mat<R> gens = Mat<R>::Zero(count, dim);
    for (Index i = 0; i < count; ++i) {
        for (Index j = 0; j < dim; ++j) gens(i, j) = R(static_cast<long long>(g() % 4));
        gens(i, static_cast<Index>(g() % static_cast<std::uint64_t>(dim))) += 1;
    }
    return {s.space, w, PolyCone<R>::from_generators(dim, gens)};
}

/**
 * On a stable cone D: if X pastes members of D across F_t blocks and some Z in D
 * has E[Z|F_t] = E[X|F_t], then X is in D.
 */
void eqstab(Tally& k)
{
    std::mt19937_64 g(31);
    int valid = 0, attempts = 0;
    std::uint64_t seed = 0;
    while (valid < 200 && attempts < 4000) {
        auto [space, w, d0] = random_d(1 + (seed++ % 40), g);
        auto d = ensure_generators(stable_hull(space, d0, w));
        const Index n = space.atoms(), dim = n * w;
        const Mat<R>& gens = d.generators();
        for (int rep = 0; rep < 10 && valid < 200; ++rep, ++attempts) {
            auto sample = [&] {
                Vec<R> v = Vec<R>::Zero(dim);
                for (Index i = 0; i < gens.rows(); ++i) v += R(static_cast<long long>(g() % 3)) * gens.row(i).transpose();
                return v;
            };
            const int t = static_cast<int>(g() % static_cast<std::uint64_t>(space.horizon() + 1));
            const Partition& part = space.partition(t);
            Vec<R> y = sample(), wv = sample();
            Vec<R> x = Vec<R>::Zero(dim);
            for (Index b = 0; b < part.count(); ++b) {
                const Vec<R>& src = g() % 2 == 0 ? y : wv;
                R scale = R(1 + static_cast<long long>(g() % 4)) / R(1 + static_cast<long long>(g() % 2));
                for (Index c = 0; c < w; ++c)
                    for (Index a : part.block(b)) x(c * n + a) += scale * src(c * n + a);
            }
            Mat<R> e = cond_expect_map(space, t, w);
            Mat<R> cols = e * gens.transpose();
            LinearProgram<R> lp(cols.cols());
            lp.nonneg.assign(static_cast<std::size_t>(cols.cols()), true);
            Vec<R> target = e * x;
            for (Index i = 0; i < cols.rows(); ++i) lp.add_eq(cols.row(i).transpose(), target(i));
            if (lp_solve(lp).status == LpStatus::infeasible) continue;
            ++valid;
            k.expect(cone_member(d, x), "eqstab sample " + std::to_string(valid));
        }
    }
    k.expect(valid == 200, "200 eqstab samples (got " + std::to_string(valid) + ")");
}

void property_suites(Tally& k)
{
    std::vector<Scenario<R>> all{build_avar4("unit"), build_avar4("paper")};
    for (int n : {4, 8, 16})
        for (const char* variant : {"unit", "paper"}) all.push_back(build_txcost(n, r(1, 10), R(3), variant));

    // rho does not depend on V: one coherence run per representing set
    for (std::size_t i = 0; i < all.size(); i += 2) {
        auto rep = coherence_suite(all[i].risk_measure(), 100, 3);
        k.expect(rep.passed(), all[i].name + " coherence");
        for (const auto& a : rep.axioms)
            if (!a.passed) k.expect(false, all[i].name + " " + a.name + ": " + a.counterexample);
    }

    std::mt19937_64 g(44);
    for (const auto& s : all) cross_validate(k, s, g);

    for (const auto& s : all) {
        auto rm = s.risk_measure();
        bool representable = rm.has_vertices() ? is_predictably_represented(rm, s.numeraires).holds
                                               : theorem_main_report(rm, s.numeraires).representable == true;
        if (representable) decompositions(k, s, g);
    }
    eqstab(k);
}

// ---- criterion 7

PolyCone<R> random_cone(std::mt19937_64& g, Index dim)
{
    std::uniform_int_distribution<int> entry(-3, 3), extra(0, 4);
    const Index count = std::max<Index>(dim + extra(g) - 1, 1);
    Mat<R> gens(count, dim);
    for (Index i = 0; i < count; ++i)
        for (Index j = 0; j < dim; ++j) gens(i, j) = entry(g);
    if (g() % 5 == 0) {
        gens.conservativeResize(gens.rows() + 1, dim);
        gens.row(gens.rows() - 1) = -gens.row(0);
    }
    return PolyCone<R>::from_generators(dim, gens);
}

Mat<R> drop_row(const Mat<R>& m, Index i)
{
    Mat<R> out(m.rows() - 1, m.cols());
    out.topRows(i) = m.topRows(i);
    out.bottomRows(m.rows() - 1 - i) = m.bottomRows(m.rows() - 1 - i);
    return out;
}

std::optional<R> brute_force_max(const Vec<R>& c, const Mat<R>& a, const Vec<R>& b)
{
    const Index d = a.cols(), m = a.rows();
    std::optional<R> best;
    std::vector<Index> pick(static_cast<std::size_t>(d));
    std::function<void(Index, Index)> rec = [&](Index start, Index depth) {
        if (depth == d) {
            Mat<R> sub(d, d);
            Vec<R> rhs(d);
            for (Index i = 0; i < d; ++i) {
                sub.row(i) = a.row(pick[static_cast<std::size_t>(i)]);
                rhs(i) = b(pick[static_cast<std::size_t>(i)]);
            }
            auto x = solve<R>(sub, rhs);
            if (rank<R>(sub) < d || !x) return;
            Vec<R> slack = a * *x - b;
            for (Index i = 0; i < m; ++i)
                if (slack(i) > 0) return;
            R val = c.dot(*x);
            if (!best || val > *best) best = val;
            return;
        }
        for (Index i = start; i < m; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
    return best;
}

using Dec50 = boost::multiprecision::cpp_dec_float_50;

Dec50 dec(const R& x)
{
    return Dec50(boost::multiprecision::numerator(x).str()) / Dec50(boost::multiprecision::denominator(x).str());
}

void engine(Tally& k)
{
    std::mt19937_64 g(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = 2 + static_cast<Index>(trial % 7);
        PolyCone<R> c = random_cone(g, dim);
        PolyCone<R> d = dd_convert(c);
        const std::string tag = "cone " + std::to_string(trial);
        k.expect(cone_equal(c, d).equal, tag + " dd_convert equal");
        PolyCone<R> back = dd_convert(PolyCone<R>::from_inequalities(dim, d.inequalities()));
        k.expect(cone_equal(back, c).equal, tag + " round trip");
        for (const Mat<R>* m : {&d.generators(), &d.inequalities()})
            for (Index i = 0; i < m->rows(); ++i)
                k.expect(!cone_member(PolyCone<R>::from_generators(dim, drop_row(*m, i)), Vec<R>(m->row(i).transpose())),
                         tag + " minimal");
    }

    std::mt19937_64 h(3);
    std::uniform_int_distribution<int> entry(-4, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const Index d = 1 + trial % 4;
        const Index extra = 10 - 2 * d;
        const Index m = 2 * d + (extra > 0 ? 1 + static_cast<Index>(h() % static_cast<std::uint64_t>(extra)) : 0);
        Mat<R> a = Mat<R>::Zero(m, d);
        Vec<R> b(m);
        for (Index i = 0; i < d; ++i) {
            a(2 * i, i) = 1;
            a(2 * i + 1, i) = -1;
            b(2 * i) = 3 + entry(h);
            b(2 * i + 1) = 3 + entry(h);
        }
        for (Index i = 2 * d; i < m; ++i) {
            for (Index j = 0; j < d; ++j) a(i, j) = entry(h);
            b(i) = r(entry(h), 1 + static_cast<long long>(h() % 3));
        }
        LinearProgram<R> lp(d);
        for (Index j = 0; j < d; ++j) lp.objective(j) = entry(h);
        for (Index i = 0; i < m; ++i) lp.add_ineq(a.row(i).transpose(), b(i));
        auto sol = lp_solve(lp);
        auto oracle = brute_force_max(lp.objective, a, b);
        const std::string tag = "lp " + std::to_string(trial);
        if (!oracle)
            k.expect(sol.status == LpStatus::infeasible, tag + " infeasible");
        else
            k.expect(sol.status == LpStatus::optimal && sol.optimum == *oracle, tag + " optimum");
    }

    std::mt19937_64 q(2024);
    std::vector<std::pair<long long, long long>> pell{{1, 1}};
    while (pell.size() < 24) {
        auto [p, qq] = pell.back();
        pell.emplace_back(p + 2 * qq, p + qq);
    }
    const Dec50 root2 = boost::multiprecision::sqrt(Dec50(2));
    for (int i = 0; i < 1000; ++i) {
        Quad2 x;
        if (i % 2 == 0) {
            std::uniform_int_distribution<long long> num(-1000000, 1000000), den(1, 1000000);
            x = Quad2(r(num(q), den(q)), r(num(q), den(q)));
        } else {
            // near-cancellations through the convergents of sqrt2
            auto [p, qq] = pell[static_cast<std::size_t>(q() % pell.size())];
            long long scale = static_cast<long long>(q() % 7) + 1;
            int sg = q() % 2 ? 1 : -1;
            x = Quad2(r(sg * p * scale, qq * scale), r(-sg));
        }
        Dec50 v = dec(x.a()) + dec(x.b()) * root2;
        int want = v > 0 ? 1 : (v < 0 ? -1 : 0);
        k.expect(sign(x) == want, "quad2 sign " + std::to_string(i));
    }
}

struct Criterion
{
    const char* name;
    double limit;   // seconds, 0 for none
    std::function<void(Tally&)> run;
};

}   // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"1 AVaR golden values", 1, avar_values},
        {"2 theorem triple on avar4", 5, avar_triple},
        {"3 theorem-backed identities", 60, theorem_identities},
        {"4 Haezendonck witness", 1, haezendonck_witness},
        {"5 transaction-cost discretisation", 30, txcost_values},
        {"6 property suites", 0, property_suites},
        {"7 engine unit bar", 0, engine},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Tally k;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(k);
        } catch (const std::exception& e) {
            k.failures.push_back(std::string("exception: ") + e.what());
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit > 0 && secs >= c.limit) k.failures.push_back("runtime over " + std::to_string(c.limit) + " s");
        const bool ok = k.failures.empty();
        failed += !ok;
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << "  " << c.name << "  (" << k.checks << " checks, " << secs << " s";
        if (c.limit > 0) line << ", limit " << c.limit << " s";
        line << ")";
        std::cout << line.str() << std::endl;
        for (std::size_t i = 0; i < k.failures.size() && i < 5; ++i) std::cout << "      " << k.failures[i] << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
