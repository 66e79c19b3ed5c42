#include "doctest.h"

#include <random>

#include "conerisk/cone.hpp"
#include "conerisk/corpus.hpp"
#include "conerisk/lp.hpp"
#include "conerisk/market.hpp"

using namespace conerisk;
using R = Rational;

namespace {

R r(long long p, long long q = 1) { return R(p) / R(q); }

Mat<R> rows(std::initializer_list<std::initializer_list<long long>> xs)
{
    std::vector<Vec<R>> out;
    Index dim = 0;
    for (const auto& row : xs) {
        Vec<R> v(static_cast<Index>(row.size()));
        Index i = 0;
        for (long long x : row) v(i++) = R(x);
        dim = v.size();
        out.push_back(v);
    }
    return stack_rows<R>(out, dim);
}

/** Random cone of dimension <= 8: generators, sometimes with a line. */
PolyCone<R> random_cone(std::mt19937_64& g, Index dim)
{
    std::uniform_int_distribution<int> entry(-3, 3), extra(0, 4);
    const Index k = dim + extra(g) - 1;
    Mat<R> gens(std::max<Index>(k, 1), dim);
    for (Index i = 0; i < gens.rows(); ++i)
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

/** Brute-force LP: best vertex of {A x <= b} in dim <= 4 by trying every square subsystem. */
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
            if (rank<R>(sub) < d) return;
            auto x = solve<R>(sub, rhs);
            if (!x) return;
            Vec<R> slack = a * *x - b;
            for (Index i = 0; i < m; ++i)
                if (slack(i) > 0) return;
            R v = c.dot(*x);
            if (!best || v > *best) best = v;
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

}   // namespace

TEST_CASE("orthant gens give -e_i inequalities")
{
    auto c = dd_convert(PolyCone<R>::from_generators(3, Mat<R>::Identity(3, 3)));
    CHECK(c.inequalities().rows() == 3);
    CHECK(dump(c) == "dim 3\ng 0 0 1\ng 0 1 0\ng 1 0 0\nh -1 0 0\nh 0 -1 0\nh 0 0 -1\n");
}

TEST_CASE("halfspace in the plane: -h plus a line")
{
    auto c = dd_convert(PolyCone<R>::from_inequalities(2, rows({{1, 2}})));
    const Mat<R>& g = c.generators();
    CHECK(g.rows() == 3);
    Vec<R> h(2);
    h << 1, 2;
    int along = 0, line = 0;
    for (Index i = 0; i < g.rows(); ++i) {
        Vec<R> v = g.row(i).transpose();
        if (is_zero(h.dot(v))) ++line;
        else if (v == canonical<R>(Vec<R>(-h))) ++along;
    }
    CHECK(along == 1);
    CHECK(line == 2);
    CHECK(cone_equal(c, PolyCone<R>::from_inequalities(2, rows({{1, 2}}))).equal);
}

TEST_CASE("AVaR acceptance cone from its six dual inequalities")
{
    auto s = build_avar4("unit");
    Mat<R> verts = *s.q.vertices;
    auto c = dd_convert(PolyCone<R>::from_inequalities(4, verts));
    Vec<R> x0(4);
    x0 << 1, -1, -1, -1;
    const Mat<R>& g = c.generators();
    bool has_x0 = false;
    for (Index i = 0; i < g.rows(); ++i) has_x0 = has_x0 || Vec<R>(g.row(i).transpose()) == x0;
    CHECK(has_x0);
    for (Index a = 0; a < 4; ++a) {
        Vec<R> e = Vec<R>::Zero(4);
        e(a) = -1;
        bool found = false;
        for (Index i = 0; i < g.rows(); ++i) found = found || Vec<R>(g.row(i).transpose()) == e;
        CHECK(found);
    }
    // Brute force: every generator satisfies every inequality; every facet is tight on 3 independent generators.
    const Mat<R>& h = c.inequalities();
    for (Index i = 0; i < h.rows(); ++i) {
        std::vector<Vec<R>> tight;
        for (Index k = 0; k < g.rows(); ++k) {
            R v = h.row(i).dot(g.row(k));
            CHECK(v <= 0);
            if (is_zero(v)) tight.emplace_back(g.row(k).transpose());
        }
        CHECK(rank<R>(stack_rows<R>(tight, 4)) == 3);
    }
}

TEST_CASE("dd_convert: 100 random cones, round trip and minimality")
{
    std::mt19937_64 g(11);
    int full = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = 2 + static_cast<Index>(trial % 7);
        PolyCone<R> c = random_cone(g, dim);
        PolyCone<R> d = dd_convert(c);
        REQUIRE(d.has_generators());
        REQUIRE(d.has_inequalities());
        CHECK(cone_equal(c, d).equal);

        PolyCone<R> back = dd_convert(PolyCone<R>::from_inequalities(dim, d.inequalities()));
        CHECK(cone_equal(back, c).equal);
        CHECK(cone_equal(PolyCone<R>::from_generators(dim, back.generators()), c).equal);

        // A row is redundant exactly when it lies in the cone of the others (Farkas for inequalities).
        const Mat<R>& gens = d.generators();
        for (Index i = 0; i < gens.rows(); ++i)
            CHECK_FALSE(cone_member(PolyCone<R>::from_generators(dim, drop_row(gens, i)), Vec<R>(gens.row(i).transpose())));
        const Mat<R>& ineqs = d.inequalities();
        for (Index i = 0; i < ineqs.rows(); ++i)
            CHECK_FALSE(cone_member(PolyCone<R>::from_generators(dim, drop_row(ineqs, i)), Vec<R>(ineqs.row(i).transpose())));
        full += rank<R>(gens) == dim;
    }
    CHECK(full > 20);
}

TEST_CASE("bipolar and cone flip on random cones")
{
    std::mt19937_64 g(5);
    for (int trial = 0; trial < 60; ++trial) {
        const Index dim = 2 + static_cast<Index>(trial % 7);
        Vec<R> w(dim);
        for (Index i = 0; i < dim; ++i) w(i) = r(1 + static_cast<long long>(g() % 5), 1 + static_cast<long long>(g() % 3));
        PolyCone<R> c = random_cone(g, dim);
        CHECK(cone_equal(dual_cone(dual_cone(c, w), w), c).equal);

        std::vector<PolyCone<R>> three{random_cone(g, dim), random_cone(g, dim), random_cone(g, dim)};
        std::vector<PolyCone<R>> duals;
        for (const auto& k : three) duals.push_back(dual_cone(k, w));
        CHECK(cone_equal(dual_cone(intersect(three), w), minkowski_sum(duals)).equal);
    }
}

TEST_CASE("cone examples")
{
    auto avar = build_avar4("unit");
    auto verts = *avar.q.vertices;
    auto a0 = PolyCone<R>::from_inequalities(4, verts);
    CHECK(cone_equal(dual_cone(dual_cone(a0, avar.space.probs()), avar.space.probs()), a0).equal);

    // dual of L-infinity_- is the nonnegative orthant
    Vec<R> w = avar.space.probs();
    CHECK(cone_equal(dual_cone(PolyCone<R>::neg_orthant(4), w), PolyCone<R>::orthant(4)).equal);

    // C + {0} = C; a ray and its opposite give a line
    CHECK(cone_equal(minkowski_sum<R>({a0, PolyCone<R>::zero(4)}), a0).equal);
    auto line = minkowski_sum<R>({PolyCone<R>::from_generators(2, rows({{1, 0}})), PolyCone<R>::from_generators(2, rows({{-1, 0}}))});
    CHECK(cone_equal(line, PolyCone<R>::from_inequalities(2, rows({{0, 1}, {0, -1}}))).equal);

    // K_0 V + K_1 V = L-infinity_- for V = 1
    auto rm = avar.risk_measure();
    auto k0 = k_cone(rm, avar.numeraires, 0), k1 = k_cone(rm, avar.numeraires, 1);
    CHECK(cone_equal(minkowski_sum<R>({k0, k1}), PolyCone<R>::neg_orthant(4)).equal);

    CHECK(cone_equal(intersect<R>({a0, PolyCone<R>::full(4)}), a0).equal);
    CHECK(cone_equal(linear_image<R>(Mat<R>::Identity(4, 4), a0), a0).equal);

    // A constant portfolio (-2, 1) is worth X0 under the "paper" numeraire variant, which is not in L-infinity_-
    auto paper = build_avar4("paper");
    auto pre = linear_preimage<R>(value_map(paper.numeraires), PolyCone<R>::neg_orthant(4));
    Vec<R> y0(8);
    y0 << -2, -2, -2, -2, 1, 1, 1, 1;
    CHECK_FALSE(cone_member(pre, y0));
    Vec<R> x0(4);
    x0 << 1, -1, -1, -1;
    CHECK(value_map(paper.numeraires) * y0 == x0);

    CHECK(cone_member(a0, Vec<R>(Vec<R>::Zero(4))));
    CHECK(cone_member(PolyCone<R>::from_generators(4, Mat<R>::Identity(4, 4)), Vec<R>(Vec<R>::Zero(4))));
    CHECK(cone_member(a0, x0));
    CHECK_FALSE(cone_member(PolyCone<R>::neg_orthant(4), x0));

    auto cmp = cone_equal(a0, PolyCone<R>::neg_orthant(4));
    REQUIRE_FALSE(cmp.equal);
    REQUIRE(cmp.witness);
    CHECK(cmp.witness->violated);
}

TEST_CASE("linear program examples")
{
    LinearProgram<R> one(1);
    one.objective << 1;
    one.add_ineq(Vec<R>::Ones(1), R(1));
    auto s1 = lp_solve(one);
    CHECK(s1.status == LpStatus::optimal);
    CHECK(s1.optimum == 1);

    LinearProgram<R> unb(2);
    unb.objective << 1, 1;
    Vec<R> row(2);
    row << 1, 0;
    unb.add_ineq(row, R(0));
    CHECK(lp_solve(unb).status == LpStatus::unbounded);

    LinearProgram<R> inf(1);
    inf.add_ineq(Vec<R>::Ones(1), R(-1));
    inf.add_ineq(Vec<R>(-Vec<R>::Ones(1)), R(-1));
    CHECK(lp_solve(inf).status == LpStatus::infeasible);

    // max E_q[X0] over the AVaR measure set: the simplex cut by q_1 <= 1/2
    LinearProgram<R> avar(4);
    avar.objective << 1, -1, -1, -1;
    avar.nonneg.assign(4, true);
    avar.add_eq(Vec<R>::Ones(4), R(1));
    Vec<R> cap = Vec<R>::Zero(4);
    cap(0) = 1;
    avar.add_ineq(cap, r(1, 2));
    auto s = lp_solve(avar);
    CHECK(s.status == LpStatus::optimal);
    CHECK(s.optimum == 0);
}

TEST_CASE("lp_solve agrees with brute-force vertex enumeration")
{
    std::mt19937_64 g(3);
    std::uniform_int_distribution<int> entry(-4, 4);
    int optimal = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const Index d = 1 + trial % 4;
        const Index extra = 10 - 2 * d;   // a box keeps every instance bounded
        const Index m = 2 * d + (extra > 0 ? 1 + static_cast<Index>(g() % static_cast<std::uint64_t>(extra)) : 0);
        Mat<R> a = Mat<R>::Zero(m, d);
        Vec<R> b(m);
        for (Index i = 0; i < d; ++i) {
            a(2 * i, i) = 1;
            a(2 * i + 1, i) = -1;
            b(2 * i) = 3 + entry(g);
            b(2 * i + 1) = 3 + entry(g);
        }
        for (Index i = 2 * d; i < m; ++i) {
            for (Index j = 0; j < d; ++j) a(i, j) = entry(g);
            b(i) = r(entry(g), 1 + static_cast<long long>(g() % 3));
        }
        LinearProgram<R> lp(d);
        for (Index j = 0; j < d; ++j) lp.objective(j) = entry(g);
        for (Index i = 0; i < m; ++i) lp.add_ineq(a.row(i).transpose(), b(i));
        auto sol = lp_solve(lp);
        auto oracle = brute_force_max(lp.objective, a, b);
        if (!oracle) {
            CHECK(sol.status == LpStatus::infeasible);
            ++infeasible;
            continue;
        }
        REQUIRE(sol.status == LpStatus::optimal);
        CHECK(sol.optimum == *oracle);
        Vec<R> slack = a * sol.point - b;
        for (Index i = 0; i < m; ++i) CHECK(slack(i) <= 0);
        ++optimal;
    }
    CHECK(optimal > 100);
    CHECK(infeasible > 0);
}

TEST_CASE("prepared programs match fresh solves")
{
    std::mt19937_64 g(9);
    std::uniform_int_distribution<int> entry(-4, 4);
    LinearProgram<R> base(5);
    base.nonneg.assign(5, true);
    base.add_eq(Vec<R>::Ones(5), R(1));
    for (int i = 0; i < 3; ++i) {
        Vec<R> row(5);
        for (Index j = 0; j < 5; ++j) row(j) = entry(g);
        base.add_ineq(row, R(1));
    }
    PreparedLp<R> prepared(base);
    for (int trial = 0; trial < 40; ++trial) {
        LinearProgram<R> lp = base;
        for (Index j = 0; j < 5; ++j) lp.objective(j) = entry(g);
        auto fresh = lp_solve(lp);
        auto reused = prepared.maximize(lp.objective);
        CHECK(fresh.status == reused.status);
        if (fresh.status == LpStatus::optimal) CHECK(fresh.optimum == reused.optimum);
    }
}
