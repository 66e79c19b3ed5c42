// The four-atom AVaR market: every value is checked exactly.
#include "doctest.h"

#include "conerisk/consistency.hpp"
#include "conerisk/corpus.hpp"

using namespace conerisk;

namespace {

Rational r(long long p, long long q = 1) { return Rational(p) / Rational(q); }

Vec<Rational> v4(Rational a, Rational b, Rational c, Rational d)
{
    Vec<Rational> x(4);
    x << a, b, c, d;
    return x;
}

const Vec<Rational> x0 = v4(1, -1, -1, -1);

}   // namespace

TEST_CASE("rho of X0")
{
    auto s = build_avar4("unit");
    auto rm = s.risk_measure();
    CHECK(rho(rm, 0, x0) == v4(0, 0, 0, 0));
    CHECK(rho(rm, 1, x0) == v4(1, 1, -1, -1));
    CHECK(rho(rm, 0, rho(rm, 1, x0)) == v4(1, 1, 1, 1));
    CHECK(rho(rm, 2, x0) == x0);
}

TEST_CASE("acceptance cones")
{
    auto rm = build_avar4("unit").risk_measure();
    CHECK(cone_equal(acceptance_cone(rm, 1), PolyCone<Rational>::neg_orthant(4)).equal);
    CHECK(cone_equal(acceptance_cone(rm, 2), PolyCone<Rational>::neg_orthant(4)).equal);
    Mat<Rational> g(5, 4);
    g << 1, -1, -1, -1,
        -1, 0, 0, 0,
         0, -1, 0, 0,
         0, 0, -1, 0,
         0, 0, 0, -1;
    auto a0 = acceptance_cone(rm, 0);
    CHECK(cone_equal(a0, PolyCone<Rational>::from_generators(4, g)).equal);
    CHECK(cone_member(a0, x0));
    CHECK_FALSE(cone_member(PolyCone<Rational>::neg_orthant(4), x0));
}

TEST_CASE("dual of A_0 is generated by the six vertex densities")
{
    auto s = build_avar4("unit");
    auto rm = s.risk_measure();
    auto dual = dual_cone(acceptance_cone(rm, 0), s.space.probs());
    auto vertices = PolyCone<Rational>::from_generators(4, dual_generators(rm));
    CHECK(cone_equal(dual, vertices).equal);
    for (Index k = 0; k < dual_generators(rm).rows(); ++k)
        for (Index a = 0; a < 4; ++a) CHECK(dual_generators(rm)(k, a) <= Rational(50));
}

TEST_CASE("epsilon")
{
    auto unit = build_avar4("unit");
    auto paper = build_avar4("paper");
    auto rm = unit.risk_measure();
    CHECK(epsilon(rm, unit.numeraires, 0, x0) == v4(1, 1, 1, 1));
    CHECK(epsilon(paper.risk_measure(), paper.numeraires, 0, x0) == v4(0, 0, 0, 0));
    CHECK(epsilon(rm, unit.numeraires, 1, x0) == rho(rm, 1, x0));
}

TEST_CASE("K cones")
{
    auto unit = build_avar4("unit");
    auto rm = unit.risk_measure();
    Mat<Rational> f1(2, 4);
    f1 << -1, -1, 0, 0,
          0, 0, -1, -1;
    CHECK(cone_equal(k_cone(rm, unit.numeraires, 0), PolyCone<Rational>::from_generators(4, f1)).equal);
    CHECK(cone_equal(k_cone(rm, unit.numeraires, 1), PolyCone<Rational>::neg_orthant(4)).equal);

    auto paper = build_avar4("paper");
    Mat<Rational> y0(4, 2);
    y0.col(0).setConstant(-2);
    y0.col(1).setConstant(1);
    CHECK(portfolio_value(y0, paper.numeraires) == x0);
    CHECK(cone_member(k_cone(paper.risk_measure(), paper.numeraires, 0), flatten(y0)));
}

TEST_CASE("theorem triple")
{
    auto unit = build_avar4("unit");
    auto r1 = theorem_main_report(unit.risk_measure(), unit.numeraires);
    CHECK(r1.time_consistent == false);
    CHECK(r1.representable == false);
    CHECK(r1.dual_stable == false);
    auto tc = is_v_time_consistent(unit.risk_measure(), unit.numeraires);
    CHECK(tc.level == 0);
    REQUIRE(tc.claim);
    CHECK(*tc.claim == x0);
    CHECK(*tc.rho == v4(0, 0, 0, 0));
    CHECK(*tc.eps == v4(1, 1, 1, 1));

    auto paper = build_avar4("paper");
    auto r2 = theorem_main_report(paper.risk_measure(), paper.numeraires);
    CHECK(r2.time_consistent == true);
    CHECK(r2.representable == true);
    CHECK(r2.dual_stable == true);
}

TEST_CASE("pasting")
{
    auto s = build_avar4("unit");
    auto rm = s.risk_measure();
    Vec<Rational> q1 = v4(r(1, 2), r(1, 2), 0, 0), q2 = v4(r(1, 2), 0, r(1, 2), 0);
    StoppingTime one{1, 1, 1, 1};
    CHECK(paste(s.space, q1, q2, one) == v4(1, 0, 0, 0));
    auto w = vstability_witness_search(rm, s.numeraires);
    REQUIRE(w);
    CHECK(w->q == q1);
    CHECK(w->q_prime == q2);
    CHECK(w->tau == one);
    CHECK(w->pasted == v4(1, 0, 0, 0));

    auto paper = build_avar4("paper");
    CHECK_FALSE(vstability_witness_search(paper.risk_measure(), paper.numeraires));
}

TEST_CASE("crucial claim and sackV")
{
    for (const char* variant : {"unit", "paper"}) {
        auto s = build_avar4(variant);
        auto rm = s.risk_measure();
        for (int t = 0; t < 2; ++t) CHECK(crucial_claim_check(rm, s.numeraires, t).equal);
        CHECK(sackv_check(acceptance_cone(rm, 0), s.numeraires, s.space.probs()).equal);
    }
}

TEST_CASE("decompose X0 with the two-asset numeraire")
{
    auto s = build_avar4("paper");
    auto rm = s.risk_measure();
    auto pis = decompose(rm, s.numeraires, x0);
    CHECK_FALSE(validate_decomposition(rm, s.numeraires, x0, pis));

    Mat<Rational> pi0(4, 2), pi1(4, 2);
    pi0.col(0).setConstant(-2);
    pi0.col(1).setConstant(1);
    pi1 << 0, 0,
           0, 0,
           1, -1,
           1, -1;
    CHECK_FALSE(validate_decomposition(rm, s.numeraires, x0, {pi0, pi1}));

    Vec<Rational> x = x0 - v4(0, 1, 0, 0);
    auto more = decompose(rm, s.numeraires, x);
    CHECK_FALSE(validate_decomposition(rm, s.numeraires, x, more));

    auto unit = build_avar4("unit");
    CHECK_THROWS_AS(decompose(unit.risk_measure(), unit.numeraires, x0), Refusal);
}
