#include "doctest.h"

#include <random>

#include "conerisk/corpus.hpp"

using namespace conerisk;
using R = Rational;

namespace {

Vec<R> v4(R a, R b, R c, R d)
{
    Vec<R> x(4);
    x << a, b, c, d;
    return x;
}

/** alpha * (v^i e_j - v^j e_i), flattened. */
Vec<R> pair_trade(const NumeraireVec<R>& v, Index i, Index j, const Vec<R>& alpha)
{
    const Index n = v.atoms();
    Mat<R> y = Mat<R>::Zero(n, v.width());
    for (Index a = 0; a < n; ++a) {
        y(a, j) = alpha(a) * v.values()(a, i);
        y(a, i) = -alpha(a) * v.values()(a, j);
    }
    return flatten(y);
}

}   // namespace

TEST_CASE("numeraire validation")
{
    Mat<R> bad = Mat<R>::Ones(2, 2);
    bad(1, 0) = 2;
    CHECK_THROWS(NumeraireVec<R>(bad));
    Mat<R> neg = Mat<R>::Ones(2, 2);
    neg(0, 1) = 0;
    CHECK_THROWS(NumeraireVec<R>(neg));
    CHECK_NOTHROW(NumeraireVec<R>(Mat<R>::Ones(3, 2)));
}

TEST_CASE("portfolio values")
{
    auto s = build_avar4("paper");
    const auto& v = s.numeraires;
    Mat<R> e0 = Mat<R>::Zero(4, 2);
    e0.col(0).setOnes();
    CHECK(portfolio_value(e0, v) == Vec<R>::Ones(4));

    Mat<R> y0(4, 2);
    y0.col(0).setConstant(-2);
    y0.col(1).setConstant(1);
    CHECK(portfolio_value(y0, v) == v4(1, -1, -1, -1));

    Mat<R> pair(4, 2);
    pair.col(0) = -v.column(1);
    pair.col(1).setOnes();
    CHECK(portfolio_value(pair, v) == Vec<R>::Zero(4));

    CHECK(value_map(v) * flatten(y0) == v4(1, -1, -1, -1));
    Mat<R> z = zero_value_basis(v);
    CHECK(z.rows() == 4);
    for (Index k = 0; k < z.rows(); ++k) CHECK(value_map(v) * Vec<R>(z.row(k).transpose()) == Vec<R>::Zero(4));

    CHECK_THROWS(portfolio_value(Mat<R>(Mat<R>::Ones(4, 3)), v));
}

TEST_CASE("portfolio cones")
{
    auto s = build_avar4("paper");
    const auto& v = s.numeraires;
    CHECK(cone_equal(portfolio_cone(PolyCone<R>::full(4), v), PolyCone<R>::full(8)).equal);

    auto a0v = portfolio_cone(acceptance_cone(s.risk_measure(), 0), v);
    Vec<R> y0(8);
    y0 << -2, -2, -2, -2, 1, 1, 1, 1;
    CHECK(cone_member(a0v, y0));
    CHECK_FALSE(cone_member(portfolio_cone(PolyCone<R>::neg_orthant(4), v), y0));

    std::mt19937_64 g(2);
    auto neg = portfolio_cone(PolyCone<R>::neg_orthant(4), v);
    for (int k = 0; k < 10; ++k) {
        Vec<R> alpha(4);
        for (Index a = 0; a < 4; ++a) alpha(a) = R(1 + static_cast<long long>(g() % 7)) / R(1 + static_cast<long long>(g() % 3));
        CHECK(cone_member(neg, pair_trade(v, 0, 1, alpha)));
        CHECK(cone_member(neg, pair_trade(v, 1, 0, alpha)));
        CHECK(cone_member(a0v, pair_trade(v, 1, 0, alpha)));
    }
}

TEST_CASE("pair trades lie in every portfolio cone of random scenarios")
{
    std::mt19937_64 g(4);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto s = random_scenario(seed);
        const auto& v = s.numeraires;
        auto cone = portfolio_cone(acceptance_cone(s.risk_measure(), 0), v);
        for (Index i = 0; i < v.width(); ++i)
            for (Index j = 0; j < v.width(); ++j) {
                if (i == j) continue;
                Vec<R> alpha(v.atoms());
                for (Index a = 0; a < v.atoms(); ++a) alpha(a) = R(1 + static_cast<long long>(g() % 5));
                CHECK(cone_member(cone, pair_trade(v, i, j, alpha)));
            }
    }
}

TEST_CASE("K cones")
{
    auto unit = build_avar4("unit");
    auto rm = unit.risk_measure();
    Mat<R> f1(2, 4);
    f1 << -1, -1, 0, 0,
          0, 0, -1, -1;
    CHECK(cone_equal(k_cone(rm, unit.numeraires, 0), PolyCone<R>::from_generators(4, f1)).equal);
    CHECK(cone_equal(k_cone(rm, unit.numeraires, 1), PolyCone<R>::neg_orthant(4)).equal);

    auto paper = build_avar4("paper");
    Vec<R> y0(8);
    y0 << -2, -2, -2, -2, 1, 1, 1, 1;
    CHECK(cone_member(k_cone(paper.risk_measure(), paper.numeraires, 0), y0));

    std::vector<Scenario<R>> all{unit, paper};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) all.push_back(random_scenario(seed));
    for (const auto& s : all) {
        auto r = s.risk_measure();
        const Index n = s.space.atoms(), w = s.numeraires.width();
        for (int t = 0; t < s.space.horizon(); ++t) {
            auto k = ensure_generators(k_cone(r, s.numeraires, t));
            const Partition& next = s.space.partition(t + 1);
            for (Index b = 0; b < next.count(); ++b) {
                Vec<R> cash = Vec<R>::Zero(n * w);
                for (Index a : next.block(b)) cash(a) = -1;
                CHECK(cone_member(k, cash));
            }
            // stable under indicators of F_t-blocks
            const Partition& now = s.space.partition(t);
            for (Index i = 0; i < k.generators().rows(); ++i)
                for (Index b = 0; b < now.count(); ++b) {
                    Vec<R> cut = Vec<R>::Zero(n * w);
                    for (Index c = 0; c < w; ++c)
                        for (Index a : now.block(b)) cut(c * n + a) = k.generators()(i, c * n + a);
                    CHECK(cone_member(k, cut));
                }
        }
    }
}

TEST_CASE("sackV identity")
{
    auto avar = build_avar4("paper");
    CHECK(sackv_check(PolyCone<R>::neg_orthant(4), avar.numeraires, avar.space.probs()).equal);
    CHECK(sackv_check(acceptance_cone(avar.risk_measure(), 0), avar.numeraires, avar.space.probs()).equal);

    // on L-infinity_- both sides are the nonnegative densities times V
    Mat<R> lifted = lift_densities<R>(Mat<R>::Identity(4, 4), avar.numeraires);
    CHECK(cone_equal(dual_cone(portfolio_cone(PolyCone<R>::neg_orthant(4), avar.numeraires),
                               avar.space.pairing_weights(2)),
                     PolyCone<R>::from_generators(8, lifted)).equal);

    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        auto s = random_scenario(seed);
        auto rm = s.risk_measure();
        for (int t = 0; t < s.space.horizon(); ++t)
            CHECK_MESSAGE(sackv_check(acceptance_cone(rm, t), s.numeraires, s.space.probs()).equal, seed);
    }
}
