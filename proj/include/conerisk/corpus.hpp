/**
 * Built-in scenarios: the four-atom AVaR market, the four-atom
 * Haezendonck-Goovaerts ball over Q(sqrt 2), a grid discretisation of the
 * two-period transaction-cost market, and seeded random scenarios.
 */
#ifndef CONERISK_CORPUS_HPP
#define CONERISK_CORPUS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "conerisk/market.hpp"
#include "conerisk/risk.hpp"

namespace conerisk {

template <typename F>
struct Scenario
{
    std::string name;
    FilteredSpace<F> space;
    NumeraireVec<F> numeraires;
    RepresentingSet<F> q;
    std::map<std::string, bool> expected;   // property -> verdict the scenario is known to have

    RiskMeasure<F> risk_measure() const { return RiskMeasure<F>(space, q); }
};

using AnyScenario = std::variant<Scenario<Rational>, Scenario<Quad2>>;

/** numeraire: "unit" for V = 1, "paper" for V = (1, 3*1_{1} + 1_{2,3,4}). */
Scenario<Rational> build_avar4(std::string_view numeraire);

/** numeraire: "unit" or "paper" for V = (1, sqrt2*1_{1} + 1, sqrt2*1_{3} + 1). */
Scenario<Quad2> build_haezendonck4(std::string_view numeraire);

/**
 * n x n grid of (N1, N2) quantile midpoints, truncation level m (only the
 * frozen level 3 is available), cost lambda in (0, 1).  numeraire "paper"
 * gives V = (1, v1), "unit" gives V = 1.
 */
Scenario<Rational> build_txcost(int n, const Rational& lambda, const Rational& m, std::string_view numeraire = "paper");

/** Grid sizes with frozen quantiles. */
std::vector<int> txcost_grid_sizes();

/**
 * Deterministic from the seed through the 64-bit MMIX linear congruential
 * generator x <- 6364136223846793005 x + 1442695040888963407 (draws use the
 * top 31 bits).  T in 1..3, root branching 2 and later branching 1-2 within
 * 8 atoms, integer probability weights 1..9, d in 0..2 with numeraire values
 * k/4 (k = 1..16), and 1-5 random measures plus the mix of P with the first.
 */
Scenario<Rational> random_scenario(std::uint64_t seed);

/** Names accepted by corpus_get: avar4, haezendonck4, txcost4, txcost8, txcost16. */
std::vector<std::string> corpus_names();

/** Throws std::invalid_argument for an unknown name or numeraire variant. */
AnyScenario corpus_get(std::string_view name, std::string_view numeraire);

}   // namespace conerisk

#endif
