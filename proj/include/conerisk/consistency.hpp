/**
 * Primal checkers: the one-step reserve eps_t, V-time-consistency through
 * the acceptance-cone recursion A_t = K_t(V).V + A_{t+1}, predictable
 * representability A_0(V) = sum_t K_t, the three-way equivalence harness and
 * the decomposition of a claim into one-period acceptable portfolios.
 */
#ifndef CONERISK_CONSISTENCY_HPP
#define CONERISK_CONSISTENCY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "conerisk/market.hpp"
#include "conerisk/risk.hpp"
#include "conerisk/stability.hpp"

namespace conerisk {

/** A question the polyhedral machinery cannot settle at this size. */
class ScaleLimit : public std::runtime_error
{
    public:
        explicit ScaleLimit(const std::string& what) : std::runtime_error(what) {}
};

/** A request that is well formed but refused (e.g. decomposing a non-representable set). */
class Refusal : public std::runtime_error
{
    public:
        explicit Refusal(const std::string& what) : std::runtime_error(what) {}
};

/** The three properties disagree: an engine bug, never a property of the input. */
class TheoremViolation : public std::logic_error
{
    public:
        explicit TheoremViolation(const std::string& what) : std::logic_error(what) {}
};

/**
 * eps_t(X) = essinf { rho_t(Y.V) : Y F_{t+1}-measurable, X - Y.V in A_{t+1} },
 * one LP per block of F_t.  Without a vertex list, vertices of Q enter the
 * LP as cuts found by the program over the inequalities of Q.
 */
template <typename F>
Vec<F> epsilon(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t, const Vec<F>& x);

template <typename F>
struct ConsistencyResult
{
    bool holds = true;
    int level = -1;                 // first failing t, counting down from T-1
    std::optional<Vec<F>> claim;    // generator of A_t outside K_t.V + A_{t+1}
    std::optional<Vec<F>> rho, eps; // rho_t and eps_t of that claim
};

template <typename F>
ConsistencyResult<F> is_v_time_consistent(const RiskMeasure<F>& rm, const NumeraireVec<F>& v);

template <typename F>
struct RepresentabilityResult
{
    bool holds = true;
    std::optional<Vec<F>> portfolio;   // generator of A_0(V) outside sum_t K_t
};

template <typename F>
RepresentabilityResult<F> is_predictably_represented(const RiskMeasure<F>& rm, const NumeraireVec<F>& v);

struct EquivalenceReport
{
    std::optional<bool> time_consistent, representable, dual_stable;
    std::map<std::string, std::string> certificates;
    bool agreement = false;
    std::string route;   // "exact" (vertex enumeration) or "cover" (generator coverage)
};

/**
 * Runs the three checkers.  With vertices of Q every property is decided by
 * exact cone identities.  Without them (large inequality-described Q, T <= 2)
 * each generator of A_0 must be covered by a single K_t, on the primal side
 * through rho_t and on the dual side through the pairing with Q.  An
 * uncovered generator with eps_0 > 0 settles time consistency and
 * representability as false and leaves dual stability undecided; any other
 * uncovered generator raises ScaleLimit.  Disagreement among the decided
 * properties raises TheoremViolation carrying the full report.
 */
template <typename F>
EquivalenceReport theorem_main_report(const RiskMeasure<F>& rm, const NumeraireVec<F>& v);

std::string format_report(const EquivalenceReport& r);

/**
 * pi_0..pi_{T-1} (n x (d+1) each) with pi_t in K_t and
 * sum_t pi_t.V = X - rho_0(X).  Refuses when A_0 is not predictably
 * represented.  Without a vertex list the refusal is per claim: the
 * cutting-plane program for this X is infeasible.
 */
template <typename F>
std::vector<Mat<F>> decompose(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, const Vec<F>& x);

/** Empty when the decomposition is valid, otherwise the reason. */
template <typename F>
std::optional<std::string> validate_decomposition(const RiskMeasure<F>& rm, const NumeraireVec<F>& v,
                                                  const Vec<F>& x, const std::vector<Mat<F>>& pis);

}   // namespace conerisk

#endif
