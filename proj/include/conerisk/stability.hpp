/**
 * Dual side: predictable pre-images M_t(D), the stable hull [D], pasting of
 * measures at stopping times and the search for pastings that leave Q.
 *
 * A dual cone D lives in density coordinates of width w (w = d+1 for lifted
 * portfolio duals, 1 for plain densities), paired with claims through the
 * weights p repeated w times.
 */
#ifndef CONERISK_STABILITY_HPP
#define CONERISK_STABILITY_HPP

#include <optional>
#include <string>

#include "conerisk/cone.hpp"
#include "conerisk/market.hpp"
#include "conerisk/risk.hpp"
#include "conerisk/space.hpp"

namespace conerisk {

/**
 * Closed convex hull of M_t(D): the densities whose F_{t+1}-conditional
 * expectation lies in the F_t-cone of E[D | F_{t+1}].  Both descriptions
 * are returned: generators of that F_t-cone plus +-ker E, and its facets
 * composed with E.
 */
template <typename F>
PolyCone<F> predictable_preimage(const FilteredSpace<F>& space, const PolyCone<F>& d, Index width, int t);

/** [D]: intersection of the predictable pre-images over t = 0..T-1 (inequalities only). */
template <typename F>
PolyCone<F> stable_hull(const FilteredSpace<F>& space, const PolyCone<F>& d, Index width);

/**
 * D == [D].  On failure the witness is a point of [D] outside D together
 * with the inequality of D it violates.
 */
template <typename F>
ConeComparison<F> is_predictably_stable(const FilteredSpace<F>& space, const PolyCone<F>& d, Index width);

/** Lifted A_0(V)*: generators Z V for the vertex densities Z of Q. */
template <typename F>
PolyCone<F> lifted_dual(const RiskMeasure<F>& rm, const NumeraireVec<F>& v);

/** Z_tau > 0 where W_tau = 0: the pasted density would divide by zero. */
class PasteError : public std::runtime_error
{
    public:
        explicit PasteError(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Q pasted with Q' at tau: density (Z_tau / W_tau) W where Z, W are the
 * densities of Q, Q'.  Atoms with Z_tau = 0 get mass 0.
 */
template <typename F>
Vec<F> paste(const FilteredSpace<F>& space, const Vec<F>& q, const Vec<F>& q_prime, const StoppingTime& tau);

/**
 * Can Q be pasted with Q' at tau while preserving conditional V-expectations?
 * Per atom, with E_Q[V | F_tau] and E_Q'[V | F_tau]:
 *   both defined       -> they must agree componentwise;
 *   only Q' defined    -> allowed, the pasting puts no mass there;
 *   only Q defined     -> refused, the pasting is undefined;
 *   neither defined    -> allowed.
 */
template <typename F>
bool pastable(const FilteredSpace<F>& space, const NumeraireVec<F>& v, const Vec<F>& q, const Vec<F>& q_prime,
              const StoppingTime& tau);

template <typename F>
struct PasteWitness
{
    StoppingTime tau;
    Index first = 0, second = 0;        // indices into the candidate list
    Vec<F> q, q_prime, pasted;
    std::string violated;
};

/**
 * Pairs of distinct candidates (vertices of a polytope Q, or the witness
 * list of an oracle set) times every stopping time, in the order
 * (first, second, tau).  Returns the first admissible pasting that is not a
 * member of Q.  A hit refutes V-m-stability; a miss proves nothing.
 */
template <typename F>
std::optional<PasteWitness<F>> vstability_witness_search(const RiskMeasure<F>& rm, const NumeraireVec<F>& v,
                                                         std::optional<std::size_t> cap = std::nullopt);

/** K_t against the dual of conv M_t(lifted A_0(V)*). */
template <typename F>
ConeComparison<F> crucial_claim_check(const RiskMeasure<F>& rm, const NumeraireVec<F>& v, int t);

}   // namespace conerisk

#endif
